#include "levyatm/pricing.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <ostream>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "levyatm/errors.hpp"
#include "levyatm/simulation.hpp"

namespace levyatm {

namespace {

constexpr double kPi = std::numbers::pi;

// |exp(t psi)| below which the characteristic function is dropped.
constexpr double kCfCut = 1e-16;

}  // namespace

double bs_atm_price(double sigma, double t) {
    if (!(sigma >= 0.0) || !(t >= 0.0)) throw DomainError("bs_atm_price needs sigma, t >= 0");
    return std::erf(sigma * std::sqrt(t) / (2.0 * std::numbers::sqrt2));
}

double implied_vol(double price, double t) {
    if (!(price >= 0.0 && price < 1.0)) throw PriceOutOfRange("ATM price must lie in [0, 1)");
    if (!(t > 0.0)) throw DomainError("implied_vol needs t > 0");
    if (price == 0.0) return 0.0;
    return 2.0 * std::numbers::sqrt2 * boost::math::erf_inv(price) / std::sqrt(t);
}

double share_tail_prob(const LevyModel& share_model, double t, double x) {
    if (share_model.measure_tag != MeasureTag::share)
        throw MeasureTagError("share_tail_prob needs a share-measure model");
    if (!(t > 0.0)) throw DomainError("share_tail_prob needs t > 0");
    auto cf = [&](double u) { return std::exp(t * char_exponent(share_model, cplx(u, 0.0))); };
    auto integrand = [&](double u) { return std::imag(std::exp(cplx(0.0, -u * x)) * cf(u)) / u; };

    // Near u = 0 the integrand is smooth with a finite limit; one flat step stands in for it.
    constexpr double u0 = 1e-6;
    double value = u0 * integrand(u0);
    const double cap = std::abs(x) > 0.0 ? kPi / std::abs(x) : quad::kInf;
    double err_total = 0.0;
    int quiet = 0;
    for (double a = u0, b = 1.0;; a = b, b = std::min(2.0 * b, b + cap)) {
        double err = 0.0;
        const double rough = quad::panel(integrand, a, b, err, quad::kInf);
        value += quad::panel(integrand, a, b, err, 1e-10 * (std::abs(value) + std::abs(rough)) + 1e-17 * (b - a));
        err_total += err;
        quiet = std::abs(cf(b)) / b < kCfCut ? quiet + 1 : 0;
        if (quiet >= 2) break;
        if (b > 1e300) throw QuadratureFailure("share_tail_prob: characteristic function does not decay");
    }
    if (!(err_total <= 1e-9)) throw QuadratureFailure("share_tail_prob: inversion error too large");
    return std::clamp(0.5 + value / kPi, 0.0, 1.0);
}

double carr_madan_price(const LevyModel& share_model, double t) {
    if (share_model.measure_tag != MeasureTag::share)
        throw MeasureTagError("carr_madan_price needs a share-measure model");
    if (!(t > 0.0)) throw DomainError("carr_madan_price needs t > 0");
    constexpr double x_max = 40.0;
    auto cf = [&](double u) { return std::exp(t * char_exponent(share_model, cplx(u, 0.0))); };

    // Every Gil-Pelaez inversion shares exp(t psi*(u)), so it is tabulated once on
    // Gauss-Legendre panels two to a period of e^{-i u x_max}.
    double u_max = 1.0;
    for (int quiet = 0; quiet < 2; u_max *= 2.0) {
        quiet = std::abs(cf(u_max)) / u_max < kCfCut ? quiet + 1 : 0;
        if (u_max > 1e12) throw QuadratureFailure("carr_madan_price: characteristic function does not decay");
    }
    using GL = boost::math::quadrature::gauss<double, 20>;
    const double h = kPi / x_max;
    std::vector<double> nodes;
    std::vector<cplx> weights;
    auto add_panel = [&](double a, double b) {
        for (std::size_t k = 0; k < GL::abscissa().size(); ++k) {
            for (double sgn : {-1.0, 1.0}) {
                const double u = a + 0.5 * (b - a) * (1.0 + sgn * GL::abscissa()[k]);
                nodes.push_back(u);
                weights.push_back(0.5 * (b - a) * GL::weights()[k] * cf(u) / u);
            }
        }
    };
    // Heavy tails leave a |u|^alpha term in the exponent at 0, so the first panel is split dyadically.
    for (double b = h; b > 1e-12 * h; b *= 0.5) add_panel(0.5 * b, b);
    for (double a = h; a < u_max; a += h) add_panel(a, a + h);
    auto tail = [&](double x) {
        double s = 0.0;
        for (std::size_t k = 0; k < nodes.size(); ++k) s += std::imag(std::exp(cplx(0.0, -nodes[k] * x)) * weights[k]);
        return std::clamp(0.5 + s / kPi, 0.0, 1.0);
    };
    auto f = [&](double x) { return std::exp(-x) * tail(x); };
    double value = 0.0;
    double err = 0.0;
    // e^{-40} ~ 4e-18 bounds everything beyond the last panel.
    for (double a = 0.0, b = 1.0 / 64.0; a < x_max; a = b, b = std::min(x_max, 2.0 * b))
        value += quad::panel(f, a, b, err, 1e-12 * (b - a));
    return value;
}

AtmPricer::AtmPricer(const LevyModel& model) {
    if (model.measure_tag != MeasureTag::physical)
        throw MeasureTagError("AtmPricer takes the physical-measure model");
    if (!model.martingale) throw PreconditionViolation("AtmPricer needs a martingale-calibrated model");
    share_ = esscher_transform(model, 1.0);
}

double AtmPricer::operator()(double t) const {
    if (!(t > 0.0)) throw DomainError("ATM price needs t > 0");
    auto z = [&](double u) { return t * char_exponent(share_, cplx(u, 0.5)); };
    auto integrand = [&](double u) {
        const cplx w = z(u);
        // 1 - Re e^w without cancellation when w is small.
        const double one_minus = -std::expm1(w.real()) * std::cos(w.imag()) +
                                 2.0 * std::pow(std::sin(0.5 * w.imag()), 2);
        return one_minus / (u * u + 0.25);
    };
    double value = 0.0;
    int quiet = 0;
    double b = 1.0;
    for (double a = 0.0;; a = b, b *= 2.0) {
        // psi is piecewise in u (the switch to its asymptotic expansion moves with u), so
        // bisection would chase tiny kinks; 1e-10 relative is far inside every tolerance.
        double err = 0.0;
        const double rough = quad::panel(integrand, a, b, err, quad::kInf);
        value += quad::panel(integrand, a, b, err, 1e-10 * (std::abs(value) + std::abs(rough)));
        quiet = std::exp(z(b).real()) < kCfCut ? quiet + 1 : 0;
        if (quiet >= 2) break;
        if (b > 1e300) throw QuadratureFailure("atm_call_price: characteristic function does not decay");
    }
    // Beyond b only 1 / (u^2 + 1/4) is left.
    value += 2.0 * std::atan(0.5 / b);
    return value / kPi;
}

double atm_call_price(const LevyModel& model, double t) { return AtmPricer(model)(t); }

McEstimate atm_call_mc(const LevyModel& model, double t, std::size_t n, std::uint64_t seed) {
    if (n < 1000) throw DomainError("atm_call_mc needs at least 1000 paths");
    LevySimulator sim(model);
    const auto plan = sim.plan(t);
    if (plan.jump_rate * static_cast<double>(n) > 2e10)
        throw SimulationBudgetExceeded("atm_call_mc: expected jump count exceeds the budget");
    std::mt19937_64 gen(seed);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double payoff = std::max(0.0, std::expm1(sim.draw(plan, gen)));
        sum += payoff;
        sum_sq += payoff * payoff;
    }
    const double m = sum / n;
    const double var = std::max(0.0, sum_sq / n - m * m) * n / (n - 1.0);
    return {m, std::sqrt(var / n)};
}

const char* to_string(ModelClass cls) {
    return cls == ModelClass::pure_jump ? "pure_jump" : "with_brownian";
}

namespace {

void gate(const AsymptoticInputs& in) {
    if (in.model_class == ModelClass::with_brownian) {
        if (!(in.sigma > 0.0)) throw DomainError("Brownian prediction needs sigma > 0");
        return;
    }
    if (!in.scaling || !in.law) throw DomainError("pure-jump prediction needs a scaling function and a stable law");
    if (in.force) return;
    for (const auto& a : in.assumptions)
        if (!a.passed) throw AssumptionViolation(a.name, a.detail);
}

}  // namespace

std::vector<double> predict_first_order(const AsymptoticInputs& in, const std::vector<double>& t_grid) {
    gate(in);
    std::vector<double> out;
    out.reserve(t_grid.size());
    if (in.model_class == ModelClass::with_brownian) {
        for (double t : t_grid) out.push_back(in.sigma * std::sqrt(t / (2.0 * kPi)));
        return out;
    }
    const double ez = expected_positive_part(*in.law);
    for (double t : t_grid) out.push_back(ez * (*in.scaling)(t));
    return out;
}

std::vector<double> predict_implied_vol(const AsymptoticInputs& in, const std::vector<double>& t_grid) {
    gate(in);
    if (in.model_class == ModelClass::with_brownian) return std::vector<double>(t_grid.size(), in.sigma);
    const double ez = expected_positive_part(*in.law);
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) out.push_back(std::sqrt(2.0 * kPi) * (*in.scaling)(t) / std::sqrt(t) * ez);
    return out;
}

std::vector<double> maturity_grid(double lo, double hi, int per_decade) {
    if (!(lo > 0.0) || !(hi > lo)) throw GridError("maturity grid needs 0 < lo < hi");
    if (per_decade < 1) throw GridError("points per decade must be at least 1");
    const double decades = std::log10(hi / lo);
    const int n = std::max(1, static_cast<int>(std::ceil(decades * per_decade - 1e-9)));
    return log_grid(lo, hi, n + 1);
}

std::vector<double> parallel_map(std::size_t n, const std::function<double(std::size_t)>& fn) {
    std::vector<double> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < n;) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

PriceCurve price_curve(const LevyModel& model, const std::vector<double>& t_grid, const CurveOptions& opts) {
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1])))
            throw GridError("maturities must be positive and increasing");
    const std::size_t n = t_grid.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    PriceCurve c;
    c.maturities = t_grid;
    AtmPricer pricer(model);
    c.exact_price = parallel_map(n, [&](std::size_t i) { return pricer(t_grid[i]); });
    c.mc.assign(n, std::nullopt);
    if (opts.mc_paths > 0)
        for (std::size_t i = 0; i < n; ++i) c.mc[i] = atm_call_mc(model, t_grid[i], opts.mc_paths, opts.seed + i);

    c.prediction_first_order.assign(n, nan);
    c.B_t.assign(n, nan);
    c.ivol_prediction.assign(n, nan);
    if (opts.asymptotics) {
        const auto& in = *opts.asymptotics;
        c.prediction_first_order = predict_first_order(in, t_grid);
        c.ivol_prediction = predict_implied_vol(in, t_grid);
        for (std::size_t i = 0; i < n; ++i)
            c.B_t[i] = in.model_class == ModelClass::with_brownian ? std::sqrt(t_grid[i]) : (*in.scaling)(t_grid[i]);
    }
    c.ratio.resize(n);
    c.implied_vol.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        c.ratio[i] = c.exact_price[i] / c.B_t[i];
        c.implied_vol[i] = implied_vol(c.exact_price[i], t_grid[i]);
    }
    return c;
}

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_csv(std::ostream& os, const PriceCurve& c, const std::string& config_hash) {
    if (!config_hash.empty()) os << "# config_hash " << config_hash << '\n';
    os << "t,exact,mc,mc_se,prediction,B_t,ratio,ivol,ivol_prediction\n";
    for (std::size_t i = 0; i < c.maturities.size(); ++i) {
        const auto& mc = c.mc[i];
        os << num(c.maturities[i]) << ',' << num(c.exact_price[i]) << ','
           << (mc ? num(mc->estimate) : "") << ',' << (mc ? num(mc->std_error) : "") << ','
           << num(c.prediction_first_order[i]) << ',' << num(c.B_t[i]) << ',' << num(c.ratio[i]) << ','
           << num(c.implied_vol[i]) << ',' << num(c.ivol_prediction[i]) << '\n';
    }
}

}  // namespace levyatm
