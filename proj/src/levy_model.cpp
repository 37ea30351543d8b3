#include "levyatm/levy_model.hpp"

#include <cmath>
#include <numbers>

#include "levyatm/errors.hpp"

namespace levyatm {

namespace {

constexpr cplx kI{0.0, 1.0};
// Beyond kW derivative scales per wavelength the integration-by-parts series is used.
constexpr double kW = 30.0;
constexpr std::size_t kJetOrder = 16;

cplx exp_minus_1_minus_id(cplx w) {
    if (std::abs(w) < 0.5) {
        cplx term = 0.5 * w * w;
        cplx sum = term;
        for (int n = 3; n < 40; ++n) {
            term *= w / static_cast<double>(n);
            sum += term;
            if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
        }
        return sum;
    }
    return std::exp(w) - 1.0 - w;
}

cplx exp_minus_1(cplx w) {
    if (std::abs(w) < 0.5) {
        cplx term = w;
        cplx sum = term;
        for (int n = 2; n < 40; ++n) {
            term *= w / static_cast<double>(n);
            sum += term;
            if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
        }
        return sum;
    }
    return std::exp(w) - 1.0;
}

double derivative_scale(const PieceSpec& p) {
    double d = 1.0 + std::abs(p.power) + p.log_power;
    if (p.osc_amp != 0.0) d += std::abs(p.osc_freq);
    return d;
}

// Antiderivative e^{lambda y} sum_n (-1)^n g^{(n)}(y) / lambda^{n+1} of e^{lambda y} g(y),
// as an asymptotic series. Fails when the terms stop shrinking before reaching round-off.
bool ibp_antiderivative(const Segment& g, cplx lambda, double y, cplx& out, double& err) {
    const auto jet = g.jet<kJetOrder>(y);
    cplx sum = 0.0;
    cplx inv = 1.0 / lambda;
    cplx lam_pow = inv;
    double fact = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n <= kJetOrder; ++n) {
        if (n > 0) fact *= static_cast<double>(n);
        const cplx term = ((n % 2 == 0) ? 1.0 : -1.0) * fact * jet.c[n] * lam_pow;
        sum += term;
        const double mt = std::abs(term);
        if (mt <= 1e-16 * std::abs(sum) || (mt == 0.0 && sum == 0.0 && n >= 4)) {
            out = std::exp(lambda * y) * sum;
            err = std::abs(out) * 1e-16 + mt * std::exp(std::real(lambda) * y);
            return true;
        }
        if (n >= 2 && mt > prev) return false;
        prev = mt;
        lam_pow *= inv;
    }
    if (prev <= 1e-13 * std::abs(sum)) {
        out = std::exp(lambda * y) * sum;
        err = prev * std::exp(std::real(lambda) * y);
        return true;
    }
    return false;
}

// Contribution of one segment to the jump part of psi(u).
quad::Accumulated<cplx> segment_exponent(const Segment& s, cplx u) {
    const double sd = s.side;
    const bool inner = s.inner();
    const cplx lambda = sd * (kI * u + s.spec.exp_rate);
    const double freq = std::abs(std::imag(lambda));
    const double cap = freq > 0.0 ? std::numbers::pi / freq : quad::kInf;

    Segment g = s;
    g.spec.exp_rate = 0.0;
    const double damping = sd * s.spec.exp_rate;
    auto numeric = [&](double y) -> cplx {
        const cplx w = kI * u * (sd * y);
        if (inner) return exp_minus_1_minus_id(w) * s(y);
        // Outer jumps can be large; keep e^{iux} and e^{kappa x} inside one exponential.
        if (std::abs(w) < 0.5) return exp_minus_1(w) * s(y);
        return (std::exp(lambda * y) - std::exp(damping * y)) * g(y);
    };

    if (!std::isfinite(s.b)) {
        const double re = std::real(lambda);
        const bool decays = re < 0.0 || (re == 0.0 && (s.spec.power < -1.0 ||
                                                      (freq > 0.0 && s.spec.power < 0.0)));
        if (!decays) throw DivergentIntegral("characteristic exponent diverges: u outside the strip of analyticity");
    }

    const double mag = std::abs(lambda);
    double cut = mag > 0.0 ? kW * derivative_scale(s.spec) / mag : quad::kInf;
    if (cut >= s.b) return quad::integrate(numeric, s.a, s.b, cap);

    cut = std::max(cut, s.a);
    auto acc = quad::integrate(numeric, s.a, cut, cap);

    cplx upper = 0.0;
    double upper_err = 0.0;
    if (std::isfinite(s.b) && !ibp_antiderivative(g, lambda, s.b, upper, upper_err)) {
        auto rest = quad::integrate(numeric, cut, s.b, cap);
        acc.value += rest.value;
        acc.error += rest.error;
        return acc;
    }
    for (int attempt = 0; attempt < 60; ++attempt) {
        cplx lower = 0.0;
        double lower_err = 0.0;
        if (ibp_antiderivative(g, lambda, cut, lower, lower_err)) {
            acc.value += upper - lower;
            acc.error += upper_err + lower_err;
            auto smooth = inner ? quad::integrate(
                                      [&](double y) { return -(1.0 + kI * u * (sd * y)) * s(y); },
                                      cut, s.b)
                                : quad::integrate([&](double y) { return cplx(-s(y)); }, cut, s.b);
            acc.value += smooth.value;
            acc.error += smooth.error;
            return acc;
        }
        const double next = 2.0 * cut;
        if (next >= s.b) {
            auto rest = quad::integrate(numeric, cut, s.b, cap);
            acc.value += rest.value;
            acc.error += rest.error;
            return acc;
        }
        auto more = quad::integrate(numeric, cut, next, cap);
        acc.value += more.value;
        acc.error += more.error;
        cut = next;
    }
    throw QuadratureFailure("characteristic exponent: asymptotic tail series did not converge");
}

bool near_zero_divergent(const Segment& s) { return s.a == 0.0 && !(s.spec.power > -3.0); }

// Density of the segment multiplied by e^{rate x}, combined inside the exponential.
Segment reweighted(const Segment& s, double rate) {
    Segment r = s;
    r.spec.exp_rate += rate;
    return r;
}

}  // namespace

const char* to_string(MeasureTag tag) { return tag == MeasureTag::share ? "share" : "physical"; }

bool ModelReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

double weighted_outer_moment(const JumpDensity& jumps, double rate, double extra_power,
                             const Tolerance& tol) {
    quad::Accumulated<double> acc;
    for (const auto& s : jumps.segments()) {
        if (s.inner()) continue;
        const Segment w = reweighted(s, rate);
        if (!std::isfinite(s.b)) {
            const double r = s.side * w.spec.exp_rate;
            if (r > 0.0) return quad::kInf;
            if (r == 0.0 && s.spec.power + extra_power >= -1.0) return quad::kInf;
        }
        try {
            auto part = quad::integrate([&](double y) { return std::pow(y, extra_power) * w(y); },
                                        s.a, s.b);
            acc.value += part.value;
            acc.error += part.error;
        } catch (const DivergentIntegral&) {
            return quad::kInf;
        }
    }
    quad::check_tolerance(acc, tol, "outer moment");
    return acc.value;
}

void require_exp_moment(const JumpDensity& jumps, double theta, const char* where) {
    if (!std::isfinite(weighted_outer_moment(jumps, theta, 0.0))) {
        throw MomentFailure(std::string(where) + ": int_{|x|>1} e^{" + std::to_string(theta) +
                            " x} xi(x) dx diverges");
    }
}

namespace {

double levy_integrability(const JumpDensity& jumps, const Tolerance& tol) {
    for (const auto& s : jumps.segments())
        if (near_zero_divergent(s)) return quad::kInf;
    try {
        auto inner = jumps.integrate([](double x) { return x * x; }, 0.0, 1.0);
        quad::check_tolerance(inner, tol, "Levy integrability");
        const double outer = weighted_outer_moment(jumps, 0.0, 0.0, tol);
        return inner.value + outer;
    } catch (const DivergentIntegral&) {
        return quad::kInf;
    }
}

}  // namespace

LevyModel make_model(double b, double sigma, JumpDensity jumps, MeasureTag tag, Tolerance tol) {
    if (!std::isfinite(b)) throw DomainError("drift must be finite");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be finite and >= 0");
    if (!std::isfinite(levy_integrability(jumps, tol)))
        throw DomainError("jump density does not integrate 1 ^ x^2");
    LevyModel m;
    m.b = b;
    m.sigma = sigma;
    m.jumps = std::move(jumps);
    m.measure_tag = tag;
    m.tol = tol;
    return m;
}

cplx jump_exponent(const JumpDensity& jumps, cplx u, const Tolerance& tol) {
    quad::Accumulated<cplx> acc;
    if (u == 0.0) return 0.0;
    for (const auto& s : jumps.segments()) {
        auto part = segment_exponent(s, u);
        acc.value += part.value;
        acc.error += part.error;
    }
    quad::check_tolerance(acc, tol, "char_exponent");
    return acc.value;
}

cplx char_exponent(const LevyModel& model, cplx u) {
    const double im = std::imag(u);
    const double slack = 1e-12;
    const bool in_strip = model.measure_tag == MeasureTag::physical
                              ? (im >= -1.0 - slack && im <= slack)
                              : (im >= -slack && im <= 1.0 + slack);
    if (!in_strip) {
        throw StripViolation(std::string("Im(u) outside the ") + to_string(model.measure_tag) +
                             " strip");
    }
    return kI * u * model.b - 0.5 * model.sigma * model.sigma * u * u +
           jump_exponent(model.jumps, u, model.tol);
}

double martingale_drift(double sigma, const JumpDensity& jumps, const Tolerance& tol) {
    require_exp_moment(jumps, 1.0, "martingale_drift");
    const cplx compensator = jump_exponent(jumps, cplx(0.0, -1.0), tol);
    return -0.5 * sigma * sigma - std::real(compensator);
}

LevyModel make_martingale_model(double sigma, JumpDensity jumps, Tolerance tol) {
    const double b = martingale_drift(sigma, jumps, tol);
    LevyModel m = make_model(b, sigma, std::move(jumps), MeasureTag::physical, tol);
    m.martingale = true;
    const double residual = std::abs(char_exponent(m, cplx(0.0, -1.0)));
    if (residual > 1e-10)
        throw QuadratureFailure("martingale calibration residual " + std::to_string(residual));
    return m;
}

LevyModel esscher_transform(const LevyModel& model, double theta) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("Esscher parameter must lie in [0, 1]");
    if (model.measure_tag != MeasureTag::physical)
        throw MeasureTagError("Esscher transform expects a physical-measure model");
    if (theta == 0.0) return model;
    require_exp_moment(model.jumps, theta, "esscher_transform");
    auto shift = model.jumps.integrate([theta](double x) { return x * std::expm1(theta * x); }, 0.0, 1.0);
    quad::check_tolerance(shift, model.tol, "esscher drift");
    LevyModel out = make_model(model.b + model.sigma * model.sigma * theta + shift.value, model.sigma,
                               model.jumps.tilted(theta),
                               theta == 1.0 ? MeasureTag::share : MeasureTag::physical, model.tol);
    return out;
}

ModelReport validate_model(const LevyModel& model) {
    ModelReport r;
    const bool share = model.measure_tag == MeasureTag::share;
    const double integrability = levy_integrability(model.jumps, model.tol);
    r.checks.push_back({"levy_integrability", integrability, std::isfinite(integrability),
                        "int (1 ^ x^2) xi(x) dx"});
    const double exp_moment = weighted_outer_moment(model.jumps, share ? -1.0 : 1.0, 0.0, model.tol);
    r.checks.push_back({"exp_moment", exp_moment, std::isfinite(exp_moment),
                        share ? "int_{|x|>1} e^{-x} xi*(x) dx" : "int_{|x|>1} e^x xi(x) dx"});
    const double first = weighted_outer_moment(model.jumps, share ? 0.0 : 1.0, 1.0, model.tol);
    r.checks.push_back({"ex_moment", first, std::isfinite(first),
                        share ? "int_{|x|>1} |x| xi*(x) dx" : "int_{|x|>1} |x| e^x xi(x) dx"});
    if (model.martingale) {
        double residual = quad::kInf;
        try {
            residual = std::abs(char_exponent(model, cplx(0.0, -1.0)));
        } catch (const NumericError&) {
        }
        r.checks.push_back({"martingale", residual, residual <= 1e-10, "|psi(-i)|"});
    }
    return r;
}

}  // namespace levyatm
