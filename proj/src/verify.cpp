#include "levyatm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "levyatm/errors.hpp"
#include "levyatm/simulation.hpp"
#include "levyatm/tail_functionals.hpp"

namespace levyatm {

double VerificationReport::value(const std::string& key) const {
    for (const auto& [k, v] : measured)
        if (k == key) return v;
    throw DomainError("report " + check_name + " has no value " + key);
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

LevyModel share_of(const LevyModel& model) {
    return model.measure_tag == MeasureTag::share ? model : esscher_transform(model, 1.0);
}

std::vector<double> fit_grid() { return log_grid(1e-7, 1.0, 71); }

constexpr double kFitLo = 1e-6;
constexpr double kFitHi = 1e-2;

VerificationReport no_jumps(const std::string& name) {
    VerificationReport r;
    r.check_name = name;
    r.pass = false;
    r.notes = "model has no jump part";
    return r;
}

VerificationReport check_a1(const TailFunctionals& tails) {
    VerificationReport r;
    r.check_name = "A1_regular_variation";
    r.inputs = "gamma on [" + fmt(kFitLo) + ", " + fmt(kFitHi) + "]";
    try {
        const auto fit = rv_index_at_zero(tails, kFitLo, kFitHi);
        double worst = 0.0;
        for (double e : fit.residuals) worst = std::max(worst, std::abs(e));
        r.measured = {{"alpha_hat", fit.alpha_hat}, {"p_plus_hat", fit.p_plus_hat},
                      {"max_abs_residual", worst}};
        r.pass = fit.alpha_hat > 1.0 && fit.alpha_hat < 2.0;
        r.notes = "pass iff 1 < alpha_hat < 2";
    } catch (const NumericError& e) {
        r.notes = e.what();
    }
    return r;
}

VerificationReport check_a2(const LevyModel& share) {
    VerificationReport r;
    r.check_name = "A2_truncated_variance_bound";
    r.inputs = "x in [1, 50], 100 log-spaced points";
    r.notes = "C = max V*(x) / (x^2 gamma*(x)); pass iff gamma* > 0 on the scan";
    double C = 0.0;
    for (double x : log_grid(1.0, 50.0, 100)) {
        const double v = share.jumps.integrate([](double y) { return y * y; }, 0.0, x).value;
        const double g = share.jumps.integrate([](double) { return 1.0; }, x, quad::kInf).value;
        if (!(g > 0.0)) {
            r.measured = {{"C", quad::kInf}, {"x_vanish", x}};
            r.notes = "gamma* vanishes at x = " + fmt(x) + ": no finite C";
            return r;
        }
        C = std::max(C, v / (x * x * g));
    }
    r.measured = {{"C", C}, {"x1", 1.0}};
    r.threshold = quad::kInf;
    r.pass = std::isfinite(C);
    return r;
}

VerificationReport check_a3(const LevyModel& share) {
    VerificationReport r;
    r.check_name = "A3_monotone_density";
    constexpr double x0 = 0.5;
    r.inputs = "x^2 xi*_S on [1e-8, 0.5], 400 log-spaced points";
    const auto xs = log_grid(1e-8, x0, 400);
    std::vector<double> h;
    for (double x : xs) h.push_back(x * x * (share.jumps(x) + share.jumps(-x)));
    int up = 0, down = 0;
    for (std::size_t i = 1; i < h.size(); ++i) {
        const double d = h[i] - h[i - 1];
        if (std::abs(d) <= 1e-12 * std::max(std::abs(h[i]), std::abs(h[i - 1]))) continue;
        (d > 0.0 ? up : down)++;
    }
    r.measured = {{"increasing_steps", static_cast<double>(up)}, {"decreasing_steps", static_cast<double>(down)}};
    r.pass = up == 0 || down == 0;
    r.notes = "pass iff the finite differences keep one sign";
    return r;
}

VerificationReport check_mu_bar(const TailFunctionals& tails) {
    VerificationReport r;
    r.check_name = "mu_bar_finite";
    r.inputs = "eta grid [1e-8, 1], 60 points plus the outer bound";
    r.threshold = 1e-6;
    r.measured = {{"mu_bar", tails.mu_bar()}, {"mu_bar0", tails.mu_bar0()},
                  {"last_decade_change", tails.mu_bar_last_decade_change()}};
    r.pass = tails.mu_bar_finite();
    r.notes = "finite iff the last decade changes the sup by less than the threshold";
    return r;
}

double vratio_sup(const TailFunctionals& tails, double x, double y, int n, double* variance) {
    std::vector<double> v;
    for (double R : log_grid(x, y, n)) {
        const double g = tails.gamma(R);
        if (!(g > 0.0)) throw TailVanished("gamma vanishes at R = " + fmt(R));
        v.push_back(tails.V(R) / (R * R * g));
    }
    if (variance) {
        double m = 0.0;
        for (double a : v) m += a;
        m /= v.size();
        double s = 0.0;
        for (double a : v) s += (a - m) * (a - m);
        *variance = s / v.size();
    }
    return *std::max_element(v.begin(), v.end());
}

}  // namespace

std::vector<VerificationReport> check_assumptions(const LevyModel& model) {
    if (model.jumps.empty())
        return {no_jumps("A1_regular_variation"), no_jumps("A2_truncated_variance_bound"),
                no_jumps("A3_monotone_density"), no_jumps("mu_bar_finite")};
    TailFunctionals tails(model, fit_grid());
    std::vector<VerificationReport> out;
    out.push_back(check_a1(tails));
    try {
        const auto share = share_of(model);
        out.push_back(check_a2(share));
        out.push_back(check_a3(share));
    } catch (const MomentFailure& e) {
        for (const char* name : {"A2_truncated_variance_bound", "A3_monotone_density"}) {
            VerificationReport r;
            r.check_name = name;
            r.notes = std::string("no share measure: ") + e.what();
            out.push_back(r);
        }
    }
    out.push_back(check_mu_bar(tails));
    return out;
}

std::vector<AssumptionStatus> assumption_summary(const std::vector<VerificationReport>& reports) {
    std::vector<AssumptionStatus> out;
    for (const auto& r : reports) out.push_back({r.check_name, r.pass, r.notes});
    return out;
}

VerificationReport check_vratio(const LevyModel& model, double x, double y) {
    if (!(x > 0.0) || !(y > x)) throw DomainError("check_vratio needs 0 < x < y");
    VerificationReport r;
    r.check_name = "vratio";
    r.inputs = "R in [" + fmt(x) + ", " + fmt(y) + "]";
    TailFunctionals tails(model, log_grid(x, y, 401));
    double variance = 0.0;
    const double sup200 = vratio_sup(tails, x, y, 200, &variance);
    const double sup400 = vratio_sup(tails, x, y, 400, nullptr);
    const double change = std::abs(sup400 / sup200 - 1.0);
    r.measured = {{"sup", sup200}, {"sup_400", sup400}, {"refinement_change", change}, {"grid_variance", variance}};
    r.threshold = 0.01;
    r.pass = std::isfinite(sup200) && change < r.threshold;
    r.notes = "pass iff the sup is finite and moves by less than the threshold at 400 points";
    return r;
}

std::vector<std::pair<double, double>> admissible_pairs(const LevyModel& model, std::size_t count,
                                                        std::uint64_t seed, double y_lo, double y_hi,
                                                        double t_lo, double t_hi) {
    TailFunctionals tails(model, log_grid(y_lo / 4.0, y_hi / 4.0, 2));
    std::mt19937_64 gen(seed);
    auto unit = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    std::vector<std::pair<double, double>> out;
    for (int tries = 0; out.size() < count; ++tries) {
        if (tries > 100000) throw PreconditionViolation("could not draw admissible (y, t) pairs");
        const double y = y_lo * std::pow(y_hi / y_lo, unit());
        const double t = t_lo * std::pow(t_hi / t_lo, unit());
        const double mu = tails.mu(y / 4.0);
        if (mu <= 0.0 || t < y / (4.0 * mu)) out.emplace_back(y, t);
    }
    return out;
}

VerificationReport check_concentration(const LevyModel& model,
                                       const std::vector<std::pair<double, double>>& pairs,
                                       std::optional<double> C, std::size_t n_mc, std::uint64_t seed) {
    if (pairs.empty()) throw DomainError("check_concentration needs at least one pair");
    double r_lo = quad::kInf, r_hi = 0.0;
    for (const auto& [y, t] : pairs) {
        r_lo = std::min(r_lo, y / 4.0);
        r_hi = std::max(r_hi, y / 4.0);
    }
    if (!(r_hi > r_lo)) r_lo = 0.5 * r_hi;
    TailFunctionals tails(model, log_grid(r_lo, r_hi, 201));

    std::string offending;
    for (const auto& [y, t] : pairs) {
        const double mu = tails.mu(y / 4.0);
        if (mu > 0.0 && !(t < y / (4.0 * mu))) offending += " (" + fmt(y) + ", " + fmt(t) + ")";
    }
    if (!offending.empty()) throw PreconditionViolation("pairs violate t < y / (4 mu_{y/4}):" + offending);

    const double c = C ? *C : vratio_sup(tails, r_lo, r_hi, 200, nullptr);
    const double factor = 1.0 + c * std::exp(2.0);
    LevySimulator sim(model);
    std::size_t ok = 0;
    double worst_margin = -quad::kInf;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [y, t] = pairs[i];
        const double bound = factor * t * tails.gamma(y / 4.0);
        const auto mc = tail_prob_mc(sim, t, y, n_mc, seed + i);
        const double margin = mc.estimate - 3.0 * mc.std_error - bound;
        worst_margin = std::max(worst_margin, margin);
        if (margin <= 0.0) ++ok;
    }
    VerificationReport r;
    r.check_name = "concentration";
    r.inputs = std::to_string(pairs.size()) + " (y, t) pairs, n_mc = " + std::to_string(n_mc) +
               ", seed = " + std::to_string(seed);
    r.measured = {{"C", c}, {"pairs_passed", static_cast<double>(ok)},
                  {"pairs", static_cast<double>(pairs.size())}, {"worst_margin", worst_margin}};
    r.threshold = 0.0;
    r.pass = ok == pairs.size();
    r.notes = "pass iff estimate - 3 s.e. <= (1 + C e^2) t gamma(y/4) for every pair";
    return r;
}

VerificationReport check_gamma_star_integrability(const LevyModel& model, double R0) {
    if (!(R0 > 0.0)) throw DomainError("check_gamma_star_integrability needs R0 > 0");
    VerificationReport r;
    r.check_name = "gamma_star_integrability";
    r.inputs = "R0 = " + fmt(R0);
    r.threshold = 1e-12;
    r.notes = "R_max doubled until the increment is below the threshold";
    if (model.jumps.empty()) {
        r.measured = {{"integral", 0.0}, {"R_max", R0}};
        r.pass = true;
        return r;
    }
    const auto share = share_of(model);
    double total = 0.0;
    double R = R0;
    double prev = quad::kInf;
    int growing = 0;
    for (int k = 0; k < 400; ++k) {
        // int_R^{2R} gamma*(y) dy = int_{|x| > R} xi*(x) (min(|x|, 2R) - R) dx
        const double inc = share.jumps.integrate(
            [R](double x) { return std::min(std::abs(x), 2.0 * R) - R; }, R, quad::kInf).value;
        total += inc;
        R *= 2.0;
        if (inc < r.threshold) {
            r.measured = {{"integral", total}, {"R_max", R}, {"last_increment", inc}};
            r.pass = true;
            return r;
        }
        growing = inc >= prev ? growing + 1 : 0;
        if (growing >= 20) break;
        prev = inc;
    }
    throw DivergentIntegral("int gamma* dy does not converge from R0 = " + fmt(R0));
}

ConvergenceStudy convergence_study(const LevyModel& model, const std::vector<double>& t_grid,
                                   const ScalingFunction& scaling, const StableLaw& law,
                                   const ConvergenceOptions& opts) {
    if (t_grid.size() < 2 || t_grid.back() > 1e-2 * (1.0 + 1e-9) ||
        t_grid.back() / t_grid.front() < 1e4 * (1.0 - 1e-9))
        throw PreconditionViolation("convergence_study needs a grid spanning 4 decades below 1e-2");
    AsymptoticInputs in;
    in.model_class = ModelClass::pure_jump;
    in.scaling = scaling;
    in.law = law;
    in.force = true;
    CurveOptions co;
    co.asymptotics = in;

    ConvergenceStudy s;
    s.curve = price_curve(model, t_grid, co);
    const auto& c = s.curve;
    const std::size_t n = t_grid.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        s.slopes.push_back(std::log(c.exact_price[i + 1] / c.exact_price[i]) / std::log(t_grid[i + 1] / t_grid[i]));

    std::vector<double> rel(n), spread(n - 1);
    for (std::size_t i = 0; i < n; ++i) rel[i] = c.exact_price[i] / c.prediction_first_order[i];
    for (std::size_t i = 0; i + 1 < n; ++i) spread[i] = std::abs(rel[i] / rel[i + 1] - 1.0);
    bool shrinking = true;
    for (std::size_t i = 0; i + 2 < n; ++i) shrinking = shrinking && spread[i] <= spread[i + 1];

    auto& r = s.report;
    r.check_name = "convergence_study";
    r.inputs = "t in [" + fmt(t_grid.front()) + ", " + fmt(t_grid.back()) + "], " + std::to_string(n) +
               " maturities, B_t " + to_string(scaling.kind);
    r.measured = {{"slope_smallest_t", s.slopes.front()}, {"ratio_error_smallest_t", rel.front() - 1.0},
                  {"spread_smallest_t", spread.front()}, {"spread_shrinking", shrinking ? 1.0 : 0.0}};
    r.pass = shrinking;
    r.notes = "ratio c / (E*[Z+] B_t) must move less between neighbours as t decreases";
    if (opts.expect_log_correction) {
        const double target = 1.0 / law.alpha;
        bool decreasing = true;
        for (std::size_t i = 0; i + 1 < s.slopes.size(); ++i) decreasing = decreasing && s.slopes[i] < s.slopes[i + 1];
        const bool window = s.slopes.front() > target && s.slopes.front() < target + 0.05;
        r.measured.push_back({"slopes_decreasing", decreasing ? 1.0 : 0.0});
        r.measured.push_back({"slope_in_window", window ? 1.0 : 0.0});
        r.threshold = 0.05;
        r.pass = r.pass && decreasing && window;
        r.notes += "; slopes must lie in (1/alpha, 1/alpha + 0.05) at the smallest t and decrease towards it";
    }
    return s;
}

VerificationReport check_esscher_invariance(const LevyModel& model) {
    if (model.jumps.empty()) throw PreconditionViolation("check_esscher_invariance needs a jump part");
    TailFunctionals tp(model, fit_grid());
    TailFunctionals ts(share_of(model), fit_grid());
    const auto fp = rv_index_at_zero(tp, kFitLo, kFitHi);
    const auto fs = rv_index_at_zero(ts, kFitLo, kFitHi);
    VerificationReport r;
    r.check_name = "esscher_invariance";
    r.inputs = "fits on [" + fmt(kFitLo) + ", " + fmt(kFitHi) + "] under P and P*";
    const double da = std::abs(fp.alpha_hat - fs.alpha_hat);
    const double dp = std::max(std::abs(fp.p_plus_hat - fs.p_plus_hat), std::abs(fp.p_minus_hat - fs.p_minus_hat));
    r.measured = {{"alpha_hat_P", fp.alpha_hat}, {"alpha_hat_S", fs.alpha_hat},
                  {"p_plus_P", fp.p_plus_hat}, {"p_plus_S", fs.p_plus_hat},
                  {"alpha_diff", da}, {"p_diff", dp},
                  {"mu_bar_finite_P", tp.mu_bar_finite() ? 1.0 : 0.0},
                  {"mu_bar_finite_S", ts.mu_bar_finite() ? 1.0 : 0.0}};
    r.threshold = 0.02;
    r.pass = da <= 0.02 && dp <= 0.01 && tp.mu_bar_finite() == ts.mu_bar_finite();
    r.notes = "pass iff |d alpha| <= 0.02, |d p| <= 0.01 and the mu_bar flags agree";
    return r;
}

AsymptoticSetup asymptotic_setup(const LevyModel& model, bool toy_closed_form) {
    const auto share = share_of(model);
    auto tails = std::make_shared<const TailFunctionals>(share, log_grid(1e-12, 1.0, 121));
    AsymptoticSetup s;
    s.fit = rv_index_at_zero(*tails, kFitLo, kFitHi);
    const double alpha = model.jumps.index_hint().value_or(s.fit.alpha_hat);
    const double lambda = maller_mason_lambda(alpha);
    s.scaling = toy_closed_form ? toy_closed_form_scaling(alpha, lambda) : maller_mason_scaling(tails, alpha);
    s.law = limit_law(alpha, s.fit.p_plus_hat, lambda);
    return s;
}

}  // namespace levyatm
