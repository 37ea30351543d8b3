#include "levyatm/regvar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <boost/math/tools/roots.hpp>

#include "levyatm/errors.hpp"

namespace levyatm {

namespace {

constexpr int kFitPoints = 40;

// Least squares for up to three regressors by normal equations with partial pivoting.
template <std::size_t K>
std::array<double, K> least_squares(const std::vector<std::array<double, K>>& rows,
                                    const std::vector<double>& y) {
    std::array<std::array<double, K + 1>, K> m{};
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t i = 0; i < K; ++i) {
            for (std::size_t j = 0; j < K; ++j) m[i][j] += rows[r][i] * rows[r][j];
            m[i][K] += rows[r][i] * y[r];
        }
    }
    for (std::size_t c = 0; c < K; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < K; ++r)
            if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
        std::swap(m[c], m[p]);
        if (m[c][c] == 0.0) throw DegenerateRange("singular log-log regression");
        for (std::size_t r = 0; r < K; ++r) {
            if (r == c) continue;
            const double f = m[r][c] / m[c][c];
            for (std::size_t j = c; j <= K; ++j) m[r][j] -= f * m[c][j];
        }
    }
    std::array<double, K> beta{};
    for (std::size_t i = 0; i < K; ++i) beta[i] = m[i][K] / m[i][i];
    return beta;
}

}  // namespace

RVFit rv_index_at_zero(const RealFn& tail, double lo, double hi, const RealFn& tail_plus,
                       const RealFn& tail_minus) {
    if (!(lo > 0.0) || !(hi > lo * (1.0 + 1e-9))) throw DegenerateRange("rv fit needs 0 < lo < hi");
    const auto xs = log_grid(lo, hi, kFitPoints);
    std::vector<double> g(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        g[i] = tail(xs[i]);
        if (!(g[i] > 0.0)) throw TailVanished("tail is not positive on the fit range");
        if (i > 0 && g[i] > g[i - 1] * (1.0 + 1e-10))
            throw NonMonotoneTail("tail increases on the fit range");
    }
    RVFit fit;
    std::vector<double> y(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) y[i] = std::log(g[i]);

    std::vector<std::array<double, 2>> rows2;
    for (double x : xs) rows2.push_back({1.0, -std::log(x)});
    const auto b2 = least_squares(rows2, y);
    fit.plain_slope = b2[1];

    if (hi <= 0.1) {
        std::vector<std::array<double, 3>> rows3;
        for (double x : xs) rows3.push_back({1.0, -std::log(x), std::log(std::log(1.0 / x))});
        const auto b3 = least_squares(rows3, y);
        fit.alpha_hat = b3[1];
        fit.loglog_coef = b3[2];
        for (std::size_t i = 0; i < xs.size(); ++i)
            fit.residuals.push_back(y[i] - (b3[0] + b3[1] * rows3[i][1] + b3[2] * rows3[i][2]));
    } else {
        fit.alpha_hat = b2[1];
        for (std::size_t i = 0; i < xs.size(); ++i)
            fit.residuals.push_back(y[i] - (b2[0] + b2[1] * rows2[i][1]));
    }
    if (!(fit.alpha_hat > 0.0)) throw DegenerateRange("fitted tail index is not positive");

    for (std::size_t i = 0; i < xs.size(); ++i)
        fit.ell_probe.emplace_back(xs[i], std::pow(xs[i], fit.alpha_hat) * g[i]);

    if (tail_plus && tail_minus) {
        double sp = 0.0, sm = 0.0;
        int n = 0;
        for (std::size_t i = 0; i < xs.size() && xs[i] <= 10.0 * lo * (1.0 + 1e-12); ++i) {
            const double gp = tail_plus(xs[i]), gm = tail_minus(xs[i]);
            sp += gp / (gp + gm);
            sm += gm / (gp + gm);
            ++n;
        }
        fit.p_plus_hat = sp / n;
        fit.p_minus_hat = 1.0 - fit.p_plus_hat;
    }
    return fit;
}

RVFit rv_index_at_zero(const TailFunctionals& tails, double lo, double hi) {
    return rv_index_at_zero([&](double x) { return tails.gamma(x); }, lo, hi,
                            [&](double x) { return tails.gamma_plus(x); },
                            [&](double x) { return tails.gamma_minus(x); });
}

RealFn ell_from_probes(const RVFit& fit) {
    // ell(y) at y = 1/x, stored with increasing log y.
    std::vector<double> ly, lv;
    for (auto it = fit.ell_probe.rbegin(); it != fit.ell_probe.rend(); ++it) {
        ly.push_back(-std::log(it->first));
        lv.push_back(std::log(it->second));
    }
    if (ly.size() < 2) throw DegenerateRange("need at least two probes");
    return [ly, lv](double y) {
        const double l = std::log(y);
        std::size_t i = static_cast<std::size_t>(std::upper_bound(ly.begin(), ly.end(), l) - ly.begin());
        i = std::clamp<std::size_t>(i, 1, ly.size() - 1);
        const double w = (l - ly[i - 1]) / (ly[i] - ly[i - 1]);
        return std::exp(lv[i - 1] + w * (lv[i] - lv[i - 1]));
    };
}

const char* to_string(ScalingKind kind) {
    switch (kind) {
        case ScalingKind::maller_mason_inf: return "maller_mason_inf";
        case ScalingKind::debruijn_numeric: return "debruijn_numeric";
        case ScalingKind::closed_form: return "closed_form";
    }
    return "unknown";
}

double scaling_maller_mason(const TailFunctionals& tails, double t) {
    if (!(t > 0.0)) throw DomainError("t must be positive");
    const double lo = 1e-16, hi = 1.0;
    auto h = [&](double x) { return tails.U(x) / (x * x); };
    if (!(tails.U(hi) > 0.0)) throw TailDegenerate("U vanishes on (0, 1]: use sqrt(t) scaling");
    const double level = 1.0 / t;
    if (h(hi) > level) return hi;
    if (h(lo) <= level) return lo;
    double a = std::log(lo), b = std::log(hi);
    // h is nonincreasing: h(e^a) > level >= h(e^b).
    while (b - a > 1e-11) {
        const double m = 0.5 * (a + b);
        if (h(std::exp(m)) > level) a = m;
        else b = m;
    }
    return std::exp(b);
}

double debruijn_solve(const RealFn& ell, double alpha, double lambda_const, double t) {
    if (!(t > 0.0)) throw DomainError("t must be positive");
    if (!(lambda_const > 0.0)) throw DomainError("Lambda must be positive");
    auto f = [&](double lb) {
        const double v = ell(std::exp(lb));
        // a non-positive probe (ln beta at beta = 1) counts as lying below Lambda
        if (!(v > 0.0)) return -1e3;
        return std::log(t) + alpha * lb + std::log(v) - std::log(lambda_const);
    };
    const double a = 0.0, b = std::log(1e16);
    const double fa = f(a), fb = f(b);
    if (fa > 0.0 || fb < 0.0) throw BracketFailure("no sign change of t beta^alpha ell(beta) - Lambda on [1, 1e16]");
    if (fa == 0.0) return 1.0;
    boost::uintmax_t iters = 200;
    auto tol = [](double l, double r) { return std::abs(r - l) <= 1e-14 * std::max(1.0, std::abs(l)); };
    const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
    return std::exp(0.5 * (r.first + r.second));
}

double lambert_w(double y) {
    const double branch = -std::exp(-1.0);
    if (y < branch) throw DomainError("lambert_w needs y >= -1/e");
    if (y == 0.0) return 0.0;
    if (y == branch) return -1.0;
    double w;
    if (y > 0.0) {
        w = std::log1p(y);
        if (y > 3.0) w -= std::log(w);
    } else {
        const double p = std::sqrt(2.0 * (std::exp(1.0) * y + 1.0));
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    }
    for (int k = 0; k < 100; ++k) {
        const double ew = std::exp(w);
        const double f = w * ew - y;
        const double wp1 = w + 1.0;
        if (wp1 == 0.0) break;
        const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(w))) break;
    }
    return w;
}

double maller_mason_lambda(double alpha) { return (2.0 - alpha) / 2.0; }

ScalingFunction maller_mason_scaling(std::shared_ptr<const TailFunctionals> tails, double alpha) {
    ScalingFunction s;
    s.eval = [tails](double t) { return scaling_maller_mason(*tails, t); };
    s.kind = ScalingKind::maller_mason_inf;
    s.alpha = alpha;
    s.lambda_const = maller_mason_lambda(alpha);
    return s;
}

ScalingFunction debruijn_scaling(RealFn ell, double alpha, double lambda_const) {
    ScalingFunction s;
    s.eval = [ell = std::move(ell), alpha, lambda_const](double t) {
        return 1.0 / debruijn_solve(ell, alpha, lambda_const, t);
    };
    s.kind = ScalingKind::debruijn_numeric;
    s.alpha = alpha;
    s.lambda_const = lambda_const;
    return s;
}

ScalingFunction toy_closed_form_scaling(double alpha, double lambda_const) {
    ScalingFunction s;
    s.eval = [alpha, lambda_const](double t) {
        // With L = ln beta - 1/alpha: (alpha L) e^{alpha L} = alpha^2 Lambda / (2 t e).
        const double aL = lambert_w(alpha * alpha * lambda_const / (2.0 * t * std::exp(1.0)));
        return std::exp(-(aL / alpha + 1.0 / alpha));
    };
    s.kind = ScalingKind::closed_form;
    s.alpha = alpha;
    s.lambda_const = lambda_const;
    return s;
}

PotterReport potter_check(const std::vector<std::pair<double, double>>& ell_probes, double A,
                          double delta) {
    auto probes = ell_probes;
    std::sort(probes.begin(), probes.end());
    PotterReport r;
    const std::size_t n = probes.size();
    if (n == 0) return r;
    auto ratio = [&](std::size_t i, std::size_t j) {
        const double q = probes[j].first / probes[i].first;
        return (probes[j].second / probes[i].second) / (A * std::max(std::pow(q, delta), std::pow(q, -delta)));
    };
    // Walk x0 down from the largest probe; pairs are checked in both orders.
    std::size_t first_ok = n - 1;
    double worst = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        double local = 0.0;
        for (std::size_t j = k; j < n; ++j) local = std::max({local, ratio(k, j), ratio(j, k)});
        if (local > 1.0) break;
        worst = std::max(worst, local);
        first_ok = k;
    }
    r.holds = n == 1 || first_ok < n - 1;
    r.x0 = probes[first_ok].first;
    r.worst_ratio = worst;
    return r;
}

KaramataReport karamata_check(const RealFn& ell, double alpha, const std::vector<double>& x_probes) {
    if (x_probes.size() < 2) throw DegenerateRange("karamata_check needs probes");
    if (!(alpha > -1.0)) throw DomainError("karamata_check needs alpha > -1");
    KaramataReport r;
    r.target = 1.0 / (alpha + 1.0);
    const double x0 = x_probes.front();
    auto integrand = [&](double u) { return std::pow(u, alpha) * ell(u); };
    double integral = 0.0;
    double prev = x0;
    for (std::size_t i = 1; i < x_probes.size(); ++i) {
        const double x = x_probes[i];
        auto part = quad::integrate(integrand, prev, x);
        quad::check_tolerance(part, Tolerance{}, "karamata_check");
        integral += part.value;
        prev = x;
        r.ratios.emplace_back(x, integral / (std::pow(x, alpha + 1.0) * ell(x)));
    }
    const double last = r.ratios.back().second;
    bool trend = true;
    const std::size_t m = r.ratios.size();
    for (std::size_t i = m >= 4 ? m - 4 : 0; i + 1 < m; ++i) {
        if (std::abs(r.ratios[i + 1].second - r.target) > std::abs(r.ratios[i].second - r.target) * (1.0 + 1e-9) + 1e-12)
            trend = false;
    }
    r.converges = trend && std::abs(last - r.target) <= 0.05 * r.target;
    return r;
}

MonotoneDensityReport monotone_density_check(const RealFn& tail, const RealFn& density, double alpha,
                                             const std::vector<double>& x_probes, double eps) {
    if (x_probes.empty()) throw DegenerateRange("monotone_density_check needs probes");
    MonotoneDensityReport r;
    const double smallest = *std::min_element(x_probes.begin(), x_probes.end());
    r.ratio_min = quad::kInf;
    r.ratio_max = -quad::kInf;
    for (double x : x_probes) {
        // alpha x^{-alpha-1} ell(1/x) with ell(1/x) = x^alpha tail(x)
        const double q = x * density(x) / (alpha * tail(x));
        r.ratios.emplace_back(x, q);
        if (x <= 10.0 * smallest) {
            r.ratio_min = std::min(r.ratio_min, q);
            r.ratio_max = std::max(r.ratio_max, q);
        }
    }
    r.passed = r.ratio_min >= 1.0 - eps && r.ratio_max <= 1.0 + eps;
    return r;
}

}  // namespace levyatm
