#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "levyatm/tail_functionals.hpp"

namespace levyatm {

using RealFn = std::function<double(double)>;

struct RVFit {
    double alpha_hat = 0.0;
    /// (x, ell(1/x)) with ell(1/x) = x^alpha_hat tail(x).
    std::vector<std::pair<double, double>> ell_probe;
    double p_plus_hat = 0.5;
    double p_minus_hat = 0.5;
    /// Coefficient of log log(1/x) in the fit; zero when the range reaches above 0.1.
    double loglog_coef = 0.0;
    /// Plain two-parameter log-log slope, reported for comparison.
    double plain_slope = 0.0;
    std::vector<double> residuals;
};

/// Tail index at 0 from 40 log-spaced evaluations on [lo, hi]. The regression is
/// log tail = c - alpha log x + k log log(1/x) when hi <= 0.1 (so that a logarithmic
/// slowly varying factor does not bias alpha), and the plain two-parameter fit otherwise.
/// p_plus/p_minus come from tail_plus/tail / tail_minus/tail averaged over [lo, 10 lo].
RVFit rv_index_at_zero(const RealFn& tail, double lo, double hi, const RealFn& tail_plus = {},
                       const RealFn& tail_minus = {});
RVFit rv_index_at_zero(const TailFunctionals& tails, double lo, double hi);

/// ell(y) interpolated log-log through the fit probes, extrapolated linearly in log-log.
RealFn ell_from_probes(const RVFit& fit);

enum class ScalingKind { maller_mason_inf, debruijn_numeric, closed_form };
const char* to_string(ScalingKind kind);

struct ScalingFunction {
    RealFn eval;
    ScalingKind kind = ScalingKind::debruijn_numeric;
    double alpha = 0.0;
    std::optional<double> lambda_const;
    double operator()(double t) const { return eval(t); }
};

/// B_t = inf{0 < x <= 1 : x^{-2} U(x) <= 1/t}, clamped to [1e-16, 1].
double scaling_maller_mason(const TailFunctionals& tails, double t);

/// beta_t solving t beta^alpha ell(beta) = lambda on [1, 1e16]. B_t = 1 / beta_t.
double debruijn_solve(const RealFn& ell, double alpha, double lambda_const, double t);

/// Principal branch of the Lambert W function.
double lambert_w(double y);

/// Lambda that makes the Maller-Mason B_t satisfy t gamma(B_t) -> Lambda for a pure
/// power-law tail: (2 - alpha) / 2.
double maller_mason_lambda(double alpha);

ScalingFunction maller_mason_scaling(std::shared_ptr<const TailFunctionals> tails, double alpha);
ScalingFunction debruijn_scaling(RealFn ell, double alpha, double lambda_const = 1.0);
/// Toy model: t beta^alpha (2/alpha)(ln beta - 1/alpha) = Lambda solved through Lambert W.
ScalingFunction toy_closed_form_scaling(double alpha, double lambda_const = 1.0);

struct PotterReport {
    bool holds = false;
    double x0 = 0.0;          ///< smallest probe from which every pair satisfies the bound
    double worst_ratio = 0.0; ///< max of lhs / rhs over pairs beyond x0
};
PotterReport potter_check(const std::vector<std::pair<double, double>>& ell_probes, double A,
                          double delta);

struct KaramataReport {
    std::vector<std::pair<double, double>> ratios;  ///< (x, r(x))
    double target = 0.0;
    bool converges = false;
};
KaramataReport karamata_check(const RealFn& ell, double alpha, const std::vector<double>& x_probes);

struct MonotoneDensityReport {
    double ratio_min = 0.0;
    double ratio_max = 0.0;  ///< over the smallest decade of probes
    std::vector<std::pair<double, double>> ratios;
    bool passed = false;
};
MonotoneDensityReport monotone_density_check(const RealFn& tail, const RealFn& density, double alpha,
                                             const std::vector<double>& x_probes, double eps = 0.1);

}  // namespace levyatm
