#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levyatm/levy_model.hpp"
#include "levyatm/pricing.hpp"
#include "levyatm/regvar.hpp"
#include "levyatm/stable.hpp"

namespace levyatm {

struct VerificationReport {
    std::string check_name;
    std::string inputs;
    std::vector<std::pair<std::string, double>> measured;
    double threshold = 0.0;
    bool pass = false;
    std::string notes;

    double value(const std::string& key) const;
};

/// A1 (regular variation at 0 in the fitted sense), A2 (V* <= C x^2 gamma* for x >= 1),
/// A3 (monotone x^2 xi*_S near 0) and finiteness of mu_bar, one report each.
std::vector<VerificationReport> check_assumptions(const LevyModel& model);
std::vector<AssumptionStatus> assumption_summary(const std::vector<VerificationReport>& reports);

/// sup of V(R) / (R^2 gamma(R)) over 200 log-spaced R in [x, y], with the change at 400 points.
VerificationReport check_vratio(const LevyModel& model, double x, double y);

/// Monte Carlo P(X_t >= y) against (1 + C e^2) t gamma(y / 4) for each pair. Without C the
/// constant is the measured sup of V(R) / (R^2 gamma(R)) over the R = y / 4 range.
VerificationReport check_concentration(const LevyModel& model,
                                       const std::vector<std::pair<double, double>>& y_t_pairs,
                                       std::optional<double> C, std::size_t n_mc, std::uint64_t seed);
/// Pairs drawn log-uniformly from y in [y_lo, y_hi], t in [t_lo, t_hi] that satisfy
/// t < y / (4 (mu_{y/4})_+).
std::vector<std::pair<double, double>> admissible_pairs(const LevyModel& model, std::size_t count,
                                                        std::uint64_t seed, double y_lo = 0.05,
                                                        double y_hi = 2.0, double t_lo = 1e-6,
                                                        double t_hi = 1e-2);

/// int_{R0}^inf gamma*(y) dy with R_max doubled until the increment is below 1e-12. gamma* is
/// the tail of the share measure (the model itself when it is share-tagged).
VerificationReport check_gamma_star_integrability(const LevyModel& model, double R0);

struct ConvergenceOptions {
    /// Also require slopes in (1/alpha, 1/alpha + 0.05) at the smallest t and decreasing
    /// down the grid.
    bool expect_log_correction = false;
};

struct ConvergenceStudy {
    PriceCurve curve;
    std::vector<double> slopes;  ///< slopes[i] between maturities i and i + 1
    VerificationReport report;
};

/// Prices on the grid, local log-log slopes, and the spread of c / (E*[Z+] B_t) between
/// neighbouring maturities, which must shrink as t decreases.
ConvergenceStudy convergence_study(const LevyModel& model, const std::vector<double>& t_grid,
                                   const ScalingFunction& scaling, const StableLaw& law,
                                   const ConvergenceOptions& opts = {});

/// Tail index, tail split and mu_bar finiteness under P and P*.
VerificationReport check_esscher_invariance(const LevyModel& model);

/// Scaling function and limit law used by the pure-jump expansion, read off the share
/// measure: the closed form for the toy density (detected by the preset), the Maller-Mason
/// B_t otherwise.
struct AsymptoticSetup {
    ScalingFunction scaling;
    StableLaw law;
    RVFit fit;
};
AsymptoticSetup asymptotic_setup(const LevyModel& model, bool toy_closed_form = false);

}  // namespace levyatm
