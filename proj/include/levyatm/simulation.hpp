#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "levyatm/levy_model.hpp"

namespace levyatm {

/// Increment sampler for X_t: jumps with |x| > eps as compound Poisson, the Brownian part
/// and the compensated small jumps as one Gaussian with variance (sigma^2 + V(eps)) t, and
/// the drift mu_eps t. Tables of the tails, V, the absolute third moment and mu_eps are built
/// once on a log grid of eps and shared by every maturity.
class LevySimulator {
public:
    explicit LevySimulator(const LevyModel& model, double eps_floor = 1e-12);

    struct Plan {
        double t = 0.0;
        double epsilon = 1.0;
        double skew = 0.0;        ///< third absolute moment / variance^{3/2} of the Gaussian part
        double drift = 0.0;       ///< mu_eps t
        double gaussian_sd = 0.0;
        double jump_rate = 0.0;   ///< expected number of large jumps, gamma(eps) t
        double p_plus = 0.0;      ///< share of large jumps that are positive
        std::size_t level = 0;
    };

    /// Largest grid eps whose small-jump skew is below `skew_target`.
    Plan plan(double t, double skew_target = 0.01, double max_jumps_per_path = 1e5) const;
    double draw(const Plan& plan, std::mt19937_64& gen) const;

private:
    struct SideTable {
        std::vector<double> x;     ///< ascending, starts on the eps grid
        std::vector<double> tail;  ///< gamma_side(x)
    };
    double draw_jump(const SideTable& side, std::size_t level, std::mt19937_64& gen) const;

    LevyModel model_;
    std::vector<double> eps_;  ///< ascending grid of candidate thresholds, ends at 1
    std::vector<double> V_, A3_, mu_;
    SideTable plus_, minus_;
};

struct McTail {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// P(X_t >= y) by simulation.
McTail tail_prob_mc(const LevySimulator& sim, double t, double y, std::size_t n, std::uint64_t seed,
                    double skew_target = 0.1);

}  // namespace levyatm
