#pragma once

#include <vector>

#include "levyatm/levy_model.hpp"

namespace levyatm {

/// gamma, V, U and mu_x of a model, cached on a probe grid. Between grid points a value
/// is the cached neighbour plus one short panel, so it stays monotone and exact to
/// quadrature accuracy; outside the grid it falls back to direct quadrature.
class TailFunctionals {
public:
    TailFunctionals(const LevyModel& model, std::vector<double> probe_grid);

    double gamma(double x) const { return gamma_plus(x) + gamma_minus(x); }
    double gamma_plus(double x) const;
    double gamma_minus(double x) const;
    double V(double x) const;
    double U(double x) const;
    /// b - int_{x<=|y|<=1} y xi(y) dy for x <= 1, b + int_{1<|y|<=x} y xi(y) dy beyond.
    double mu(double x) const;

    double mu_bar() const { return mu_bar_; }      ///< +inf when not finite
    double mu_bar0() const { return mu_bar0_; }    ///< sup over 0 < eta <= 1
    bool mu_bar_finite() const { return mu_bar_finite_; }
    /// Relative change of the running sup over the last decade of the eta grid.
    double mu_bar_last_decade_change() const { return last_decade_change_; }

    const std::vector<double>& grid() const { return grid_; }
    /// U computed independently as 2 int_0^x y gamma(y) dy on the grid.
    const std::vector<double>& U_by_parts() const { return u_walk_; }

private:
    std::size_t upper_index(double x) const;
    double gamma_side(double x, Side side) const;
    double direct_gamma(double x, Side side) const;
    double direct_V(double x) const;

    LevyModel model_;
    std::vector<double> grid_;
    std::vector<double> gp_, gm_, v_, u_walk_;
    double mu_bar_ = 0.0;
    double mu_bar0_ = 0.0;
    bool mu_bar_finite_ = true;
    double last_decade_change_ = 0.0;
};

TailFunctionals tail_functionals(const LevyModel& model, std::vector<double> probe_grid);

/// n log-spaced points on [lo, hi].
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace levyatm
