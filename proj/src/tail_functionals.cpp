#include "levyatm/tail_functionals.hpp"

#include <algorithm>
#include <cmath>

#include "levyatm/errors.hpp"

namespace levyatm {

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw GridError("log_grid needs 0 < lo < hi and n >= 2");
    std::vector<double> g(n);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * i / (n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

namespace {

double one(double) { return 1.0; }

}  // namespace

double TailFunctionals::direct_gamma(double x, Side side) const {
    auto acc = model_.jumps.integrate(one, x, quad::kInf, side);
    quad::check_tolerance(acc, model_.tol, "gamma");
    return acc.value;
}

double TailFunctionals::direct_V(double x) const {
    auto acc = model_.jumps.integrate([](double y) { return y * y; }, 0.0, x);
    quad::check_tolerance(acc, model_.tol, "V");
    return acc.value;
}

TailFunctionals::TailFunctionals(const LevyModel& model, std::vector<double> probe_grid)
    : model_(model), grid_(std::move(probe_grid)) {
    if (grid_.empty()) throw GridError("probe grid is empty");
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (!(grid_[i] > 0.0) || !std::isfinite(grid_[i])) throw GridError("probe grid must be positive");
        if (i > 0 && !(grid_[i] > grid_[i - 1])) throw GridError("probe grid must be strictly increasing");
    }
    const std::size_t n = grid_.size();
    const auto& J = model_.jumps;
    gp_.assign(n, 0.0);
    gm_.assign(n, 0.0);
    v_.assign(n, 0.0);
    u_walk_.assign(n, 0.0);

    gp_[n - 1] = direct_gamma(grid_[n - 1], Side::positive);
    gm_[n - 1] = direct_gamma(grid_[n - 1], Side::negative);
    for (std::size_t i = n - 1; i-- > 0;) {
        gp_[i] = gp_[i + 1] + J.integrate(one, grid_[i], grid_[i + 1], Side::positive).value;
        gm_[i] = gm_[i + 1] + J.integrate(one, grid_[i], grid_[i + 1], Side::negative).value;
    }
    v_[0] = direct_V(grid_[0]);
    for (std::size_t i = 1; i < n; ++i)
        v_[i] = v_[i - 1] + J.integrate([](double y) { return y * y; }, grid_[i - 1], grid_[i]).value;

    // U as 2 int_0^x y gamma(y) dy with gamma itself re-evaluated by quadrature.
    auto two_y_gamma = [&](double y) { return 2.0 * y * direct_gamma(y, Side::both); };
    u_walk_[0] = quad::integrate(two_y_gamma, 0.0, grid_[0]).value;
    for (std::size_t i = 1; i < n; ++i)
        u_walk_[i] = u_walk_[i - 1] + quad::integrate(two_y_gamma, grid_[i - 1], grid_[i]).value;

    // mu_eta on the fixed eta grid merged with the probe points below 1, walked down from 1.
    std::vector<double> etas = log_grid(1e-8, 1.0, 60);
    for (double g : grid_)
        if (g < 1.0 && g >= 1e-8) etas.push_back(g);
    std::sort(etas.begin(), etas.end(), std::greater<>());
    etas.erase(std::unique(etas.begin(), etas.end()), etas.end());
    double mu = model_.b;
    double sup_all = std::abs(mu);
    double sup_before_last_decade = std::abs(mu);
    double prev = 1.0;
    for (double eta : etas) {
        if (eta < prev) {
            auto part = J.integrate([](double y) { return y; }, eta, prev);
            mu -= part.value;
            prev = eta;
        }
        sup_all = std::max(sup_all, std::abs(mu));
        if (eta >= 1e-7 * (1.0 - 1e-12)) sup_before_last_decade = sup_all;
    }
    mu_bar0_ = sup_all;
    last_decade_change_ =
        sup_all > 0.0 ? (sup_all - sup_before_last_decade) / sup_all : 0.0;
    const double outer_bound = std::abs(model_.b) + weighted_outer_moment(J, 0.0, 1.0, model_.tol);
    mu_bar_finite_ = last_decade_change_ < 1e-6 && std::isfinite(outer_bound);
    mu_bar_ = mu_bar_finite_ ? std::max(mu_bar0_, outer_bound) : quad::kInf;
}

namespace {

bool inside(const std::vector<double>& g, double x) { return x >= g.front() && x <= g.back(); }

}  // namespace

std::size_t TailFunctionals::upper_index(double x) const {
    return static_cast<std::size_t>(std::lower_bound(grid_.begin(), grid_.end(), x) - grid_.begin());
}

double TailFunctionals::gamma_side(double x, Side side) const {
    if (!(x > 0.0)) throw DomainError("tail functionals need x > 0");
    if (!inside(grid_, x)) return direct_gamma(x, side);
    const std::size_t i = upper_index(x);
    const double cached = side == Side::positive ? gp_[i] : gm_[i];
    if (grid_[i] == x) return cached;
    return cached + model_.jumps.integrate(one, x, grid_[i], side).value;
}

double TailFunctionals::gamma_plus(double x) const { return gamma_side(x, Side::positive); }

double TailFunctionals::gamma_minus(double x) const { return gamma_side(x, Side::negative); }

double TailFunctionals::V(double x) const {
    if (!(x > 0.0)) throw DomainError("tail functionals need x > 0");
    if (!inside(grid_, x)) return direct_V(x);
    const std::size_t i = upper_index(x);
    if (grid_[i] == x) return v_[i];
    return v_[i - 1] + model_.jumps.integrate([](double y) { return y * y; }, grid_[i - 1], x).value;
}

double TailFunctionals::U(double x) const { return V(x) + x * x * gamma(x); }

double TailFunctionals::mu(double x) const {
    if (!(x > 0.0)) throw DomainError("tail functionals need x > 0");
    auto id = [](double y) { return y; };
    if (x <= 1.0) return model_.b - model_.jumps.integrate(id, x, 1.0).value;
    return model_.b + model_.jumps.integrate(id, 1.0, x).value;
}

TailFunctionals tail_functionals(const LevyModel& model, std::vector<double> probe_grid) {
    return TailFunctionals(model, std::move(probe_grid));
}

}  // namespace levyatm
