#include "levyatm/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "levyatm/errors.hpp"
#include "levyatm/tail_functionals.hpp"

namespace levyatm {

namespace {

double one(double) { return 1.0; }

}  // namespace

LevySimulator::LevySimulator(const LevyModel& model, double eps_floor) : model_(model) {
    if (!(eps_floor > 0.0 && eps_floor < 1.0)) throw DomainError("eps_floor must lie in (0, 1)");
    const auto& J = model_.jumps;
    const int decades = static_cast<int>(std::ceil(-std::log10(eps_floor) - 1e-9));
    eps_ = log_grid(std::pow(10.0, -decades), 1.0, 100 * decades + 1);
    const std::size_t n = eps_.size();

    V_.assign(n, 0.0);
    A3_.assign(n, 0.0);
    mu_.assign(n, model_.b);
    auto sq = [](double y) { return y * y; };
    auto cube = [](double y) { return std::abs(y) * y * y; };
    auto id = [](double y) { return y; };
    V_[0] = J.integrate(sq, 0.0, eps_[0]).value;
    A3_[0] = J.integrate(cube, 0.0, eps_[0]).value;
    for (std::size_t k = 1; k < n; ++k) {
        V_[k] = V_[k - 1] + J.integrate(sq, eps_[k - 1], eps_[k]).value;
        A3_[k] = A3_[k - 1] + J.integrate(cube, eps_[k - 1], eps_[k]).value;
    }
    for (std::size_t k = n - 1; k-- > 0;) mu_[k] = mu_[k + 1] - J.integrate(id, eps_[k], eps_[k + 1]).value;

    auto build = [&](Side side, double reach) {
        SideTable tab;
        tab.x = eps_;
        // Continue above 1 until the support ends or the remaining mass is negligible.
        if (reach > 1.0) {
            const double tail_one = J.integrate(one, 1.0, quad::kInf, side).value;
            double x = 1.0;
            while (x < reach) {
                x = std::min(reach, x * std::pow(10.0, 0.01));
                tab.x.push_back(x);
                if (!std::isfinite(reach) && J.integrate(one, x, quad::kInf, side).value <= 1e-14 * tail_one) break;
                if (tab.x.size() > n + 5000) break;
            }
        }
        const std::size_t m = tab.x.size();
        tab.tail.assign(m, 0.0);
        tab.tail[m - 1] = J.integrate(one, tab.x[m - 1], quad::kInf, side).value;
        for (std::size_t k = m - 1; k-- > 0;)
            tab.tail[k] = tab.tail[k + 1] + J.integrate(one, tab.x[k], tab.x[k + 1], side).value;
        return tab;
    };
    plus_ = build(Side::positive, J.support_hi());
    minus_ = build(Side::negative, -J.support_lo());
}

LevySimulator::Plan LevySimulator::plan(double t, double skew_target, double max_jumps_per_path) const {
    if (!(t > 0.0)) throw DomainError("simulation needs t > 0");
    const double s2 = model_.sigma * model_.sigma;
    auto skew_at = [&](std::size_t k) {
        const double var = s2 + V_[k];
        return var > 0.0 ? A3_[k] / (std::pow(var, 1.5) * std::sqrt(t)) : 0.0;
    };
    std::size_t k = eps_.size() - 1;
    while (k > 0 && !(skew_at(k) < skew_target)) --k;
    Plan p;
    p.t = t;
    p.level = k;
    p.epsilon = eps_[k];
    p.skew = skew_at(k);
    p.drift = mu_[k] * t;
    p.gaussian_sd = std::sqrt((s2 + V_[k]) * t);
    const double gp = plus_.tail[k], gm = minus_.tail[k];
    p.jump_rate = (gp + gm) * t;
    p.p_plus = gp + gm > 0.0 ? gp / (gp + gm) : 0.0;
    if (p.jump_rate > max_jumps_per_path)
        throw SimulationBudgetExceeded("expected jumps per path " + std::to_string(p.jump_rate) +
                                       " exceed the budget");
    return p;
}

double LevySimulator::draw_jump(const SideTable& tab, std::size_t level, std::mt19937_64& gen) const {
    // Inverse of the tail: find x with tail(x) = u tail(eps), u uniform on (0, 1].
    const double u = 1.0 - static_cast<double>(gen() >> 11) * 0x1.0p-53;
    const double g = u * tab.tail[level];
    // First index past `level` whose tail is below g; the tail array is non-increasing.
    auto it = std::partition_point(tab.tail.begin() + level, tab.tail.end(), [g](double v) { return v >= g; });
    std::size_t j = static_cast<std::size_t>(it - tab.tail.begin());
    if (j == tab.tail.size()) j = tab.tail.size() - 1;  // beyond the table: extrapolate the last cell
    if (j == 0) return tab.x[0];
    const std::size_t i = j - 1;
    const double g0 = tab.tail[i], g1 = tab.tail[j];
    if (g1 > 0.0 && g0 > g1) {
        const double w = std::log(g / g0) / std::log(g1 / g0);
        return std::exp(std::log(tab.x[i]) + w * std::log(tab.x[j] / tab.x[i]));
    }
    if (g0 > g1) return tab.x[i] + (g0 - g) / (g0 - g1) * (tab.x[j] - tab.x[i]);
    return tab.x[i];
}

double LevySimulator::draw(const Plan& p, std::mt19937_64& gen) const {
    double x = p.drift;
    if (p.gaussian_sd > 0.0) x += p.gaussian_sd * std::normal_distribution<double>()(gen);
    if (p.jump_rate > 0.0) {
        const long count = std::poisson_distribution<long>(p.jump_rate)(gen);
        for (long j = 0; j < count; ++j) {
            const bool up = static_cast<double>(gen() >> 11) * 0x1.0p-53 < p.p_plus;
            x += up ? draw_jump(plus_, p.level, gen) : -draw_jump(minus_, p.level, gen);
        }
    }
    return x;
}

McTail tail_prob_mc(const LevySimulator& sim, double t, double y, std::size_t n, std::uint64_t seed,
                    double skew_target) {
    if (n == 0) throw DomainError("tail_prob_mc needs n > 0");
    const auto p = sim.plan(t, skew_target);
    std::mt19937_64 gen(seed);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (sim.draw(p, gen) >= y) ++hits;
    const double m = static_cast<double>(hits) / n;
    return {m, std::sqrt(m * (1.0 - m) / n)};
}

}  // namespace levyatm
