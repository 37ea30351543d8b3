#include "levyatm/presets.hpp"

#include <cmath>

#include "levyatm/errors.hpp"

namespace levyatm {

namespace {

void require_alpha(double alpha) {
    if (!(alpha > 1.0 && alpha < 2.0)) throw AlphaDomain("preset needs alpha in (1, 2)");
}

PieceSpec power_piece(double lo, double hi, double alpha) {
    PieceSpec p;
    p.lo = lo;
    p.hi = hi;
    p.power = -alpha - 1.0;
    return p;
}

}  // namespace

JumpDensity toy_density(double alpha) {
    require_alpha(alpha);
    PieceSpec p = power_piece(-1.0, quad::kInf, alpha);
    p.exp_rate = -1.0;
    p.log_power = 1;
    return JumpDensity({p}, std::nullopt, alpha);
}

AnalyticTail toy_share_tail(double alpha) {
    require_alpha(alpha);
    const double a = alpha;
    // int_x^1 y^{-a-1} ln(1/y) dy and int_x^inf y^{-a-1} ln y dy for x >= 1
    auto inner = [a](double x) { return std::pow(x, -a) * (std::log(1.0 / x) - 1.0 / a) / a + 1.0 / (a * a); };
    auto outer = [a](double x) { return std::pow(x, -a) * (std::log(x) + 1.0 / a) / a; };
    AnalyticTail t;
    t.plus = [=](double x) { return x < 1.0 ? inner(x) + 1.0 / (a * a) : outer(x); };
    t.minus = [=](double x) { return x < 1.0 ? inner(x) : 0.0; };
    return t;
}

LevyModel toy_model(double alpha, double sigma, Tolerance tol) {
    return make_martingale_model(sigma, toy_density(alpha), tol);
}

LevyModel toy_share_model(double alpha, double sigma, Tolerance tol) {
    return with_analytic_tail(esscher_transform(toy_model(alpha, sigma, tol), 1.0),
                              toy_share_tail(alpha));
}

LevyModel black_scholes_model(double sigma, Tolerance tol) {
    return make_martingale_model(sigma, JumpDensity(), tol);
}

LevyModel symmetric_stable_model(double alpha, double truncation, double sigma, Tolerance tol) {
    require_alpha(alpha);
    if (!(truncation > 0.0)) throw DomainError("truncation must be positive");
    const double a = alpha, T = truncation;
    AnalyticTail tail;
    tail.plus = [a, T](double x) { return x < T ? (std::pow(x, -a) - std::pow(T, -a)) / a : 0.0; };
    tail.minus = tail.plus;
    JumpDensity jumps({power_piece(-T, T, alpha)}, tail, alpha);
    if (std::isfinite(T)) return make_martingale_model(sigma, std::move(jumps), tol);
    return make_model(0.0, sigma, std::move(jumps), MeasureTag::physical, tol);
}

LevyModel oscillatory_model(double alpha, Tolerance tol) {
    require_alpha(alpha);
    PieceSpec p = power_piece(-1.0, quad::kInf, alpha);
    p.exp_rate = -1.0;
    p.coef = 2.0;
    p.osc_amp = 0.5;
    return make_martingale_model(0.0, JumpDensity({p}, std::nullopt, alpha), tol);
}

LevyModel with_analytic_tail(const LevyModel& model, AnalyticTail tail) {
    LevyModel m = model;
    m.jumps = JumpDensity(model.jumps.pieces(), std::move(tail), model.jumps.index_hint());
    return m;
}

}  // namespace levyatm
