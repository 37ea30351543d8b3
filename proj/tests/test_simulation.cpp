#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "levyatm/errors.hpp"
#include "levyatm/presets.hpp"
#include "levyatm/pricing.hpp"
#include "levyatm/simulation.hpp"

using namespace levyatm;

namespace {

struct Moments {
    double mean = 0.0, var = 0.0;
};

template <class F>
Moments sample_moments(std::size_t n, F draw) {
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = draw();
        s += x;
        s2 += x * x;
    }
    Moments m;
    m.mean = s / n;
    m.var = s2 / n - m.mean * m.mean;
    return m;
}

double Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace

TEST(Simulator, BrownianOnly) {
    const LevySimulator sim(black_scholes_model(0.3));
    const auto p = sim.plan(0.5);
    EXPECT_EQ(p.jump_rate, 0.0);
    EXPECT_NEAR(p.drift, -0.045 * 0.5, 1e-15);
    EXPECT_NEAR(p.gaussian_sd, 0.3 * std::sqrt(0.5), 1e-15);
    std::mt19937_64 gen(1);
    const std::size_t n = 200000;
    const auto m = sample_moments(n, [&] { return sim.draw(p, gen); });
    EXPECT_NEAR(m.mean, p.drift, 4.0 * p.gaussian_sd / std::sqrt(double(n)));
    EXPECT_NEAR(m.var, 0.045, 0.045 * 0.02);
}

// Finite activity on [0.5, 2]: E X_t = t (b + int_1^2 x xi), Var X_t = t int x^2 xi.
TEST(Simulator, CompoundPoissonMoments) {
    PieceSpec piece;
    piece.lo = 0.5;
    piece.hi = 2.0;
    piece.coef = 3.0;
    const auto m = make_model(0.1, 0.0, JumpDensity({piece}));
    const LevySimulator sim(m);
    const double t = 0.5;
    const auto p = sim.plan(t);
    EXPECT_NEAR(p.jump_rate, 3.0 * 1.5 * t, 1e-9);
    EXPECT_EQ(p.p_plus, 1.0);
    std::mt19937_64 gen(2);
    const std::size_t n = 400000;
    const auto mo = sample_moments(n, [&] { return sim.draw(p, gen); });
    const double mean = t * (0.1 + 4.5), var = t * (8.0 - 0.125);
    EXPECT_NEAR(mo.mean, mean, 4.0 * std::sqrt(var / n));
    EXPECT_NEAR(mo.var, var, 0.01 * var);
}

TEST(Simulator, MartingaleInExpectation) {
    const auto m = symmetric_stable_model(1.5);
    const LevySimulator sim(m);
    const double t = 1e-3;
    const auto p = sim.plan(t);
    EXPECT_LT(p.skew, 0.01);
    std::mt19937_64 gen(3);
    const std::size_t n = 200000;
    const auto mo = sample_moments(n, [&] { return std::exp(sim.draw(p, gen)); });
    EXPECT_NEAR(mo.mean, 1.0, 4.0 * std::sqrt(mo.var / n));
}

// The plan meets its skew target and the threshold shrinks with t.
TEST(SimulatorProperty, PlanSkewAndThreshold) {
    const LevySimulator sim(toy_model(1.5));
    double prev_eps = 0.0;
    for (double t = 1e-8; t <= 1e-1; t *= 10.0) {
        const auto p = sim.plan(t);
        EXPECT_LT(p.skew, 0.01) << t;
        EXPECT_GE(p.epsilon, prev_eps) << t;
        EXPECT_GT(p.gaussian_sd, 0.0);
        prev_eps = p.epsilon;
    }
}

TEST(Simulator, Errors) {
    const LevySimulator sim(toy_model(1.5));
    EXPECT_THROW(sim.plan(0.0), DomainError);
    EXPECT_THROW(sim.plan(1.0, 0.01, 10.0), SimulationBudgetExceeded);
    EXPECT_THROW(LevySimulator(toy_model(1.5), 2.0), DomainError);
    EXPECT_THROW(tail_prob_mc(sim, 1e-3, 0.1, 0, 1), DomainError);
}

TEST(TailProbMc, BrownianClosedForm) {
    const LevySimulator sim(black_scholes_model(0.2));
    const double t = 0.25, y = 0.05;
    const auto r = tail_prob_mc(sim, t, y, 200000, 4);
    EXPECT_NEAR(r.estimate, Phi((-0.02 * t - y) / (0.2 * std::sqrt(t))), 4.0 * r.std_error);
}

// The physical triplet tagged as "share" lets the Gil-Pelaez inversion serve as oracle.
TEST(TailProbMc, ToyAgainstFourierInversion) {
    const auto m = toy_model(1.5);
    const auto as_share = make_model(m.b, m.sigma, m.jumps, MeasureTag::share);
    const LevySimulator sim(m);
    for (double y : {0.05, 0.2}) {
        const double t = 1e-2;
        const auto r = tail_prob_mc(sim, t, y, 200000, 5);
        EXPECT_NEAR(r.estimate, share_tail_prob(as_share, t, y), 4.0 * r.std_error + 1e-4) << y;
    }
}

TEST(TailProbMc, DeterministicInSeed) {
    const LevySimulator sim(toy_model(1.5));
    EXPECT_EQ(tail_prob_mc(sim, 1e-3, 0.1, 20000, 9).estimate, tail_prob_mc(sim, 1e-3, 0.1, 20000, 9).estimate);
}
