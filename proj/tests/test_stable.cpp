#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "levyatm/errors.hpp"
#include "levyatm/stable.hpp"

using namespace levyatm;

namespace {

double normal_upper(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

}  // namespace

TEST(StableLaw, Validation) {
    EXPECT_THROW(make_stable_law(1.0, 1.0, 0.5), AlphaDomain);
    EXPECT_THROW(make_stable_law(2.1, 1.0, 0.5), AlphaDomain);
    EXPECT_THROW(make_stable_law(1.5, 0.0, 0.5), DomainError);
    EXPECT_THROW(make_stable_law(1.5, 1.0, 1.2), DomainError);
    const auto law = make_stable_law(1.5, 1.0, 0.8);
    EXPECT_NEAR(law.p_minus, 0.2, 1e-15);
    EXPECT_NEAR(law.skew(), 0.6, 1e-15);
}

TEST(StableLaw, VarsigmaAndLimitLaw) {
    const double a = 1.5;
    const double vs = std::numbers::pi / (2.0 * std::tgamma(1.0 + a) * std::sin(std::numbers::pi * a / 2.0));
    EXPECT_NEAR(stable_varsigma(a), vs, 1e-14);
    const auto law = limit_law(a, 0.5, 0.25);
    EXPECT_NEAR(law.c_alpha, a * vs * 0.25, 1e-14);
    EXPECT_EQ(law.alpha, a);
}

TEST(StableLaw, GaussianBoundary) {
    const auto g = make_stable_law(2.0, 0.5, 0.5);
    EXPECT_NEAR(std::abs(stable_cf(g, 1.3) - std::exp(-0.5 * 1.69)), 0.0, 1e-15);
    for (double u : {-1.5, 0.0, 0.5, 1.0, 2.5})
        EXPECT_NEAR(stable_tail(g, u), normal_upper(u), 1e-9) << u;
    EXPECT_NEAR(stable_density(g, 0.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-9);
    EXPECT_NEAR(stable_density(g, 1.0), std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi), 1e-9);
    EXPECT_NEAR(expected_positive_part(g), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-6);
}

TEST(StableLaw, MassAtZeroForSkewedLaw) {
    // P(Z > 0) = 1/2 + arctan(beta tan(pi a / 2)) / (pi a)
    for (double p : {0.5, 0.75, 1.0}) {
        const double a = 1.5, beta = 2.0 * p - 1.0;
        const auto law = make_stable_law(a, 1.0, p);
        const double want = 0.5 + std::atan(beta * std::tan(std::numbers::pi * a / 2.0)) / (std::numbers::pi * a);
        EXPECT_NEAR(stable_tail(law, 0.0), want, 1e-8) << p;
    }
}

TEST(StableLaw, PowerTail) {
    // P(Z >= u) ~ p_plus c / (varsigma a) u^{-a} as u -> inf
    const double a = 1.5;
    const auto law = make_stable_law(a, 1.0, 1.0);
    const double u = 200.0;
    const double want = law.c_alpha / (stable_varsigma(a) * a) * std::pow(u, -a);
    EXPECT_NEAR(stable_tail(law, u) / want, 1.0, 0.02);
}

// Z has the law of lambda^{-1} Z' when c' = lambda^a c, at random lambda and u.
TEST(StableProperty, ScalingInvariance) {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> lam(0.3, 3.0), uu(-3.0, 3.0), pp(0.0, 1.0);
    for (int k = 0; k < 15; ++k) {
        const double a = 1.6, l = lam(gen), u = uu(gen), p = pp(gen);
        const auto z = make_stable_law(a, 0.7, p), zl = make_stable_law(a, 0.7 * std::pow(l, a), p);
        EXPECT_NEAR(stable_tail(zl, l * u), stable_tail(z, u), 1e-8);
    }
}

// The density integrates to the tail difference.
TEST(StableProperty, DensityIntegratesToTail) {
    const auto law = make_stable_law(1.5, 1.0, 0.8);
    const double a = -0.7, b = 1.9;
    const int n = 400;
    const double h = (b - a) / n;
    double s = stable_density(law, a) + stable_density(law, b);
    for (int k = 1; k < n; ++k) s += stable_density(law, a + k * h) * (k % 2 ? 4.0 : 2.0);
    EXPECT_NEAR(s * h / 3.0, stable_tail(law, a) - stable_tail(law, b), 1e-8);
}

TEST(StableProperty, TailMonotone) {
    const auto law = make_stable_law(1.3, 1.0, 0.2);
    double prev = 1.0;
    for (double u = -10.0; u <= 10.0; u += 0.25) {
        const double t = stable_tail(law, u);
        EXPECT_LE(t, prev + 1e-10);
        EXPECT_GE(t, -1e-10);
        prev = t;
    }
}

TEST(CmsSampler, DeterministicInSeed) {
    const auto law = make_stable_law(1.5, 1.0, 0.5);
    EXPECT_EQ(sample_stable(law, 1000, 9), sample_stable(law, 1000, 9));
    EXPECT_NE(sample_stable(law, 1000, 9), sample_stable(law, 1000, 10));
}

TEST(CmsSampler, GaussianMoments) {
    const auto draws = sample_stable(make_stable_law(2.0, 0.5, 0.5), 200000, 3);
    double m = 0.0, v = 0.0;
    for (double x : draws) m += x;
    m /= draws.size();
    for (double x : draws) v += (x - m) * (x - m);
    v /= draws.size();
    EXPECT_NEAR(m, 0.0, 5.0 / std::sqrt(200000.0));
    EXPECT_NEAR(v, 1.0, 0.02);
}

// Kolmogorov-Smirnov distance between the CMS sample and the Gil-Pelaez CDF on a fixed mesh.
TEST(CmsSampler, KolmogorovSmirnov) {
    for (double p : {0.5, 1.0}) {
        const auto law = make_stable_law(1.5, 1.0, p);
        auto draws = sample_stable(law, 100000, 77);
        std::sort(draws.begin(), draws.end());
        double d = 0.0;
        for (double u = -6.0; u <= 6.0; u += 0.2) {
            const double emp = static_cast<double>(std::lower_bound(draws.begin(), draws.end(), u) - draws.begin()) / draws.size();
            d = std::max(d, std::abs(emp - (1.0 - stable_tail(law, u))));
        }
        EXPECT_LT(d, 1.63 / std::sqrt(100000.0)) << p;
    }
}

TEST(CmsSampler, PositivePartMatchesQuadrature) {
    const std::size_t n = 1000000;
    for (double p : {0.5, 1.0}) {
        const auto law = make_stable_law(1.8, 1.0, p);
        const auto draws = sample_stable(law, n, 5);
        double s = 0.0, s2 = 0.0;
        for (double x : draws) {
            const double v = std::max(x, 0.0);
            s += v;
            s2 += v * v;
        }
        const double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
        EXPECT_NEAR(mean, expected_positive_part(law), 4.0 * se) << p;
    }
}
