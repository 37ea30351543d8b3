#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/expint.hpp>

#include "levyatm/errors.hpp"
#include "levyatm/presets.hpp"
#include "levyatm/verify.hpp"

using namespace levyatm;

namespace {

const VerificationReport& named(const std::vector<VerificationReport>& rs, const std::string& name) {
    for (const auto& r : rs)
        if (r.check_name == name) return r;
    throw std::runtime_error("no report " + name);
}

PieceSpec one_sided(double alpha) {
    PieceSpec p;
    p.lo = 0.0;
    p.hi = 1.0;
    p.power = -alpha - 1.0;
    return p;
}

}  // namespace

TEST(Assumptions, ToyPassesAll) {
    const auto rs = check_assumptions(toy_model(1.5));
    ASSERT_EQ(rs.size(), 4u);
    for (const auto& r : rs) EXPECT_TRUE(r.pass) << r.check_name << ": " << r.notes;
    EXPECT_NEAR(named(rs, "A1_regular_variation").value("alpha_hat"), 1.5, 0.05);
    const auto summary = assumption_summary(rs);
    ASSERT_EQ(summary.size(), 4u);
    EXPECT_TRUE(summary[0].passed);
}

TEST(Assumptions, OscillatoryFailsOnlyMonotoneDensity) {
    const auto rs = check_assumptions(oscillatory_model(1.5));
    for (const auto& r : rs) EXPECT_EQ(r.pass, r.check_name != "A3_monotone_density") << r.check_name;
}

TEST(Assumptions, NoJumpsFailsAll) {
    for (const auto& r : check_assumptions(black_scholes_model(0.2))) EXPECT_FALSE(r.pass) << r.check_name;
}

TEST(Assumptions, TruncatedStableFailsLargeJumpBound) {
    const auto rs = check_assumptions(symmetric_stable_model(1.5));
    EXPECT_FALSE(named(rs, "A2_truncated_variance_bound").pass);
    EXPECT_TRUE(named(rs, "A1_regular_variation").pass);
    EXPECT_TRUE(named(rs, "A3_monotone_density").pass);
}

TEST(VRatio, PureStableIsExactlyAlphaOverTwoMinusAlpha) {
    const auto r = check_vratio(symmetric_stable_model(1.5, quad::kInf), 0.01, 10.0);
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.value("sup"), 3.0, 1e-9);
    EXPECT_LT(r.value("grid_variance"), 1e-10);
}

TEST(VRatio, ToyFiniteAndStable) {
    const auto r = check_vratio(toy_model(1.5), 0.01, 0.99);
    EXPECT_TRUE(r.pass);
    EXPECT_TRUE(std::isfinite(r.value("sup")));
    EXPECT_THROW(check_vratio(toy_model(1.5), 0.5, 0.5), DomainError);
    EXPECT_THROW(r.value("missing"), DomainError);
}

TEST(GammaStar, ToyConverges) {
    const auto r = check_gamma_star_integrability(toy_model(1.5), 1.0);
    EXPECT_TRUE(r.pass);
    EXPECT_GT(r.value("integral"), 0.0);
}

TEST(GammaStar, NoJumpsGivesZero) {
    const auto r = check_gamma_star_integrability(black_scholes_model(0.2), 1.0);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.value("integral"), 0.0);
}

// xi*(x) = x^{-2} e^{-x}: int_R^inf gamma* = E1(R) - R Gamma(-1, R), Gamma(-1, R) = e^{-R}/R - E1(R).
TEST(GammaStar, TemperedIncompleteGammaOracle) {
    PieceSpec p;
    p.lo = 0.0;
    p.hi = quad::kInf;
    p.power = -2.0;
    p.exp_rate = -1.0;
    const auto m = make_model(0.0, 0.0, JumpDensity({p}), MeasureTag::share);
    for (double R0 : {0.5, 1.0, 3.0}) {
        const double e1 = boost::math::expint(1, R0);
        const double want = e1 - R0 * (std::exp(-R0) / R0 - e1);
        const auto r = check_gamma_star_integrability(m, R0);
        EXPECT_TRUE(r.pass);
        EXPECT_NEAR(r.value("integral"), want, 1e-8 * want) << R0;
    }
    EXPECT_THROW(check_gamma_star_integrability(m, 0.0), DomainError);
}

TEST(GammaStar, HeavyShareTailDiverges) {
    PieceSpec p;
    p.lo = 0.0;
    p.hi = quad::kInf;
    p.power = -1.8;
    const auto m = make_model(0.0, 0.0, JumpDensity({p}), MeasureTag::share);
    EXPECT_THROW(check_gamma_star_integrability(m, 1.0), DivergentIntegral);
}

TEST(Concentration, StableSinglePair) {
    const auto m = symmetric_stable_model(1.5);
    const auto r = check_concentration(m, {{1.0, 1e-3}}, std::nullopt, 20000, 3);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.value("pairs_passed"), 1.0);
    EXPECT_THROW(check_concentration(m, {}, std::nullopt, 1000, 3), DomainError);
}

TEST(Concentration, FarTailHoldsTrivially) {
    const auto r = check_concentration(toy_model(1.5), {{10.0, 1e-6}}, std::nullopt, 20000, 3);
    EXPECT_TRUE(r.pass);
}

TEST(Concentration, RandomAdmissiblePairsOnToy) {
    const auto m = toy_model(1.5);
    const auto pairs = admissible_pairs(m, 25, 99);
    ASSERT_EQ(pairs.size(), 25u);
    for (const auto& [y, t] : pairs) {
        EXPECT_GE(y, 0.05);
        EXPECT_LE(y, 2.0);
        EXPECT_GE(t, 1e-6);
        EXPECT_LE(t, 1e-2);
    }
    EXPECT_EQ(admissible_pairs(m, 25, 99), pairs);
    const auto r = check_concentration(m, pairs, std::nullopt, 20000, 99);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.value("pairs_passed"), 25.0);
}

TEST(Esscher, InvariancePresets) {
    EXPECT_TRUE(check_esscher_invariance(toy_model(1.5)).pass);
    const auto st = check_esscher_invariance(symmetric_stable_model(1.5));
    EXPECT_TRUE(st.pass);
    EXPECT_NEAR(st.value("p_plus_P"), 0.5, 1e-6);
    EXPECT_NEAR(st.value("p_plus_S"), 0.5, 1e-2);
    EXPECT_THROW(check_esscher_invariance(black_scholes_model(0.2)), PreconditionViolation);
}

TEST(Esscher, OneSidedStaysOneSided) {
    const auto m = make_martingale_model(0.0, JumpDensity({one_sided(1.5)}));
    const auto r = check_esscher_invariance(m);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.value("p_plus_P"), 1.0);
    EXPECT_EQ(r.value("p_plus_S"), 1.0);
}

TEST(Convergence, BlackScholesSlopesAreOneHalf) {
    ScalingFunction sqrt_t{[](double t) { return std::sqrt(t); }, ScalingKind::closed_form, 2.0, std::nullopt};
    const auto s = convergence_study(black_scholes_model(0.2), {1e-6, 1e-5, 1e-4, 1e-3, 1e-2}, sqrt_t,
                                     make_stable_law(2.0, 0.5, 0.5));
    for (double slope : s.slopes) EXPECT_NEAR(slope, 0.5, 1e-3);
    EXPECT_NEAR(s.curve.ratio[0], 0.2 / std::sqrt(2.0 * std::numbers::pi), 1e-6);
}

TEST(Convergence, GridPrecondition) {
    const auto setup = asymptotic_setup(toy_model(1.5), true);
    EXPECT_THROW(convergence_study(toy_model(1.5), {1e-4, 1e-3, 1e-2}, setup.scaling, setup.law), PreconditionViolation);
    EXPECT_THROW(convergence_study(toy_model(1.5), {1e-6, 1e-4, 1e-1}, setup.scaling, setup.law), PreconditionViolation);
}

TEST(Convergence, PureStableSlopesApproachInverseAlpha) {
    const auto m = symmetric_stable_model(1.5);
    const auto setup = asymptotic_setup(m);
    const auto s = convergence_study(m, {1e-8, 1e-7, 1e-6, 1e-5, 1e-4}, setup.scaling, setup.law);
    EXPECT_NEAR(s.slopes.front(), 2.0 / 3.0, 0.01);
    EXPECT_TRUE(s.report.pass);
    EXPECT_LT(std::abs(s.report.value("ratio_error_smallest_t")), 0.05);
}

TEST(Setup, ToyClosedFormAndMallerMasonAgreeInOrder) {
    const auto m = toy_model(1.5);
    const auto a = asymptotic_setup(m, true), b = asymptotic_setup(m, false);
    EXPECT_EQ(a.scaling.kind, ScalingKind::closed_form);
    EXPECT_EQ(b.scaling.kind, ScalingKind::maller_mason_inf);
    EXPECT_NEAR(a.law.alpha, 1.5, 1e-15);
    EXPECT_NEAR(a.scaling(1e-8) / b.scaling(1e-8), 1.0, 0.15);
}
