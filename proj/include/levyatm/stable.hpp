#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace levyatm {

/// Law with characteristic function
///   exp(-c |s|^alpha (1 - i (p_plus - p_minus) sgn(s) tan(pi alpha / 2))).
struct StableLaw {
    double alpha = 2.0;
    double c_alpha = 0.5;
    double p_plus = 0.5;
    double p_minus = 0.5;

    double skew() const { return p_plus - p_minus; }
};

/// Validates 1 < alpha <= 2, c > 0, p_plus in [0, 1].
StableLaw make_stable_law(double alpha, double c_alpha, double p_plus);

/// pi / (2 Gamma(1 + alpha) sin(pi alpha / 2)).
double stable_varsigma(double alpha);

/// Limit law of (X_t - A_t) / B_t when B_t solves t gamma(B_t) ~ Lambda and the tails
/// split as p_plus : p_minus. The Levy density of the limit is alpha Lambda p_pm |x|^{-alpha-1},
/// so c_alpha = alpha varsigma Lambda.
StableLaw limit_law(double alpha, double p_plus, double lambda_const);

std::complex<double> stable_cf(const StableLaw& law, double s);

/// P(Z >= u) by Gil-Pelaez inversion.
double stable_tail(const StableLaw& law, double u);

/// Density by Fourier inversion.
double stable_density(const StableLaw& law, double x);

/// E[max(Z, 0)] = int_0^inf P(Z >= u) du, with the algebraic tail beyond the point where
/// P(Z >= u) < 1e-6 integrated in closed form.
double expected_positive_part(const StableLaw& law);

/// Chambers-Mallows-Stuck draws, deterministic in seed.
std::vector<double> sample_stable(const StableLaw& law, std::size_t n, std::uint64_t seed);

}  // namespace levyatm
