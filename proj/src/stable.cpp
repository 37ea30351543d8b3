#include "levyatm/stable.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "levyatm/errors.hpp"
#include "levyatm/quadrature.hpp"

namespace levyatm {

namespace {

constexpr double kPi = std::numbers::pi;

double tan_half_pi_alpha(double alpha) {
    // tan(pi) evaluates to -1.2e-16 rather than 0; keep the Gaussian boundary exact.
    return alpha == 2.0 ? 0.0 : std::tan(0.5 * kPi * alpha);
}

// Point beyond which exp(-c s^alpha) < 1e-16.
double cf_cutoff(const StableLaw& law) { return std::pow(36.85 / law.c_alpha, 1.0 / law.alpha); }

double phase_rate(const StableLaw& law, double u, double s_max) {
    const double drift = law.alpha * law.c_alpha * std::abs(law.skew() * tan_half_pi_alpha(law.alpha)) *
                         std::pow(s_max, law.alpha - 1.0);
    return std::max(1.0, std::abs(u) + drift);
}

}  // namespace

StableLaw make_stable_law(double alpha, double c_alpha, double p_plus) {
    if (!(alpha > 1.0 && alpha <= 2.0)) throw AlphaDomain("stable law needs 1 < alpha <= 2");
    if (!(c_alpha > 0.0) || !std::isfinite(c_alpha)) throw DomainError("stable scale must be positive");
    if (!(p_plus >= 0.0 && p_plus <= 1.0)) throw DomainError("p_plus must lie in [0, 1]");
    return StableLaw{alpha, c_alpha, p_plus, 1.0 - p_plus};
}

double stable_varsigma(double alpha) {
    return kPi / (2.0 * std::tgamma(1.0 + alpha) * std::sin(0.5 * kPi * alpha));
}

StableLaw limit_law(double alpha, double p_plus, double lambda_const) {
    return make_stable_law(alpha, alpha * stable_varsigma(alpha) * lambda_const, p_plus);
}

std::complex<double> stable_cf(const StableLaw& law, double s) {
    if (s == 0.0) return 1.0;
    const double sg = s > 0.0 ? 1.0 : -1.0;
    const double mag = law.c_alpha * std::pow(std::abs(s), law.alpha);
    return std::exp(std::complex<double>(-mag, mag * law.skew() * sg * tan_half_pi_alpha(law.alpha)));
}

double stable_tail(const StableLaw& law, double u) {
    const double s_max = cf_cutoff(law);
    auto integrand = [&](double s) { return std::imag(std::exp(std::complex<double>(0.0, -s * u)) * stable_cf(law, s)) / s; };
    const double cap = kPi / phase_rate(law, u, s_max);
    auto acc = quad::integrate(integrand, 0.0, s_max, cap);
    quad::check_tolerance(acc, Tolerance{1e-12, 1e-10}, "stable_tail");
    // Gil-Pelaez: F(u) = 1/2 - (1/pi) int_0^inf Im(e^{-isu} phi(s)) / s ds.
    return std::clamp(0.5 + acc.value / kPi, 0.0, 1.0);
}

double stable_density(const StableLaw& law, double x) {
    const double s_max = cf_cutoff(law);
    auto integrand = [&](double s) { return std::real(std::exp(std::complex<double>(0.0, -s * x)) * stable_cf(law, s)); };
    auto acc = quad::integrate(integrand, 0.0, s_max, kPi / phase_rate(law, x, s_max));
    quad::check_tolerance(acc, Tolerance{1e-12, 1e-10}, "stable_density");
    return acc.value / kPi;
}

double expected_positive_part(const StableLaw& law) {
    if (!(law.alpha > 1.0)) throw AlphaDomain("E[Z+] needs alpha > 1");
    auto tail = [&](double u) { return stable_tail(law, u); };
    const bool gaussian = law.alpha == 2.0;
    const double stop = gaussian ? 1e-12 : 1e-6;
    double u_max = 1.0;
    while (tail(u_max) >= stop) {
        u_max *= 2.0;
        if (u_max > 1e12) throw QuadratureFailure("stable tail does not fall below the cut-off");
    }
    // The tail itself is only good to ~1e-13 absolute, so panels stop refining there.
    double value = 0.0;
    for (double a = 0.0, b = 1.0; a < u_max; a = b, b *= 2.0) {
        double err = 0.0;
        value += quad::panel(tail, a, b, err, 1e-13 * (b - a));
    }
    if (!gaussian) {
        // P(Z >= u) ~ C u^{-alpha} beyond u_max.
        const double C = tail(u_max) * std::pow(u_max, law.alpha);
        value += C * std::pow(u_max, 1.0 - law.alpha) / (law.alpha - 1.0);
    }
    return value;
}

std::vector<double> sample_stable(const StableLaw& law, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    auto unit = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    // Weron's form of the construction draws S1(alpha, beta, 1, 0), whose characteristic
    // function is exp(-|s|^alpha (1 - i beta sgn(s) tan(pi alpha / 2))); beta = p_plus - p_minus
    // and the scale c enters as c^{1/alpha}.
    const double a = law.alpha;
    const double bt = law.skew() * tan_half_pi_alpha(a);
    const double B = std::atan(bt) / a;
    const double S = std::pow(1.0 + bt * bt, 1.0 / (2.0 * a));
    const double scale = std::pow(law.c_alpha, 1.0 / a);
    std::vector<double> out(n);
    for (auto& z : out) {
        double u = 0.0, w = 0.0;
        do u = unit(); while (u == 0.0);
        do w = -std::log1p(-unit()); while (w == 0.0);
        const double V = kPi * (u - 0.5);
        const double X = S * std::sin(a * (V + B)) / std::pow(std::cos(V), 1.0 / a) *
                         std::pow(std::cos(V - a * (V + B)) / w, (1.0 - a) / a);
        z = scale * X;
    }
    return out;
}

}  // namespace levyatm
