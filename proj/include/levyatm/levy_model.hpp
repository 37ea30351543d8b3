#pragma once

#include <complex>
#include <string>
#include <vector>

#include "levyatm/jump_density.hpp"
#include "levyatm/quadrature.hpp"

namespace levyatm {

using cplx = std::complex<double>;

enum class MeasureTag { physical, share };

const char* to_string(MeasureTag tag);

/// Characteristic triplet (b, sigma, xi) of X with truncation 1_{|x| <= 1}.
///
/// Under the physical measure psi is defined on -1 <= Im(u) <= 0; under the share
/// measure the admissible strip is 0 <= Im(u) <= 1 (tilting by e^x moves it up by one).
struct LevyModel {
    double b = 0.0;
    double sigma = 0.0;
    JumpDensity jumps;
    MeasureTag measure_tag = MeasureTag::physical;
    bool martingale = false;
    Tolerance tol;
};

/// Builds a model and checks that xi integrates 1 ^ x^2. Exponential moments are
/// reported by validate_model and enforced by the operations that need them.
LevyModel make_model(double b, double sigma, JumpDensity jumps,
                     MeasureTag tag = MeasureTag::physical, Tolerance tol = {});

/// Model with b fixed by psi(-i) = 0; verifies the calibration to 1e-10.
LevyModel make_martingale_model(double sigma, JumpDensity jumps, Tolerance tol = {});

/// int (e^{iux} - 1 - iux 1_{|x|<=1}) xi(x) dx. No strip check.
cplx jump_exponent(const JumpDensity& jumps, cplx u, const Tolerance& tol = {});

/// psi(u) = iub - sigma^2 u^2 / 2 + jump_exponent(u).
cplx char_exponent(const LevyModel& model, cplx u);

double martingale_drift(double sigma, const JumpDensity& jumps, const Tolerance& tol = {});

/// Triplet of X under the measure with density e^{theta X_t} / E[e^{theta X_t}].
LevyModel esscher_transform(const LevyModel& model, double theta);

struct ModelCheck {
    std::string name;
    double value = 0.0;  ///< +inf when the integral diverges
    bool passed = false;
    std::string detail;
};

struct ModelReport {
    std::vector<ModelCheck> checks;
    bool passed() const;
};

/// Levy integrability, the exponential moment on |x| > 1, and the first moment of the
/// share measure. For share-tagged models the moments are written in share terms.
ModelReport validate_model(const LevyModel& model);

/// int_{|x|>1} e^{rate x} |x|^extra_power xi(x) dx, or +inf if it diverges.
double weighted_outer_moment(const JumpDensity& jumps, double rate, double extra_power,
                             const Tolerance& tol = {});

/// Throws MomentFailure unless int_{|x|>1} e^{theta x} xi(x) dx is finite.
void require_exp_moment(const JumpDensity& jumps, double theta, const char* where);

}  // namespace levyatm
