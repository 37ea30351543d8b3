#pragma once

#include "levyatm/levy_model.hpp"

namespace levyatm {

/// xi(x) = |x|^{-alpha-1} e^{-x} |ln|x|| on x >= -1.
JumpDensity toy_density(double alpha);

/// Closed-form one-sided tails of e^x xi(x) for the toy density.
AnalyticTail toy_share_tail(double alpha);

/// Martingale-calibrated toy model, optionally with a Brownian part.
LevyModel toy_model(double alpha, double sigma = 0.0, Tolerance tol = {});

/// Share-measure toy model with its closed-form tails attached.
LevyModel toy_share_model(double alpha, double sigma = 0.0, Tolerance tol = {});

LevyModel black_scholes_model(double sigma, Tolerance tol = {});

/// xi(x) = |x|^{-alpha-1} on 0 < |x| <= truncation. A finite truncation gives a
/// martingale-calibrated model; an infinite one has no exponential moment and is built
/// with b = 0 for tail analysis only.
LevyModel symmetric_stable_model(double alpha, double truncation = 1.0, double sigma = 0.0,
                                 Tolerance tol = {});

/// e^{-x} |x|^{-alpha-1} (2 + sin(ln(1/|x|))) on x >= -1. Regularly varying in the
/// fitted sense, but x^2 xi*_S is not monotone near 0.
LevyModel oscillatory_model(double alpha = 1.5, Tolerance tol = {});

/// Same model with closed-form tails attached (checked against quadrature).
LevyModel with_analytic_tail(const LevyModel& model, AnalyticTail tail);

}  // namespace levyatm
