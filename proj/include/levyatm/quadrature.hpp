#pragma once

// Panel-based adaptive quadrature used for every integral against a Levy density.
//
// Integrands with an integrable singularity at 0 are summed over dyadic panels
// [2^{-k-1} h, 2^{-k} h] until a panel contributes less than 1e-14 of the running
// total. Intervals reaching +inf are summed over geometrically growing panels.
// A width cap keeps each panel within a fraction of an oscillation period.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "levyatm/errors.hpp"

namespace levyatm {

/// Acceptance thresholds for the accumulated quadrature error estimate.
struct Tolerance {
    double abs = 1e-10;
    double rel = 1e-8;
};

namespace quad {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

template <class R>
double magnitude(const R& v) {
    return std::abs(v);
}

template <class R>
struct Accumulated {
    R value{};
    double error = 0.0;
};

/// Adaptive Gauss-Kronrod 21 on [a, b]. Boost's recursive driver reports the error of
/// each subinterval on the reference interval [-1, 1], so bisection is done here instead.
/// A panel is accepted once its error is below 1e-13 of its L1 norm or below `floor`.
template <class F>
auto panel(const F& f, double a, double b, double& err, double floor = 0.0, int depth = 12)
    -> decltype(f(a)) {
    double l1 = 0.0;
    auto v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 0, 0.0, &err, &l1);
    const double half = 0.5 * (b - a);
    err *= half;
    if (depth > 0 && err > 1e-13 * l1 && err > floor && err > 1e-300) {
        const double mid = 0.5 * (a + b);
        double e1 = 0.0, e2 = 0.0;
        v = panel(f, a, mid, e1, 0.5 * floor, depth - 1);
        v += panel(f, mid, b, e2, 0.5 * floor, depth - 1);
        err = e1 + e2;
    }
    return v;
}

template <class R>
void check_tolerance(const Accumulated<R>& acc, const Tolerance& tol, const char* where) {
    const double allowed = std::max(tol.abs, tol.rel * magnitude(acc.value));
    if (!(acc.error <= allowed)) {
        throw QuadratureFailure(std::string(where) + ": error estimate " +
                                std::to_string(acc.error) + " exceeds tolerance " +
                                std::to_string(allowed));
    }
}

/// Sum over dyadic panels shrinking towards 0 from `top`.
template <class F>
auto dyadic_to_zero(const F& f, double top) {
    using R = decltype(f(top));
    Accumulated<R> acc;
    double hi = top;
    double prev = kInf;
    int quiet = 0;
    int growing = 0;
    for (int k = 0; k < 1100; ++k) {
        const double lo = 0.5 * hi;
        double e = 0.0;
        const R p = panel(f, lo, hi, e, 1e-16 * magnitude(acc.value));
        const double mp = magnitude(p);
        if (!std::isfinite(mp)) throw DivergentIntegral("integrand not finite near 0");
        acc.value += p;
        acc.error += e;
        const double total = magnitude(acc.value);
        if (mp <= 1e-14 * total) {
            if (++quiet >= 2) return acc;
        } else {
            quiet = 0;
        }
        if (total == 0.0 && k >= 60) return acc;
        growing = (mp > prev && mp > 0.0) ? growing + 1 : 0;
        if (growing >= 40) throw DivergentIntegral("integral diverges at 0");
        prev = mp;
        hi = lo;
        if (hi < 1e-290) break;
    }
    throw DivergentIntegral("integral near 0 did not converge");
}

/// Geometric panels on a finite interval [a, b] with a > 0.
template <class F>
auto geometric(const F& f, double a, double b, double width_cap = kInf) {
    using R = decltype(f(a));
    Accumulated<R> acc;
    double x = a;
    long count = 0;
    while (x < b) {
        double next = std::min({b, 2.0 * x, x + width_cap});
        if (next <= x) next = b;
        double e = 0.0;
        acc.value += panel(f, x, next, e, 1e-16 * magnitude(acc.value));
        acc.error += e;
        x = next;
        if (++count > 2'000'000) throw QuadratureFailure("too many panels on finite interval");
    }
    return acc;
}

/// Geometric panels from a > 0 to infinity with convergence and divergence detection.
template <class F>
auto geometric_to_infinity(const F& f, double a, double width_cap = kInf) {
    using R = decltype(f(a));
    Accumulated<R> acc;
    double x = a;
    double prev = kInf;
    int quiet = 0;
    int growing = 0;
    for (long count = 0; count < 400'000; ++count) {
        double next = std::min(2.0 * x, x + width_cap);
        if (next <= x) next = x + 1.0;
        double e = 0.0;
        const R p = panel(f, x, next, e, 1e-16 * magnitude(acc.value));
        const double mp = magnitude(p);
        if (!std::isfinite(mp)) throw DivergentIntegral("integrand not finite at infinity");
        acc.value += p;
        acc.error += e;
        const double total = magnitude(acc.value);
        if (mp <= 1e-15 * total || (total == 0.0 && x > 1e6)) {
            if (++quiet >= 3) return acc;
        } else {
            quiet = 0;
        }
        if (width_cap == kInf) {
            growing = (mp >= prev && mp > 0.0) ? growing + 1 : 0;
            if (growing >= 30) throw DivergentIntegral("integral diverges at infinity");
        }
        prev = mp;
        x = next;
        if (x > 1e280) break;
    }
    throw DivergentIntegral("integral to infinity did not converge");
}

/// Integral over [a, b] with 0 <= a < b <= inf. Handles a == 0 by dyadic panels below
/// `split` and b == inf by geometric panels beyond the finite part.
template <class F>
auto integrate(const F& f, double a, double b, double width_cap = kInf, double split = 1.0) {
    using R = decltype(f(1.0));
    Accumulated<R> acc;
    if (!(a < b)) return acc;
    double lo = a;
    if (a == 0.0) {
        double top = std::min({b, split, width_cap});
        if (!(top > 0.0) || !std::isfinite(top)) top = std::min(b, 1.0);
        auto near = dyadic_to_zero(f, top);
        acc.value += near.value;
        acc.error += near.error;
        lo = top;
    }
    if (lo < b) {
        auto rest = std::isfinite(b) ? geometric(f, lo, b, width_cap)
                                     : geometric_to_infinity(f, lo, width_cap);
        acc.value += rest.value;
        acc.error += rest.error;
    }
    return acc;
}

}  // namespace quad
}  // namespace levyatm
