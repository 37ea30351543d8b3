#pragma once

// Truncated Taylor series arithmetic. A Jet holds c_0..c_N with
// f(y0 + h) = sum c_n h^n + O(h^{N+1}); derivatives are n! c_n.

#include <array>
#include <cmath>
#include <cstddef>

namespace levyatm {

template <std::size_t N>
struct Jet {
    std::array<double, N + 1> c{};

    static Jet constant(double v) {
        Jet j;
        j.c[0] = v;
        return j;
    }
    static Jet variable(double y0) {
        Jet j;
        j.c[0] = y0;
        if constexpr (N >= 1) j.c[1] = 1.0;
        return j;
    }

    double derivative(std::size_t n) const {
        double fact = 1.0;
        for (std::size_t k = 2; k <= n; ++k) fact *= static_cast<double>(k);
        return c[n] * fact;
    }

    Jet& operator+=(const Jet& o) {
        for (std::size_t n = 0; n <= N; ++n) c[n] += o.c[n];
        return *this;
    }
    Jet& operator*=(double s) {
        for (auto& v : c) v *= s;
        return *this;
    }
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        for (std::size_t n = 0; n <= N; ++n)
            for (std::size_t k = 0; k <= n; ++k) r.c[n] += a.c[k] * b.c[n - k];
        return r;
    }
};

template <std::size_t N>
Jet<N> exp(const Jet<N>& u) {
    Jet<N> e;
    e.c[0] = std::exp(u.c[0]);
    for (std::size_t n = 1; n <= N; ++n) {
        double s = 0.0;
        for (std::size_t j = 1; j <= n; ++j) s += static_cast<double>(j) * u.c[j] * e.c[n - j];
        e.c[n] = s / static_cast<double>(n);
    }
    return e;
}

template <std::size_t N>
Jet<N> log(const Jet<N>& u) {
    Jet<N> l;
    l.c[0] = std::log(u.c[0]);
    for (std::size_t n = 1; n <= N; ++n) {
        double s = static_cast<double>(n) * u.c[n];
        for (std::size_t j = 1; j < n; ++j) s -= static_cast<double>(j) * l.c[j] * u.c[n - j];
        l.c[n] = s / (static_cast<double>(n) * u.c[0]);
    }
    return l;
}

/// sin(u); cos(u) is produced alongside by the coupled recurrence.
template <std::size_t N>
Jet<N> sin(const Jet<N>& u) {
    Jet<N> s, co;
    s.c[0] = std::sin(u.c[0]);
    co.c[0] = std::cos(u.c[0]);
    for (std::size_t n = 1; n <= N; ++n) {
        double a = 0.0, b = 0.0;
        for (std::size_t j = 1; j <= n; ++j) {
            a += static_cast<double>(j) * u.c[j] * co.c[n - j];
            b -= static_cast<double>(j) * u.c[j] * s.c[n - j];
        }
        s.c[n] = a / static_cast<double>(n);
        co.c[n] = b / static_cast<double>(n);
    }
    return s;
}

}  // namespace levyatm
