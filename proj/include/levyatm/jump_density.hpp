#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "levyatm/jet.hpp"
#include "levyatm/quadrature.hpp"

namespace levyatm {

/// One term of a piecewise Levy density, written in the signed jump size x:
///
///   xi(x) = coef |x|^power e^{exp_rate x} |ln|x||^log_power (1 + osc_amp sin(osc_freq ln(1/|x|)))
///
/// for lo < x < hi. Terms may overlap; overlapping terms add.
struct PieceSpec {
    double lo = 0.0;
    double hi = 0.0;
    double coef = 1.0;
    double power = 0.0;
    double exp_rate = 0.0;
    int log_power = 0;
    double osc_amp = 0.0;
    double osc_freq = 1.0;
};

/// A PieceSpec restricted to one side of the origin and to one side of |x| = 1, written
/// in y = |x|. The restriction keeps |ln y| and the truncation indicator smooth on it.
struct Segment {
    int side = 1;       ///< +1 for x > 0, -1 for x < 0
    double a = 0.0;     ///< lower end in |x|
    double b = 0.0;     ///< upper end in |x|, may be +inf
    PieceSpec spec;
    int log_sign = 1;   ///< sign of ln y on (a, b)

    bool inner() const { return b <= 1.0; }

    /// xi(side * y) for y in (a, b).
    double operator()(double y) const {
        double v = spec.coef * std::exp(spec.power * std::log(y) + spec.exp_rate * side * y);
        if (spec.log_power != 0) v *= std::pow(log_sign * std::log(y), spec.log_power);
        if (spec.osc_amp != 0.0) v *= 1.0 + spec.osc_amp * std::sin(-spec.osc_freq * std::log(y));
        return v;
    }

    /// Taylor jet of the analytic continuation of operator() around y0.
    template <std::size_t N>
    Jet<N> jet(double y0) const {
        const auto y = Jet<N>::variable(y0);
        const auto ln = levyatm::log(y);
        auto v = levyatm::exp(ln * spec.power + y * (spec.exp_rate * side)) * spec.coef;
        for (int k = 0; k < spec.log_power; ++k) v = v * (ln * static_cast<double>(log_sign));
        if (spec.osc_amp != 0.0) {
            auto osc = levyatm::sin(ln * (-spec.osc_freq)) * spec.osc_amp;
            osc.c[0] += 1.0;
            v = v * osc;
        }
        return v;
    }
};

/// Closed-form one-sided tails gamma_plus(x) = nu((x, inf)), gamma_minus(x) = nu((-inf, -x)).
struct AnalyticTail {
    std::function<double(double)> plus;
    std::function<double(double)> minus;
    double operator()(double x) const { return plus(x) + minus(x); }
};

enum class Side { both, positive, negative };

/// Levy density xi given as a sum of piecewise analytic terms.
class JumpDensity {
public:
    JumpDensity() = default;
    explicit JumpDensity(std::vector<PieceSpec> pieces,
                         std::optional<AnalyticTail> analytic_tail = std::nullopt,
                         std::optional<double> index_hint = std::nullopt);

    double operator()(double x) const;
    bool empty() const { return segments_.empty(); }
    const std::vector<Segment>& segments() const { return segments_; }
    const std::vector<PieceSpec>& pieces() const { return pieces_; }
    double support_lo() const;
    double support_hi() const;

    const std::optional<AnalyticTail>& analytic_tail() const { return analytic_tail_; }
    /// Stable index alpha when the density is built from a preset that fixes it.
    std::optional<double> index_hint() const { return index_hint_; }

    /// e^{theta x} xi(x). Closed-form tails do not survive the tilt and are dropped.
    JumpDensity tilted(double theta) const;

    /// Sum over segments of int g(x) xi(x) dx restricted to lo < |x| <= hi on the given side(s).
    template <class G>
    quad::Accumulated<decltype(std::declval<G>()(1.0))> integrate(const G& g, double lo, double hi,
                                                                  Side side = Side::both) const;

private:
    void check_analytic_tail() const;

    std::vector<PieceSpec> pieces_;
    std::vector<Segment> segments_;
    std::optional<AnalyticTail> analytic_tail_;
    std::optional<double> index_hint_;
};

template <class G>
quad::Accumulated<decltype(std::declval<G>()(1.0))> JumpDensity::integrate(const G& g, double lo,
                                                                           double hi,
                                                                           Side side) const {
    quad::Accumulated<decltype(std::declval<G>()(1.0))> acc;
    for (const auto& s : segments_) {
        if (side == Side::positive && s.side < 0) continue;
        if (side == Side::negative && s.side > 0) continue;
        const double a = std::max(s.a, lo);
        const double b = std::min(s.b, hi);
        if (!(a < b)) continue;
        const int sd = s.side;
        auto part = quad::integrate([&](double y) { return g(sd * y) * s(y); }, a, b);
        acc.value += part.value;
        acc.error += part.error;
    }
    return acc;
}

}  // namespace levyatm
