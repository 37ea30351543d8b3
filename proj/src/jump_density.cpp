#include "levyatm/jump_density.hpp"

#include <algorithm>
#include <string>

#include "levyatm/errors.hpp"

namespace levyatm {

namespace {

void add_segment(std::vector<Segment>& out, const PieceSpec& p, int side, double a, double b) {
    if (!(a < b)) return;
    Segment s;
    s.side = side;
    s.a = a;
    s.b = b;
    s.spec = p;
    s.log_sign = (b <= 1.0) ? -1 : 1;
    out.push_back(s);
}

// Split the |x| range [a, b] at 1.
void add_side(std::vector<Segment>& out, const PieceSpec& p, int side, double a, double b) {
    if (a < 1.0 && b > 1.0) {
        add_segment(out, p, side, a, 1.0);
        add_segment(out, p, side, 1.0, b);
    } else {
        add_segment(out, p, side, a, b);
    }
}

}  // namespace

JumpDensity::JumpDensity(std::vector<PieceSpec> pieces, std::optional<AnalyticTail> analytic_tail,
                         std::optional<double> index_hint)
    : pieces_(std::move(pieces)),
      analytic_tail_(std::move(analytic_tail)),
      index_hint_(index_hint) {
    for (const auto& p : pieces_) {
        if (!(p.lo < p.hi)) throw InputError("density piece needs lo < hi");
        if (!(p.coef >= 0.0) || !std::isfinite(p.coef)) throw InputError("density coef must be >= 0");
        if (std::abs(p.osc_amp) > 1.0) throw InputError("|osc_amp| must be <= 1 for a nonnegative density");
        if (p.log_power < 0) throw InputError("log_power must be a nonnegative integer");
        if (!std::isfinite(p.power) || !std::isfinite(p.exp_rate) || !std::isfinite(p.osc_freq))
            throw InputError("density parameters must be finite");
        if (p.coef == 0.0) continue;
        if (p.hi > 0.0) add_side(segments_, p, +1, std::max(p.lo, 0.0), p.hi);
        if (p.lo < 0.0) add_side(segments_, p, -1, std::max(-p.hi, 0.0), -p.lo);
    }
    if (analytic_tail_) check_analytic_tail();
}

double JumpDensity::operator()(double x) const {
    if (x == 0.0) return 0.0;
    const int side = x > 0.0 ? 1 : -1;
    const double y = std::abs(x);
    double v = 0.0;
    for (const auto& s : segments_) {
        if (s.side == side && y > s.a && y < s.b) v += s(y);
    }
    return v;
}

double JumpDensity::support_lo() const {
    double lo = 0.0;
    for (const auto& s : segments_)
        if (s.side < 0) lo = std::min(lo, -s.b);
    return lo;
}

double JumpDensity::support_hi() const {
    double hi = 0.0;
    for (const auto& s : segments_)
        if (s.side > 0) hi = std::max(hi, s.b);
    return hi;
}

JumpDensity JumpDensity::tilted(double theta) const {
    auto pieces = pieces_;
    for (auto& p : pieces) p.exp_rate += theta;
    return JumpDensity(std::move(pieces), std::nullopt, index_hint_);
}

void JumpDensity::check_analytic_tail() const {
    // 20 log-spaced probes on [1e-4, 1e2], skipping points where the tail vanishes.
    for (int k = 0; k < 20; ++k) {
        const double x = std::pow(10.0, -4.0 + 6.0 * k / 19.0);
        const double expected = (*analytic_tail_)(x);
        if (expected <= 0.0) continue;
        const double numeric = integrate([](double) { return 1.0; }, x, quad::kInf).value;
        if (std::abs(numeric - expected) > 1e-8 * expected) {
            throw InputError("analytic tail disagrees with quadrature at x=" + std::to_string(x) +
                             ": " + std::to_string(expected) + " vs " + std::to_string(numeric));
        }
    }
}

}  // namespace levyatm
