#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "levyatm/levy_model.hpp"
#include "levyatm/regvar.hpp"
#include "levyatm/stable.hpp"

namespace levyatm {

/// N(sigma sqrt(t)) = 2 Phi(sigma sqrt(t) / 2) - 1, the normalized ATM Black-Scholes call.
double bs_atm_price(double sigma, double t);
/// Exact inverse of bs_atm_price in sigma.
double implied_vol(double price, double t);

/// P*(X_t >= x) for a share-tagged model by Gil-Pelaez inversion of exp(t psi*).
double share_tail_prob(const LevyModel& share_model, double t, double x);

/// c(t, 0) = int_0^40 e^{-x} P*(X_t >= x) dx as a double integral, the inner Gil-Pelaez
/// inversions sharing one table of exp(t psi*). The table grows like t^{-1/alpha}.
double carr_madan_price(const LevyModel& share_model, double t);

/// Normalized ATM call price of a martingale model. The same integral as carr_madan_price
/// after the x-integration is done in closed form:
///   c = (1/pi) int_0^inf (1 - Re exp(t psi*(u + i/2))) / (u^2 + 1/4) du.
class AtmPricer {
public:
    explicit AtmPricer(const LevyModel& model);
    double operator()(double t) const;
    const LevyModel& share_model() const { return share_; }

private:
    LevyModel share_;
};

double atm_call_price(const LevyModel& model, double t);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Mean of (e^{X_t} - 1)_+ over n simulated increments.
McEstimate atm_call_mc(const LevyModel& model, double t, std::size_t n, std::uint64_t seed);

enum class ModelClass { pure_jump, with_brownian };
const char* to_string(ModelClass cls);

struct AssumptionStatus {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct AsymptoticInputs {
    ModelClass model_class = ModelClass::pure_jump;
    double sigma = 0.0;
    std::optional<ScalingFunction> scaling;
    std::optional<StableLaw> law;
    /// Summary of the hypotheses of the pure-jump expansion; any failure throws
    /// AssumptionViolation unless `force` is set.
    std::vector<AssumptionStatus> assumptions;
    bool force = false;
};

/// Pure jump: E*[Z+] B_t. With a Brownian part: sigma sqrt(t / (2 pi)).
std::vector<double> predict_first_order(const AsymptoticInputs& in, const std::vector<double>& t_grid);
/// Pure jump: sqrt(2 pi) (B_t / sqrt(t)) E*[Z+]. With a Brownian part: sigma.
std::vector<double> predict_implied_vol(const AsymptoticInputs& in, const std::vector<double>& t_grid);

struct PriceCurve {
    std::vector<double> maturities;
    std::vector<double> exact_price;
    std::vector<std::optional<McEstimate>> mc;
    std::vector<double> prediction_first_order;
    std::vector<double> B_t;
    std::vector<double> ratio;  ///< exact / B_t
    std::vector<double> implied_vol;
    std::vector<double> ivol_prediction;
};

/// n log-uniform maturities from lo to hi with `per_decade` points per decade.
std::vector<double> maturity_grid(double lo, double hi, int per_decade);

/// Evaluates fn(i) for i in [0, n) on worker threads and returns results in index order.
std::vector<double> parallel_map(std::size_t n, const std::function<double(std::size_t)>& fn);

struct CurveOptions {
    std::optional<AsymptoticInputs> asymptotics;
    std::size_t mc_paths = 0;  ///< 0 disables the Monte Carlo column
    std::uint64_t seed = 1;
};

PriceCurve price_curve(const LevyModel& model, const std::vector<double>& t_grid,
                       const CurveOptions& opts = {});

/// CSV with header t,exact,mc,mc_se,prediction,B_t,ratio,ivol,ivol_prediction, 17 significant
/// digits, preceded by a "# config_hash" comment line when a hash is given.
void write_csv(std::ostream& os, const PriceCurve& curve, const std::string& config_hash = "");

}  // namespace levyatm
