#pragma once

#include <stdexcept>
#include <string>

namespace levyatm {

/// Root of every error raised by the library. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: bad grid, bad configuration, violated precondition.
class InputError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed to reach its tolerance or detected divergence.
class NumericError : public Error {
public:
    using Error::Error;
};

class StripViolation : public InputError { public: using InputError::InputError; };
class GridError : public InputError { public: using InputError::InputError; };
class MeasureTagError : public InputError { public: using InputError::InputError; };
class PriceOutOfRange : public InputError { public: using InputError::InputError; };
class DegenerateRange : public InputError { public: using InputError::InputError; };
class DomainError : public InputError { public: using InputError::InputError; };
class AlphaDomain : public InputError { public: using InputError::InputError; };
class PreconditionViolation : public InputError { public: using InputError::InputError; };
class ConfigError : public InputError { public: using InputError::InputError; };

class QuadratureFailure : public NumericError { public: using NumericError::NumericError; };
class DivergentIntegral : public NumericError { public: using NumericError::NumericError; };
class MomentFailure : public NumericError { public: using NumericError::NumericError; };
class NonMonotoneTail : public NumericError { public: using NumericError::NumericError; };
class TailDegenerate : public NumericError { public: using NumericError::NumericError; };
class BracketFailure : public NumericError { public: using NumericError::NumericError; };
class TailVanished : public NumericError { public: using NumericError::NumericError; };
class SimulationBudgetExceeded : public NumericError { public: using NumericError::NumericError; };

/// Raised when a first-order prediction is requested for a model that fails
/// one of the hypotheses (A1, A2, A3, finite mu_bar).
class AssumptionViolation : public Error {
public:
    AssumptionViolation(std::string assumption, const std::string& what)
        : Error(what), assumption_(std::move(assumption)) {}
    const std::string& assumption() const noexcept { return assumption_; }

private:
    std::string assumption_;
};

}  // namespace levyatm
