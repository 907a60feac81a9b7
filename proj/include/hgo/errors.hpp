#pragma once

#include <stdexcept>
#include <string>

namespace hgo {

/// Raised when an integral, norm or constant is detected to diverge.
/// The message names the failing endpoint or the truncation sweep that
/// flagged the growth.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when the adaptive integrator exhausts its subdivision budget
/// before reaching the requested tolerance. Carries the best estimate so
/// callers can decide whether it is still usable.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double best_value, double error_estimate)
        : std::runtime_error(what), best_value(best_value), error_estimate(error_estimate) {}

    double best_value;
    double error_estimate;
};

}  // namespace hgo
