#pragma once

#include <stdexcept>
#include <string>

namespace natscale {

enum class ErrorKind {
    parameter_domain,
    saturation,
    not_invertible,
    range,
    range_exhausted,
    insufficient_tail_data,
    not_a_scale_function,
    degenerate_hazard,
    hypothesis_failed,
    input,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Raised when a tail probability is exactly zero. Carries the largest hazard
// value that was still representable to the left of the failing point.
class SaturationError : public Error {
public:
    SaturationError(const std::string& what, double last_hazard)
        : Error(ErrorKind::saturation, what), last_hazard_(last_hazard) {}

    double last_hazard() const noexcept { return last_hazard_; }

private:
    double last_hazard_;
};

// Raised by iterative constructions that leave the representable range.
class RangeExhaustedError : public Error {
public:
    RangeExhaustedError(const std::string& what, long last_valid)
        : Error(ErrorKind::range_exhausted, what), last_valid_(last_valid) {}

    long last_valid() const noexcept { return last_valid_; }

private:
    long last_valid_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

}  // namespace natscale
