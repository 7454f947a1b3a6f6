#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace landau {

/// Raised when a constructor or operation receives a value outside its domain
/// of validity (non-positive thermal speed, lambda <= 0, ...).
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An adaptive rule ran out of subdivisions before meeting its tolerance.
class QuadratureFailure : public std::runtime_error {
public:
    QuadratureFailure(const std::string& what, double achieved_error)
        : std::runtime_error(what + " (achieved error estimate " + format(achieved_error) + ")"),
          achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    static std::string format(double e) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", e);
        return buf;
    }

    double achieved_error_;
};

/// The field has no closed-form spectrum (custom callables).
class UnsupportedSpectrum : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Evaluation outside the set where the quantity is defined, e.g. the
/// limiting conductivity at k = 0.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace landau
