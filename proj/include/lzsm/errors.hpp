#pragma once

#include <stdexcept>
#include <string>

namespace lzsm {

/// Input outside the domain where an operation is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Gamma-function pole (non-positive integer argument).
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Result magnitude not representable in double precision.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Series or quadrature that failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// ODE integration failure; carries the time at which it happened.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double tau)
        : std::runtime_error(what + " at tau=" + std::to_string(tau)), tau_(tau) {}

    double tau() const noexcept { return tau_; }

private:
    double tau_;
};

}  // namespace lzsm
