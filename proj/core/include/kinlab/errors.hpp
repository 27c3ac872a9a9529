#pragma once

#include <stdexcept>
#include <string>

namespace kinlab {

/// Input outside the mathematical domain of an evaluator (e.g. q = 0 for a
/// structure factor, hbar = 0 for a quantum-only quantity).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Adaptive quadrature did not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved, double requested)
        : std::runtime_error(what + " (achieved relative error " + std::to_string(achieved) +
                             ", requested " + std::to_string(requested) + ")"),
          achieved_(achieved), requested_(requested) {}

    double achieved() const noexcept { return achieved_; }
    double requested() const noexcept { return requested_; }

private:
    double achieved_;
    double requested_;
};

/// An explicit solver was asked to take a step larger than its stability bound.
class StabilityError : public std::runtime_error {
public:
    StabilityError(const std::string& what, double suggested_dt)
        : std::runtime_error(what + " (largest stable dt " + std::to_string(suggested_dt) + ")"),
          suggested_dt_(suggested_dt) {}

    double suggested_dt() const noexcept { return suggested_dt_; }

private:
    double suggested_dt_;
};

/// A positivity or physicality certificate failed during an evolution.
class PositivityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rejection envelope was smaller than the target density it must bound.
class EnvelopeViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace kinlab
