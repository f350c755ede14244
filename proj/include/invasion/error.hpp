#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace invasion {

/// Parameter outside the admissible domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An integrator gave up. Carries the independent variable and state at the
/// point of failure so callers can report where things went wrong.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double at, std::vector<double> state)
        : std::runtime_error(what), at_(at), state_(std::move(state)) {}

    double at() const noexcept { return at_; }
    const std::vector<double>& state() const noexcept { return state_; }

private:
    double at_;
    std::vector<double> state_;
};

class RankDeficientError : public std::runtime_error {
public:
    RankDeficientError(const std::string& what, std::size_t column)
        : std::runtime_error(what), column_(column) {}

    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

/// f(lo) and f(hi) have the same sign.
class NoBracketError : public std::runtime_error {
public:
    NoBracketError(const std::string& what, double f_lo, double f_hi)
        : std::runtime_error(what), f_lo_(f_lo), f_hi_(f_hi) {}

    double f_lo() const noexcept { return f_lo_; }
    double f_hi() const noexcept { return f_hi_; }

private:
    double f_lo_;
    double f_hi_;
};

/// Generic numerical failure in a higher-level solver (shooting, fits, ...).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace invasion
