#pragma once

#include <stdexcept>
#include <string>

namespace cqsedram {

// Input outside the documented validity window (temperature, voltage, ...).
class DomainError : public std::runtime_error {
  public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// API misuse, e.g. read_access on a write-only topology.
class UsageError : public std::runtime_error {
  public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Calibration could not reach the requested anchors; carries the best residual.
class CalibrationError : public std::runtime_error {
  public:
    CalibrationError(const std::string& what, double best_residual)
        : std::runtime_error(what), best_residual_(best_residual) {}
    double best_residual() const { return best_residual_; }

  private:
    double best_residual_;
};

// Integration failure (step underflow, non-finite state).
class NumericError : public std::runtime_error {
  public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Structured-text input violates its schema.
class ParseError : public std::runtime_error {
  public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cqsedram
