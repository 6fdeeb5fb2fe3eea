// Shared error types and constants.
#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace drivenosc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr std::complex<double> kI{0.0, 1.0};

// Thrown when a computation leaves its validated regime (quadrature
// non-convergence, edge-amplitude blow-up, fit residual too large, ...).
// Configuration and precondition violations throw std::invalid_argument.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kVersion = "0.1.0";

}  // namespace drivenosc
