#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace oscsync {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Phases on the N-torus. Stored unwrapped during integration stages and
/// wrapped to [0, 2pi) at every public boundary.
using PhaseVector = Eigen::VectorXd;

enum class ErrorCode {
  DuplicateEdge,
  SelfLoop,
  IndexOutOfRange,
  TooLarge,
  EmptySide,
  BadShape,
  NonFinite,
  NotPotentialForm,
  EventOverflow,
  BadSpec,
  EmptySet,
  NotSymmetric,
  PreconditionFailed,
  Disconnected,
  BadN,
  BadConfig,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// NonFinite and EventOverflow are numerical failures; everything else is
  /// a validation failure.
  bool numerical() const noexcept {
    return code_ == ErrorCode::NonFinite || code_ == ErrorCode::EventOverflow;
  }

 private:
  ErrorCode code_;
};

/// Wraps an angle to [0, 2pi).
inline double wrap_phase(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

/// Wraps an angle to [-pi, pi).
inline double wrap_signed(double theta) {
  return wrap_phase(theta + kPi) - kPi;
}

/// Distance between two points of the circle, in [0, pi].
inline double circular_distance(double a, double b) {
  return std::abs(wrap_signed(a - b));
}

PhaseVector wrap_phases(PhaseVector phases);

}  // namespace oscsync
