#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "oscsync/common.hpp"

namespace oscsync {

namespace detail {
struct FourierTable;
}

/// A 2pi-periodic scalar coupling function with derivative and primitive.
///
/// Three kinds exist:
///  - sine:      K sin(theta)
///  - fb:        a C^1 member of the family F_b (odd, rising on (0,b), falling
///               on (b, 2pi-b)), built from quarter waves of sin and cos
///  - tabulated: uniform samples on theta_k = 2pi k / M, evaluated through
///               their trigonometric interpolant
///
/// Values are cheap to copy; tabulated data is shared and immutable.
class CouplingFunction {
 public:
  enum class Kind { Sine, Fb, Tabulated };

  struct Sine {
    double k;
  };
  struct Fb {
    double b;
    double amplitude;
  };
  struct Tabulated {
    std::shared_ptr<const detail::FourierTable> table;
  };

  CouplingFunction() : rep_(Sine{0.0}) {}

  static CouplingFunction sine(double k);
  /// Throws Error{BadShape} unless 0 < b < pi. The amplitude may be any finite
  /// value; make_fb() additionally requires it to be positive.
  static CouplingFunction fb(double b, double amplitude);
  static CouplingFunction tabulated(std::vector<double> samples);
  /// Tabulated function on an m-point grid given its interpolant coefficients
  /// c_0..c_{m/2} (see spectrum()).
  static CouplingFunction from_spectrum(std::size_t m, std::vector<std::complex<double>> coeffs);
  /// Trigonometric polynomial sum_k s_k sin(k theta) + c_k cos(k theta)
  /// (index 0 of `sin_coeffs` multiplies sin(theta)), tabulated on m points.
  static CouplingFunction harmonics(std::span<const double> sin_coeffs, std::span<const double> cos_coeffs = {},
                                    std::size_t m = 256);

  Kind kind() const noexcept { return static_cast<Kind>(rep_.index()); }

  double eval(double theta) const;
  double deriv(double theta) const;
  double second_deriv(double theta) const;
  /// Integral of f over [0, y].
  double primitive(double y) const;

  double operator()(double theta) const { return eval(theta); }

  /// Odd within 1e-12 (exact for sine and fb).
  bool is_odd() const;

  /// Same kind and parameters; tabulated functions must share their table.
  /// Cheap, used to avoid rebuilding per-edge copies of one function.
  bool same_representation(const CouplingFunction& other) const;

  /// s * f(theta).
  CouplingFunction scaled(double s) const;
  /// theta -> f(-theta).
  CouplingFunction reflected() const;

  /// Values on theta_k = 2pi k / m.
  std::vector<double> sample(std::size_t m) const;

  /// Grid size for tabulated kinds, 0 otherwise.
  std::size_t grid_size() const;
  /// Fourier coefficients c_k of the interpolant,
  /// f(theta) = c_0 + 2 Re sum_{k>=1} c_k e^{i k theta}. Tabulated only.
  std::span<const std::complex<double>> spectrum() const;
  /// Direct summation of the interpolant; O(M) per call. Tabulated only.
  double eval_series(double theta) const;

  const Sine* as_sine() const { return std::get_if<Sine>(&rep_); }
  const Fb* as_fb() const { return std::get_if<Fb>(&rep_); }

 private:
  explicit CouplingFunction(std::variant<Sine, Fb, Tabulated> rep) : rep_(std::move(rep)) {}
  const detail::FourierTable& table() const;

  std::variant<Sine, Fb, Tabulated> rep_;
};

inline double eval(const CouplingFunction& f, double theta) { return f.eval(theta); }
inline double deriv(const CouplingFunction& f, double theta) { return f.deriv(theta); }

/// Member of F_b: A sin(pi theta / 2b) on [0,b], A cos(pi (theta-b) / 2(pi-b))
/// on [b,pi], odd and 2pi-periodic elsewhere. Throws Error{BadShape}.
CouplingFunction make_fb(double b, double amplitude = 1.0);

/// Phase-jump map of a pulse-coupled oscillator with natural frequency omega.
struct PulseResponse {
  CouplingFunction kappa;
  double omega = kTwoPi;
};

/// f(theta) = (omega / 2pi) kappa(-theta).
CouplingFunction f_from_kappa(const PulseResponse& k);
/// kappa(theta) = (2pi / omega) f(-theta).
PulseResponse kappa_from_f(const CouplingFunction& f, double omega);

/// Linear combination sum_i w_i f_i, tabulated on m points.
CouplingFunction linear_combination(std::span<const double> weights, std::span<const CouplingFunction> fs,
                                    std::size_t m);

}  // namespace oscsync
