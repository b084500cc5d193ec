#pragma once

// Internal: FFT helpers and the fine lookup table behind tabulated couplings.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace oscsync::detail {

/// Unnormalized forward real DFT: X_k = sum_j x_j e^{-2 pi i jk/M}, k = 0..M/2.
std::vector<std::complex<double>> rfft(std::span<const double> x);

/// Unnormalized inverse of a Hermitian half spectrum of length L/2+1:
/// y_j = sum_{k=0}^{L-1} Y_k e^{2 pi i jk/L}.
std::vector<double> irfft(std::span<const std::complex<double>> half, std::size_t length);

/// Trigonometric interpolant of M samples, pre-evaluated on a fine grid of L
/// points (value, first and second derivative, primitive) so that lookups are
/// O(1) cubic Hermite interpolation between fine nodes.
struct FourierTable {
  std::size_t m = 0;
  std::vector<std::complex<double>> coeffs;  // c_0..c_{kmax}
  std::vector<double> samples;                // values on the M-point grid

  std::size_t fine = 0;
  double fine_step = 0.0;
  std::vector<double> value;
  std::vector<double> d1;
  std::vector<double> d2;
  std::vector<double> d3;
  std::vector<double> prim;  // periodic part of the primitive, zero at 0
  double mean = 0.0;         // c_0; the primitive gains mean * y
  bool odd = false;

  static FourierTable from_samples(std::vector<double> samples);
  static FourierTable from_coeffs(std::size_t m, std::vector<std::complex<double>> coeffs);

  double eval(double theta) const;
  double deriv(double theta) const;
  double second_deriv(double theta) const;
  double primitive(double y) const;
  double eval_series(double theta) const;

 private:
  void build_fine();
};

}  // namespace oscsync::detail
