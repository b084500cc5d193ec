#pragma once

#include <complex>
#include <cstddef>
#include <random>
#include <variant>
#include <vector>

#include "oscsync/coupling.hpp"

namespace oscsync {

/// Probability law of the phase lag psi = omega * eta >= 0, in radians.
class DelayDistribution {
 public:
  struct Point {
    double psi0;
  };
  /// Uniform on [mu - w, mu + w].
  struct Uniform {
    double mu;
    double w;
  };
  /// Normal(mu, sigma^2) conditioned on psi >= 0.
  struct Gaussian {
    double mu;
    double sigma;
  };
  struct Empirical {
    std::vector<double> samples;
  };

  enum class Kind { Point, Uniform, Gaussian, Empirical };

  /// Each factory throws Error{BadShape} on out-of-range parameters
  /// (negative lags, non-positive widths).
  static DelayDistribution point(double psi0);
  static DelayDistribution uniform(double mu, double w);
  static DelayDistribution gaussian(double mu, double sigma);
  static DelayDistribution empirical(std::vector<double> samples);

  Kind kind() const noexcept { return static_cast<Kind>(rep_.index()); }
  const auto& rep() const noexcept { return rep_; }

  /// Density on [0, inf). Zero for atomic kinds (point, empirical).
  double density(double psi) const;
  /// Upper end of the support used for quadrature.
  double support_end() const;
  bool has_density() const { return kind() == Kind::Uniform || kind() == Kind::Gaussian; }

  /// E[e^{i k psi}]. Closed form where available; adaptive quadrature for a
  /// gaussian whose truncation at zero matters (sigma > mu / 4).
  std::complex<double> characteristic(int k) const;

  double sample(std::mt19937_64& rng) const;

 private:
  using Rep = std::variant<Point, Uniform, Gaussian, Empirical>;
  explicit DelayDistribution(Rep rep) : rep_(std::move(rep)) {}
  double gaussian_mass() const;

  Rep rep_;
};

struct DelayOrderParameter {
  double c;   // modulus, >= 0
  double xi;  // argument in [0, 2pi)
};

/// C e^{i xi} = integral of e^{i psi} g(psi).
DelayOrderParameter order_parameter_of_delays(const DelayDistribution& g);

/// The delay law wrapped onto the M-point grid: weights w_j at theta_j whose
/// discrete Fourier transform is E[e^{-i k psi}] for |k| <= M/2 (band-limited).
/// The weights sum to 1.
std::vector<double> wrapped_weights(const DelayDistribution& g, std::size_t m);

/// H(theta) = integral f(theta - psi) g(psi) dpsi as a tabulated coupling on M
/// points (circular convolution of the samples of f with the wrapped law).
/// Throws Error{BadShape} unless M is a power of two >= 256.
CouplingFunction convolve_delay(const CouplingFunction& f, const DelayDistribution& g, std::size_t m = 4096);

}  // namespace oscsync
