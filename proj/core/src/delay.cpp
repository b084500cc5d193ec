#include "oscsync/delay.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fourier.hpp"

namespace oscsync {

namespace {

bool is_pow2(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(kTwoPi));
}

// Truncation at zero is ignored below this ratio; the neglected mass is
// Phi(-4) ~ 3e-5 and its effect on the order parameter stays below 1e-4.
bool gaussian_closed_form(const DelayDistribution::Gaussian& g) { return g.sigma <= g.mu / 4.0; }

}  // namespace

DelayDistribution DelayDistribution::point(double psi0) {
  if (!(psi0 >= 0.0) || !std::isfinite(psi0)) throw Error(ErrorCode::BadShape, "point lag must be >= 0");
  return DelayDistribution(Point{psi0});
}

DelayDistribution DelayDistribution::uniform(double mu, double w) {
  if (!(w > 0.0) || !std::isfinite(w) || !std::isfinite(mu)) {
    throw Error(ErrorCode::BadShape, "uniform half-width must be positive");
  }
  if (mu - w < 0.0) throw Error(ErrorCode::BadShape, "uniform support must lie in [0, inf)");
  return DelayDistribution(Uniform{mu, w});
}

DelayDistribution DelayDistribution::gaussian(double mu, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
    throw Error(ErrorCode::BadShape, "gaussian std must be positive");
  }
  if (mu + 8.0 * sigma <= 0.0) throw Error(ErrorCode::BadShape, "gaussian has no mass on [0, inf)");
  return DelayDistribution(Gaussian{mu, sigma});
}

DelayDistribution DelayDistribution::empirical(std::vector<double> samples) {
  if (samples.empty()) throw Error(ErrorCode::BadShape, "empirical law needs samples");
  for (double s : samples)
    if (!(s >= 0.0) || !std::isfinite(s)) throw Error(ErrorCode::BadShape, "empirical lags must be >= 0");
  return DelayDistribution(Empirical{std::move(samples)});
}

double DelayDistribution::gaussian_mass() const {
  const auto& g = std::get<Gaussian>(rep_);
  return 0.5 * std::erfc(-g.mu / (g.sigma * std::sqrt(2.0)));
}

double DelayDistribution::density(double psi) const {
  if (psi < 0.0) return 0.0;
  if (const auto* u = std::get_if<Uniform>(&rep_)) {
    return (psi >= u->mu - u->w && psi <= u->mu + u->w) ? 1.0 / (2.0 * u->w) : 0.0;
  }
  if (const auto* g = std::get_if<Gaussian>(&rep_)) return normal_pdf(psi, g->mu, g->sigma) / gaussian_mass();
  return 0.0;
}

double DelayDistribution::support_end() const {
  return std::visit(
      [](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Point>) {
          return r.psi0;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return r.mu + r.w;
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          return std::max(r.mu, 0.0) + 12.0 * r.sigma;
        } else {
          return *std::max_element(r.samples.begin(), r.samples.end());
        }
      },
      rep_);
}

std::complex<double> DelayDistribution::characteristic(int k) const {
  const double kd = static_cast<double>(k);
  return std::visit(
      [&](const auto& r) -> std::complex<double> {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Point>) {
          return std::polar(1.0, kd * r.psi0);
        } else if constexpr (std::is_same_v<T, Uniform>) {
          const double x = kd * r.w;
          const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
          return std::polar(1.0, kd * r.mu) * sinc;
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          if (gaussian_closed_form(r)) {
            return std::polar(std::exp(-0.5 * kd * kd * r.sigma * r.sigma), kd * r.mu);
          }
          using boost::math::quadrature::gauss_kronrod;
          const double lo = 0.0;
          const double hi = support_end();
          const double z = gaussian_mass();
          auto re = [&](double psi) { return std::cos(kd * psi) * normal_pdf(psi, r.mu, r.sigma); };
          auto im = [&](double psi) { return std::sin(kd * psi) * normal_pdf(psi, r.mu, r.sigma); };
          const double c = gauss_kronrod<double, 61>::integrate(re, lo, hi, 20, 1e-14);
          const double s = gauss_kronrod<double, 61>::integrate(im, lo, hi, 20, 1e-14);
          return {c / z, s / z};
        } else {
          std::complex<double> acc{0.0, 0.0};
          for (double s : r.samples) acc += std::polar(1.0, kd * s);
          return acc / static_cast<double>(r.samples.size());
        }
      },
      rep_);
}

double DelayDistribution::sample(std::mt19937_64& rng) const {
  return std::visit(
      [&rng](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Point>) {
          return r.psi0;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          std::uniform_real_distribution<double> u(r.mu - r.w, r.mu + r.w);
          return u(rng);
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          std::normal_distribution<double> n(r.mu, r.sigma);
          for (;;) {
            const double x = n(rng);
            if (x >= 0.0) return x;
          }
        } else {
          std::uniform_int_distribution<std::size_t> pick(0, r.samples.size() - 1);
          return r.samples[pick(rng)];
        }
      },
      rep_);
}

DelayOrderParameter order_parameter_of_delays(const DelayDistribution& g) {
  const std::complex<double> z = g.characteristic(1);
  return {std::abs(z), wrap_phase(std::arg(z))};
}

namespace {

// DFT of the wrapped weights, W_k = E[e^{-i k psi}] for k = 0..M/2.
std::vector<std::complex<double>> wrapped_spectrum(const DelayDistribution& g, std::size_t m) {
  const std::size_t kmax = m / 2;
  std::vector<std::complex<double>> w(kmax + 1);
  const auto* gs = std::get_if<DelayDistribution::Gaussian>(&g.rep());
  if (gs == nullptr || gaussian_closed_form(*gs)) {
    for (std::size_t k = 0; k <= kmax; ++k) w[k] = std::conj(g.characteristic(static_cast<int>(k)));
    w[kmax] = {w[kmax].real(), 0.0};
    return w;
  }
  // Truncated gaussian: split the mass of every grid cell linearly onto its
  // two end nodes (hat-function weights), then transform.
  using Gl = boost::math::quadrature::gauss<double, 10>;
  const double step = kTwoPi / static_cast<double>(m);
  const double z = 1.0 / (gs->sigma * std::sqrt(kTwoPi));
  std::vector<double> weights(m, 0.0);
  const double end = g.support_end();
  const auto cells = static_cast<std::size_t>(std::ceil(end / step));
  for (std::size_t l = 0; l < cells; ++l) {
    const double a = static_cast<double>(l) * step;
    const double b = a + step;
    auto dens = [&](double psi) {
      const double u = (psi - gs->mu) / gs->sigma;
      return z * std::exp(-0.5 * u * u);
    };
    const double mass = Gl::integrate(dens, a, b);
    const double upper = Gl::integrate([&](double psi) { return dens(psi) * (psi - a) / step; }, a, b);
    weights[l % m] += mass - upper;
    weights[(l + 1) % m] += upper;
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& x : weights) x /= total;
  return detail::rfft(weights);
}

}  // namespace

std::vector<double> wrapped_weights(const DelayDistribution& g, std::size_t m) {
  if (m < 4 || m % 2 != 0) throw Error(ErrorCode::BadShape, "wrapped grid size must be even and >= 4");
  auto w = detail::irfft(wrapped_spectrum(g, m), m);
  for (double& x : w) x /= static_cast<double>(m);
  return w;
}

CouplingFunction convolve_delay(const CouplingFunction& f, const DelayDistribution& g, std::size_t m) {
  if (!is_pow2(m) || m < 256) {
    throw Error(ErrorCode::BadShape, "convolution grid must be a power of two >= 256, got " + std::to_string(m));
  }
  const auto samples = f.sample(m);
  auto spec = detail::rfft(samples);
  const auto w = wrapped_spectrum(g, m);
  const std::size_t kmax = m / 2;
  std::vector<std::complex<double>> h(kmax + 1);
  const double inv = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k <= kmax; ++k) h[k] = spec[k] * inv * w[k];
  h[kmax] = {0.5 * h[kmax].real(), 0.0};
  return CouplingFunction::from_spectrum(m, std::move(h));
}

}  // namespace oscsync
