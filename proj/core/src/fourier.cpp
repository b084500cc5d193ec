#include "fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "oscsync/common.hpp"

namespace oscsync::detail {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

std::size_t fine_size(std::size_t m) {
  std::size_t l = 65536;
  while (l < 16 * m) l *= 2;
  return l;
}

double hermite(double p0, double p1, double m0, double m1, double t) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * p1 + (t3 - t2) * m1;
}

}  // namespace

std::vector<std::complex<double>> rfft(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard lock(plan_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<double> irfft(std::span<const std::complex<double>> half, std::size_t length) {
  std::vector<std::complex<double>> in(length / 2 + 1, {0.0, 0.0});
  std::copy_n(half.begin(), std::min(half.size(), in.size()), in.begin());
  std::vector<double> out(length);
  fftw_plan plan;
  {
    std::lock_guard lock(plan_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(length), reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

FourierTable FourierTable::from_samples(std::vector<double> samples) {
  const std::size_t m = samples.size();
  if (m < 4) throw Error(ErrorCode::BadShape, "tabulated coupling needs at least 4 samples");
  for (double v : samples)
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "tabulated sample is not finite");
  auto spec = rfft(samples);
  const std::size_t kmax = m / 2;
  std::vector<std::complex<double>> c(kmax + 1);
  const double inv = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k <= kmax; ++k) c[k] = spec[k] * inv;
  if (m % 2 == 0) c[kmax] = std::complex<double>(0.5 * c[kmax].real(), 0.0);
  FourierTable t;
  t.m = m;
  t.coeffs = std::move(c);
  t.samples = std::move(samples);
  t.build_fine();
  return t;
}

FourierTable FourierTable::from_coeffs(std::size_t m, std::vector<std::complex<double>> coeffs) {
  if (m < 4) throw Error(ErrorCode::BadShape, "tabulated coupling needs at least 4 samples");
  coeffs.resize(m / 2 + 1, {0.0, 0.0});
  coeffs[0] = {coeffs[0].real(), 0.0};
  if (m % 2 == 0) coeffs[m / 2] = {coeffs[m / 2].real(), 0.0};
  FourierTable t;
  t.m = m;
  t.coeffs = std::move(coeffs);
  // Samples on the coarse grid come from the same interpolant.
  std::vector<std::complex<double>> half(t.coeffs);
  t.samples = irfft(half, m);
  if (m % 2 == 0) {
    // irfft treats index m/2 as the self-conjugate Nyquist bin, so it
    // contributes once; the interpolant counts it twice (c e^{} + conj).
    for (std::size_t j = 0; j < m; ++j) t.samples[j] += t.coeffs[m / 2].real() * ((j % 2 == 0) ? 1.0 : -1.0);
  }
  t.build_fine();
  return t;
}

void FourierTable::build_fine() {
  fine = fine_size(m);
  fine_step = kTwoPi / static_cast<double>(fine);
  mean = coeffs[0].real();
  const std::size_t kmax = coeffs.size() - 1;
  std::vector<std::complex<double>> v(kmax + 1), a(kmax + 1), b(kmax + 1), c3(kmax + 1), p(kmax + 1);
  double scale = 0.0;
  double even_part = std::abs(coeffs[0].real());
  for (std::size_t k = 0; k <= kmax; ++k) {
    const double kd = static_cast<double>(k);
    const std::complex<double> ck = coeffs[k];
    scale = std::max(scale, std::abs(ck));
    if (k > 0) even_part = std::max(even_part, std::abs(ck.real()));
    v[k] = ck;
    a[k] = std::complex<double>(0.0, kd) * ck;
    b[k] = -kd * kd * ck;
    c3[k] = std::complex<double>(0.0, -kd * kd * kd) * ck;
    p[k] = k == 0 ? std::complex<double>(0.0, 0.0) : ck / std::complex<double>(0.0, kd);
  }
  odd = even_part <= 1e-12 * std::max(scale, 1e-300);
  value = irfft(v, fine);
  d1 = irfft(a, fine);
  d2 = irfft(b, fine);
  d3 = irfft(c3, fine);
  prim = irfft(p, fine);
  const double p0 = prim[0];
  for (double& x : prim) x -= p0;
}

double FourierTable::eval(double theta) const {
  const double u = wrap_phase(theta) / fine_step;
  auto i = static_cast<std::size_t>(u);
  if (i >= fine) i = fine - 1;
  const double t = u - static_cast<double>(i);
  const std::size_t j = (i + 1) % fine;
  return hermite(value[i], value[j], d1[i] * fine_step, d1[j] * fine_step, t);
}

double FourierTable::deriv(double theta) const {
  const double u = wrap_phase(theta) / fine_step;
  auto i = static_cast<std::size_t>(u);
  if (i >= fine) i = fine - 1;
  const double t = u - static_cast<double>(i);
  const std::size_t j = (i + 1) % fine;
  return hermite(d1[i], d1[j], d2[i] * fine_step, d2[j] * fine_step, t);
}

double FourierTable::second_deriv(double theta) const {
  const double u = wrap_phase(theta) / fine_step;
  auto i = static_cast<std::size_t>(u);
  if (i >= fine) i = fine - 1;
  const double t = u - static_cast<double>(i);
  const std::size_t j = (i + 1) % fine;
  return hermite(d2[i], d2[j], d3[i] * fine_step, d3[j] * fine_step, t);
}

double FourierTable::primitive(double y) const {
  const double u = wrap_phase(y) / fine_step;
  auto i = static_cast<std::size_t>(u);
  if (i >= fine) i = fine - 1;
  const double t = u - static_cast<double>(i);
  const std::size_t j = (i + 1) % fine;
  return mean * y + hermite(prim[i], prim[j], (value[i] - mean) * fine_step, (value[j] - mean) * fine_step, t);
}

double FourierTable::eval_series(double theta) const {
  double acc = coeffs[0].real();
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    const double kt = static_cast<double>(k) * theta;
    acc += 2.0 * (coeffs[k].real() * std::cos(kt) - coeffs[k].imag() * std::sin(kt));
  }
  return acc;
}

}  // namespace oscsync::detail
