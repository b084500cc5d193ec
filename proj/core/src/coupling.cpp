#include "oscsync/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fourier.hpp"

namespace oscsync {

namespace {

// Closed forms of the F_b member on [0, pi]; the rest follows from oddness.
double fb_value_half(double b, double a, double t) {
  if (t <= b) return a * std::sin(kPi * t / (2.0 * b));
  return a * std::cos(kPi * (t - b) / (2.0 * (kPi - b)));
}

double fb_deriv_half(double b, double a, double t) {
  if (t <= b) return a * (kPi / (2.0 * b)) * std::cos(kPi * t / (2.0 * b));
  return -a * (kPi / (2.0 * (kPi - b))) * std::sin(kPi * (t - b) / (2.0 * (kPi - b)));
}

double fb_second_half(double b, double a, double t) {
  if (t <= b) {
    const double w = kPi / (2.0 * b);
    return -a * w * w * std::sin(w * t);
  }
  const double w = kPi / (2.0 * (kPi - b));
  return -a * w * w * std::cos(w * (t - b));
}

double fb_primitive_half(double b, double a, double t) {
  if (t <= b) return a * (2.0 * b / kPi) * (1.0 - std::cos(kPi * t / (2.0 * b)));
  return a * (2.0 * b / kPi) + a * (2.0 * (kPi - b) / kPi) * std::sin(kPi * (t - b) / (2.0 * (kPi - b)));
}

}  // namespace

CouplingFunction CouplingFunction::sine(double k) { return CouplingFunction(Sine{k}); }

CouplingFunction CouplingFunction::fb(double b, double amplitude) {
  if (!(b > 0.0 && b < kPi)) {
    throw Error(ErrorCode::BadShape, "b = " + std::to_string(b) + " outside (0,pi)");
  }
  return CouplingFunction(Fb{b, amplitude});
}

CouplingFunction CouplingFunction::tabulated(std::vector<double> samples) {
  auto table = std::make_shared<const detail::FourierTable>(detail::FourierTable::from_samples(std::move(samples)));
  return CouplingFunction(Tabulated{std::move(table)});
}

CouplingFunction CouplingFunction::from_spectrum(std::size_t m, std::vector<std::complex<double>> coeffs) {
  auto table = std::make_shared<const detail::FourierTable>(detail::FourierTable::from_coeffs(m, std::move(coeffs)));
  return CouplingFunction(Tabulated{std::move(table)});
}

CouplingFunction CouplingFunction::harmonics(std::span<const double> sin_coeffs, std::span<const double> cos_coeffs,
                                             std::size_t m) {
  const std::size_t top = std::max(sin_coeffs.size(), cos_coeffs.size());
  if (2 * top >= m) throw Error(ErrorCode::BadShape, "grid too small for the requested harmonics");
  std::vector<double> samples(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    double acc = 0.0;
    for (std::size_t k = 0; k < sin_coeffs.size(); ++k) acc += sin_coeffs[k] * std::sin(static_cast<double>(k + 1) * theta);
    for (std::size_t k = 0; k < cos_coeffs.size(); ++k) acc += cos_coeffs[k] * std::cos(static_cast<double>(k + 1) * theta);
    samples[j] = acc;
  }
  return tabulated(std::move(samples));
}

const detail::FourierTable& CouplingFunction::table() const {
  const auto* t = std::get_if<Tabulated>(&rep_);
  if (t == nullptr) throw Error(ErrorCode::PreconditionFailed, "coupling is not tabulated");
  return *t->table;
}

double CouplingFunction::eval(double theta) const {
  return std::visit(
      [theta](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Sine>) {
          return r.k * std::sin(theta);
        } else if constexpr (std::is_same_v<T, Fb>) {
          const double t = wrap_phase(theta);
          return t <= kPi ? fb_value_half(r.b, r.amplitude, t) : -fb_value_half(r.b, r.amplitude, kTwoPi - t);
        } else {
          return r.table->eval(theta);
        }
      },
      rep_);
}

double CouplingFunction::deriv(double theta) const {
  return std::visit(
      [theta](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Sine>) {
          return r.k * std::cos(theta);
        } else if constexpr (std::is_same_v<T, Fb>) {
          const double t = wrap_phase(theta);
          return t <= kPi ? fb_deriv_half(r.b, r.amplitude, t) : fb_deriv_half(r.b, r.amplitude, kTwoPi - t);
        } else {
          return r.table->deriv(theta);
        }
      },
      rep_);
}

double CouplingFunction::second_deriv(double theta) const {
  return std::visit(
      [theta](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Sine>) {
          return -r.k * std::sin(theta);
        } else if constexpr (std::is_same_v<T, Fb>) {
          const double t = wrap_phase(theta);
          return t <= kPi ? fb_second_half(r.b, r.amplitude, t) : -fb_second_half(r.b, r.amplitude, kTwoPi - t);
        } else {
          return r.table->second_deriv(theta);
        }
      },
      rep_);
}

double CouplingFunction::primitive(double y) const {
  return std::visit(
      [y](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Sine>) {
          return r.k * (1.0 - std::cos(y));
        } else if constexpr (std::is_same_v<T, Fb>) {
          // Odd and periodic, so the primitive is even and periodic.
          const double t = wrap_phase(y);
          return t <= kPi ? fb_primitive_half(r.b, r.amplitude, t) : fb_primitive_half(r.b, r.amplitude, kTwoPi - t);
        } else {
          return r.table->primitive(y);
        }
      },
      rep_);
}

bool CouplingFunction::is_odd() const {
  if (const auto* t = std::get_if<Tabulated>(&rep_)) return t->table->odd;
  return true;
}

CouplingFunction CouplingFunction::scaled(double s) const {
  return std::visit(
      [s](const auto& r) -> CouplingFunction {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Sine>) {
          return CouplingFunction(Sine{s * r.k});
        } else if constexpr (std::is_same_v<T, Fb>) {
          return CouplingFunction(Fb{r.b, s * r.amplitude});
        } else {
          std::vector<std::complex<double>> c(r.table->coeffs);
          for (auto& x : c) x *= s;
          return from_spectrum(r.table->m, std::move(c));
        }
      },
      rep_);
}

CouplingFunction CouplingFunction::reflected() const {
  return std::visit(
      [](const auto& r) -> CouplingFunction {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Sine>) {
          return CouplingFunction(Sine{-r.k});
        } else if constexpr (std::is_same_v<T, Fb>) {
          return CouplingFunction(Fb{r.b, -r.amplitude});
        } else {
          // f(-theta) has conjugated coefficients; exact on the grid.
          std::vector<std::complex<double>> c(r.table->coeffs);
          for (auto& x : c) x = std::conj(x);
          return from_spectrum(r.table->m, std::move(c));
        }
      },
      rep_);
}

bool CouplingFunction::same_representation(const CouplingFunction& other) const {
  if (rep_.index() != other.rep_.index()) return false;
  if (const auto* a = as_sine()) return a->k == other.as_sine()->k;
  if (const auto* a = as_fb()) return a->b == other.as_fb()->b && a->amplitude == other.as_fb()->amplitude;
  return std::get<Tabulated>(rep_).table == std::get<Tabulated>(other.rep_).table;
}

std::vector<double> CouplingFunction::sample(std::size_t m) const {
  if (const auto* t = std::get_if<Tabulated>(&rep_); t != nullptr && t->table->m == m) return t->table->samples;
  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = eval(kTwoPi * static_cast<double>(j) / static_cast<double>(m));
  return out;
}

std::size_t CouplingFunction::grid_size() const {
  if (const auto* t = std::get_if<Tabulated>(&rep_)) return t->table->m;
  return 0;
}

std::span<const std::complex<double>> CouplingFunction::spectrum() const { return table().coeffs; }

double CouplingFunction::eval_series(double theta) const { return table().eval_series(theta); }

CouplingFunction make_fb(double b, double amplitude) {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw Error(ErrorCode::BadShape, "F_b amplitude must be positive");
  }
  return CouplingFunction::fb(b, amplitude);
}

CouplingFunction f_from_kappa(const PulseResponse& k) {
  return k.kappa.reflected().scaled(k.omega / kTwoPi);
}

PulseResponse kappa_from_f(const CouplingFunction& f, double omega) {
  if (!(omega > 0.0)) throw Error(ErrorCode::BadShape, "natural frequency must be positive");
  return PulseResponse{f.reflected().scaled(kTwoPi / omega), omega};
}

CouplingFunction linear_combination(std::span<const double> weights, std::span<const CouplingFunction> fs,
                                    std::size_t m) {
  if (weights.size() != fs.size()) throw Error(ErrorCode::BadShape, "weights and functions differ in length");
  std::vector<double> acc(m, 0.0);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto s = fs[i].sample(m);
    for (std::size_t j = 0; j < m; ++j) acc[j] += weights[i] * s[j];
  }
  return CouplingFunction::tabulated(std::move(acc));
}

}  // namespace oscsync
