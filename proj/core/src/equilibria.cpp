#include "oscsync/equilibria.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oscsync {

namespace {

// Residual vector R_i = eps * sum_j f(phi_j - phi_i - psi) - omega*.
Eigen::VectorXd residual_vector(const PhaseModel& m, const PhaseVector& phi, double omega_star) {
  Eigen::VectorXd r = phase_rhs(m, phi);
  r.array() -= omega_star;
  return r;
}

// Jacobian with respect to (phi_1..phi_{N-1}[, omega*]).
Eigen::MatrixXd chart_jacobian(const PhaseModel& m, const PhaseVector& phi, bool with_omega) {
  const std::size_t n = m.size();
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const auto edges = m.graph.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto i = static_cast<Eigen::Index>(edges[e].tail);
    const auto j = static_cast<Eigen::Index>(edges[e].head);
    const double d = phi[j] - phi[i];
    const double a = m.epsilon * m.coupling[e].deriv(d - m.lags[e]);
    const double b = m.epsilon * m.coupling[e].deriv(-d - m.lags[e]);
    full(i, j) += a;
    full(i, i) -= a;
    full(j, i) += b;
    full(j, j) -= b;
  }
  const auto cols = static_cast<Eigen::Index>(n - 1 + (with_omega ? 1 : 0));
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), cols);
  jac.leftCols(static_cast<Eigen::Index>(n - 1)) = full.rightCols(static_cast<Eigen::Index>(n - 1));
  if (with_omega) jac.col(cols - 1).setConstant(-1.0);
  return jac;
}

}  // namespace

double residual(const PhaseModel& m, const PhaseVector& phi, double omega_star) {
  return residual_vector(m, phi, omega_star).cwiseAbs().maxCoeff();
}

EquilibriumReport find_equilibrium(const PhaseModel& m, const PhaseVector& phi0, const NewtonOptions& opts) {
  if (!(opts.tol > 0.0)) throw Error(ErrorCode::BadShape, "tolerance must be positive");
  m.validate();
  const std::size_t n = m.size();
  if (static_cast<std::size_t>(phi0.size()) != n) throw Error(ErrorCode::BadShape, "phase vector size mismatch");

  const bool with_omega = !m.potential_form();
  PhaseVector phi = canonicalize(phi0);
  double omega = 0.0;
  if (with_omega) omega = phase_rhs(m, phi).mean();

  EquilibriumReport rep;
  Eigen::VectorXd r = residual_vector(m, phi, omega);
  double norm2 = r.squaredNorm();
  std::size_t it = 0;
  auto apply = [&](const Eigen::VectorXd& step, double alpha, PhaseVector& p, double& w) {
    p = phi;
    w = omega;
    p.tail(static_cast<Eigen::Index>(n - 1)) += alpha * step.head(static_cast<Eigen::Index>(n - 1));
    if (with_omega) w += alpha * step[step.size() - 1];
  };

  while (it < opts.max_iterations && r.cwiseAbs().maxCoeff() >= opts.tol && n > 1) {
    ++it;
    const Eigen::MatrixXd jac = chart_jacobian(m, phi, with_omega);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
    const Eigen::VectorXd newton = cod.solve(-r);
    const Eigen::VectorXd grad = jac.transpose() * r;

    bool moved = false;
    for (const Eigen::VectorXd* dir : {&newton, static_cast<const Eigen::VectorXd*>(nullptr)}) {
      Eigen::VectorXd step = dir != nullptr ? *dir : Eigen::VectorXd(-grad);
      if (!step.allFinite() || step.squaredNorm() == 0.0) continue;
      // Directional derivative of |R|^2 along step.
      const double slope = 2.0 * grad.dot(step);
      if (slope >= 0.0) continue;
      double alpha = 1.0;
      if (dir == nullptr) alpha = std::min(1.0, 1.0 / std::sqrt(step.squaredNorm()));
      for (int k = 0; k < 60; ++k, alpha *= 0.5) {
        PhaseVector p;
        double w;
        apply(step, alpha, p, w);
        const Eigen::VectorXd rn = residual_vector(m, p, w);
        const double nn = rn.squaredNorm();
        if (nn <= norm2 + 1e-4 * alpha * slope) {
          phi = p;
          omega = w;
          r = rn;
          norm2 = nn;
          moved = true;
          break;
        }
      }
      if (moved) break;
    }
    if (!moved) break;
  }

  rep.phi_star = canonicalize(phi);
  rep.omega_star = omega;
  rep.residual = residual(m, rep.phi_star, omega);
  rep.converged = rep.residual < opts.tol;
  rep.iterations = it;
  return rep;
}

std::size_t IsotropySpec::total() const {
  return m * std::accumulate(block_sizes.begin(), block_sizes.end(), std::size_t{0});
}

void IsotropySpec::validate() const {
  if (m < 1) throw Error(ErrorCode::BadSpec, "m must be >= 1");
  if (block_sizes.empty()) throw Error(ErrorCode::BadSpec, "at least one constellation required");
  if (shifts.size() != block_sizes.size()) throw Error(ErrorCode::BadSpec, "one shift per constellation required");
  for (std::size_t k : block_sizes)
    if (k == 0) throw Error(ErrorCode::BadSpec, "block sizes must be positive");
  if (shifts[0] != 0.0) throw Error(ErrorCode::BadSpec, "the first shift must be 0");
  const double width = kTwoPi / static_cast<double>(m);
  for (std::size_t l = 0; l < shifts.size(); ++l) {
    if (!(shifts[l] >= 0.0 && shifts[l] < width)) throw Error(ErrorCode::BadSpec, "shifts must lie in [0, 2pi/m)");
    for (std::size_t q = 0; q < l; ++q)
      if (shifts[q] == shifts[l]) throw Error(ErrorCode::BadSpec, "shifts must be distinct");
  }
}

std::size_t IsotropySpec::first_vertex(std::size_t l, std::size_t j) const {
  std::size_t v = 0;
  for (std::size_t q = 0; q < l; ++q) v += m * block_sizes[q];
  return v + j * block_sizes.at(l);
}

PhaseVector symmetric_equilibrium(const IsotropySpec& spec) {
  spec.validate();
  PhaseVector phi(static_cast<Eigen::Index>(spec.total()));
  Eigen::Index v = 0;
  for (std::size_t l = 0; l < spec.block_sizes.size(); ++l) {
    for (std::size_t j = 0; j < spec.m; ++j) {
      const double value = wrap_phase(spec.shifts[l] + kTwoPi * static_cast<double>(j) / static_cast<double>(spec.m));
      for (std::size_t k = 0; k < spec.block_sizes[l]; ++k) phi[v++] = value;
    }
  }
  return phi;
}

double arc_diameter(const PhaseVector& phi, std::span<const std::size_t> subset) {
  if (subset.empty()) throw Error(ErrorCode::EmptySet, "arc diameter of an empty set");
  std::vector<double> p;
  p.reserve(subset.size());
  for (std::size_t i : subset) {
    if (i >= static_cast<std::size_t>(phi.size())) throw Error(ErrorCode::IndexOutOfRange, "vertex outside phase vector");
    p.push_back(wrap_phase(phi[static_cast<Eigen::Index>(i)]));
  }
  std::sort(p.begin(), p.end());
  double gap = p.front() + kTwoPi - p.back();
  for (std::size_t i = 1; i < p.size(); ++i) gap = std::max(gap, p[i] - p[i - 1]);
  return std::max(0.0, kTwoPi - gap);
}

double arc_diameter(const PhaseVector& phi) {
  std::vector<std::size_t> all(static_cast<std::size_t>(phi.size()));
  std::iota(all.begin(), all.end(), std::size_t{0});
  return arc_diameter(phi, all);
}

PhaseVector canonicalize(const PhaseVector& phi) {
  if (phi.size() == 0) return phi;
  PhaseVector out = phi.array() - phi[0];
  return wrap_phases(std::move(out));
}

bool same_equilibrium_class(const PhaseVector& a, const PhaseVector& b, double tol) {
  if (a.size() != b.size()) return false;
  const PhaseVector ca = canonicalize(a);
  const PhaseVector cb = canonicalize(b);
  for (Eigen::Index i = 0; i < ca.size(); ++i)
    if (circular_distance(ca[i], cb[i]) >= tol) return false;
  return true;
}

PhaseVector example4_equilibrium() {
  PhaseVector phi(6);
  for (int k = 0; k < 6; ++k) phi[k] = k * kPi / 3.0;
  return phi;
}

PhaseVector example4_family(double e1, double e2, double e3) {
  PhaseVector phi(6);
  phi << e1, kPi / 3.0 + e2, 2.0 * kPi / 3.0 + e3, kPi + e1, 4.0 * kPi / 3.0 + e2, 5.0 * kPi / 3.0 + e3;
  return wrap_phases(std::move(phi));
}

PhaseVector example4_family2(double lambda1, double lambda2) { return example4_family(0.0, lambda1, lambda2); }

}  // namespace oscsync
