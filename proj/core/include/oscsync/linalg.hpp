#pragma once

#include <Eigen/Dense>

namespace oscsync {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column k pairs with values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops
/// below tol * max(1, |M|_F). Throws Error{NotSymmetric} when M deviates
/// from its transpose by more than 1e-10 * max(1, |M|_F).
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& m, double tol = 1e-14);

/// Eigenvalues only, ascending.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m, double tol = 1e-14);

/// Orthonormal basis of the complement of the all-ones vector (N x N-1,
/// Helmert construction).
Eigen::MatrixXd helmert_basis(Eigen::Index n);

}  // namespace oscsync
