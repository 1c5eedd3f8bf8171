#pragma once

#include <Eigen/Dense>
#include <vector>

#include "omtk/errors.hpp"

namespace omtk {

// Quadrature ordering convention: interleaved (X1, Y1, X2, Y2, ...); the
// symplectic form is block-diagonal with 2x2 blocks [[0, 1], [-1, 0]].
Eigen::MatrixXd symplectic_form(int n_modes);

struct CollectiveBasis {
  Eigen::MatrixXd transform;  // U with U^T C U = diag(nu_k x I2), U^T J U = J
  std::vector<double> symplectic_eigenvalues;  // nu_k, descending
  // coefficients(k) = column 2k of U: the collective X_k over the original
  // quadratures (the paper-style coefficient table rows).
  Eigen::VectorXd coefficients(int k) const { return transform.col(2 * k); }
};

// Williamson normal form of a symmetric positive definite covariance.
// Degenerate symplectic eigenvalues are ordered to maximize overlap with the
// original mode basis. Throws NotPositiveDefinite.
CollectiveBasis symplectic_diagonalize(const Eigen::MatrixXd& cov);

}  // namespace omtk
