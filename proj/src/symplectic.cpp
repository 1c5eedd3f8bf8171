#include "omtk/symplectic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace omtk {

Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int i = 0; i < n_modes; ++i) {
    j(2 * i, 2 * i + 1) = 1.0;
    j(2 * i + 1, 2 * i) = -1.0;
  }
  return j;
}

CollectiveBasis symplectic_diagonalize(const Eigen::MatrixXd& cov) {
  const int dim = static_cast<int>(cov.rows());
  if (dim % 2 != 0 || cov.cols() != dim)
    throw InvalidParams("symplectic_diagonalize: covariance must be 2N x 2N");
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-9 * cov.cwiseAbs().maxCoeff())
    throw InvalidParams("symplectic_diagonalize: covariance must be symmetric");
  const int n = dim / 2;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (cov + cov.transpose()));
  if (es.info() != Eigen::Success)
    throw NotPositiveDefinite("symplectic_diagonalize: eigendecomposition failed");
  const Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0)
    throw NotPositiveDefinite("symplectic_diagonalize: covariance not positive definite");
  const Eigen::MatrixXd half = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
                               es.eigenvectors().transpose();
  const Eigen::MatrixXd half_inv = es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                                   es.eigenvectors().transpose();

  const Eigen::MatrixXd j = symplectic_form(n);
  const Eigen::MatrixXd b = half * j * half;  // antisymmetric

  // Eigenpairs of the antisymmetric B come as +-i nu with orthogonal real and
  // imaginary parts; assemble an orthogonal Q with 2x2 blocks [[0,nu],[-nu,0]].
  Eigen::ComplexEigenSolver<Eigen::MatrixXd> ces(b);
  if (ces.info() != Eigen::Success)
    throw NotPositiveDefinite("symplectic_diagonalize: skew eigendecomposition failed");

  struct Pair {
    double nu;
    Eigen::VectorXd re, im;
  };
  std::vector<Pair> pairs;
  for (int k = 0; k < dim; ++k) {
    const double lam = ces.eigenvalues()(k).imag();
    if (lam <= 0.0) continue;  // keep one of each conjugate pair
    Eigen::VectorXcd v = ces.eigenvectors().col(k);
    // B (re + i im) = i nu (re + i im)  =>  B re = -nu im, B im = nu re.
    Eigen::VectorXd re = v.real(), im = v.imag();
    const double norm = std::sqrt(2.0) / std::sqrt(re.squaredNorm() + im.squaredNorm());
    pairs.push_back({lam, re * norm, im * norm});
  }
  if (static_cast<int>(pairs.size()) != n)
    throw NotPositiveDefinite("symplectic_diagonalize: could not pair eigenvalues");
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b_) { return a.nu > b_.nu; });

  // B re = -nu im and B im = nu re, so columns (re, im) give Q^T B Q blocks
  // [[0, nu], [-nu, 0]] matching the symplectic form.
  Eigen::MatrixXd q(dim, dim);
  for (int k = 0; k < n; ++k) {
    q.col(2 * k) = pairs[k].re;
    q.col(2 * k + 1) = pairs[k].im;
  }

  Eigen::VectorXd d_sqrt(dim);
  for (int k = 0; k < n; ++k) d_sqrt(2 * k) = d_sqrt(2 * k + 1) = std::sqrt(pairs[k].nu);
  Eigen::MatrixXd u = half_inv * q * d_sqrt.asDiagonal();

  // Fix the residual sign/rotation freedom inside degenerate groups and make
  // the output deterministic: greedily align each collective mode with the
  // original mode it overlaps most.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> grouped(n);
  for (int k = 0; k < n; ++k) grouped[k] = pairs[k].nu;
  for (int k = 0; k + 1 < n; ++k) {
    if (std::abs(grouped[order[k]] - grouped[order[k + 1]]) <
        1e-6 * std::abs(grouped[order[k]])) {
      auto dominant = [&](int col) {
        int row;
        u.col(2 * col).cwiseAbs().maxCoeff(&row);
        return row;
      };
      if (dominant(order[k]) > dominant(order[k + 1])) std::swap(order[k], order[k + 1]);
    }
  }

  CollectiveBasis basis;
  basis.transform.resize(dim, dim);
  basis.symplectic_eigenvalues.resize(n);
  for (int k = 0; k < n; ++k) {
    int src = order[k];
    Eigen::VectorXd cx = u.col(2 * src), cy = u.col(2 * src + 1);
    // sign convention: largest-|X| coefficient positive
    int row;
    cx.cwiseAbs().maxCoeff(&row);
    if (cx(row) < 0.0) {
      cx = -cx;
      cy = -cy;
    }
    basis.transform.col(2 * k) = cx;
    basis.transform.col(2 * k + 1) = cy;
    basis.symplectic_eigenvalues[k] = grouped[src];
  }
  return basis;
}

}  // namespace omtk
