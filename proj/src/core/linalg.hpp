// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FDTDMOR_CORE_LINALG_HPP
#define FDTDMOR_CORE_LINALG_HPP

#include <complex>

#include <Eigen/Dense>

namespace fdtdmor::linalg
{

// A^p for symmetric positive definite A via eigen-decomposition. Eigenvalues below
// 1e-14 * max are floored. Diagonal inputs take an elementwise path.
Eigen::MatrixXd SymmetricPower(const Eigen::MatrixXd &a, double p);

bool IsDiagonal(const Eigen::MatrixXd &a);
bool IsPositiveDefinite(const Eigen::MatrixXd &a);

struct ThinSvd
{
  Eigen::MatrixXd u;      // m x k
  Eigen::VectorXd sigma;  // descending, k = min(m, n)
  Eigen::MatrixXd v;      // n x k
};

// LAPACK dgesdd; values only when want_vectors is false.
ThinSvd Svd(Eigen::MatrixXd a, bool want_vectors);

// Singular values (descending) of De^-1/2 K Dm^-1/2.
Eigen::VectorXd NormalizedCurlSingularValues(const Eigen::MatrixXd &d_eps,
                                             const Eigen::MatrixXd &d_mu,
                                             const Eigen::MatrixXd &curl);
// Same, for diagonal Dε and Dμ given by their diagonals.
Eigen::VectorXd NormalizedCurlSingularValues(const Eigen::VectorXd &eps,
                                             const Eigen::VectorXd &mu,
                                             const Eigen::MatrixXd &curl);

// Eigenvalues of a general real square matrix (LAPACK dgeev).
Eigen::VectorXcd GeneralEigenvalues(const Eigen::MatrixXd &a);

}  // namespace fdtdmor::linalg

#endif  // FDTDMOR_CORE_LINALG_HPP
