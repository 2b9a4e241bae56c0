// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FDTDMOR_CORE_STABILITY_HPP
#define FDTDMOR_CORE_STABILITY_HPP

#include <cstddef>
#include <iosfwd>

#include <Eigen/Dense>

#include "krylov.hpp"

namespace fdtdmor
{

struct StabilityReport
{
  Eigen::VectorXd singular_values;  // descending
  double limit = 0.0;               // 2/dt
  std::size_t violating_count = 0;  // sigma_i >= limit
  double s_factor = 0.0;            // informational, 0 if unknown

  bool stable() const { return violating_count == 0; }
};

// Singular values of D~eps^-1/2 K~ D~mu^-1/2 against 2/dt. Throws InvariantViolation when
// D~eps or D~mu is not positive definite.
StabilityReport ReducedStabilityCheck(const ReducedModel &model, double dt, double s_factor = 0.0);

inline constexpr double kDefaultGamma = 0.9999;

// Clips the normalized curl singular values at gamma 2/dt and maps back:
// K~' = D~eps^1/2 U S' W^T D~mu^1/2. Other blocks are untouched.
ReducedModel EnforceStability(const ReducedModel &model, double dt, double gamma = kDefaultGamma);

// Dense eigenvalues of (R+F)^-1 (R-F). Throws SingularOperator if R+F is singular.
Eigen::VectorXcd UpdateEigenvalues(const Eigen::MatrixXd &r, const Eigen::MatrixXd &f);
Eigen::VectorXcd UpdateEigenvalues(const ReducedModel &model);

// Lossless models only: each singular value sigma of the normalized curl contributes the
// pair solving l^2 - (2 - (sigma dt)^2) l + 1 = 0; all other directions have l = 1.
Eigen::VectorXcd LosslessUpdateEigenvalues(const Eigen::VectorXd &singular_values,
                                           std::size_t size, double dt);
bool IsLossless(const ReducedModel &model);

// "index,real,imaginary,magnitude" rows.
void WriteEigenvalueCsv(std::ostream &os, const Eigen::VectorXcd &values);
void WriteSingularValueCsv(std::ostream &os, const Eigen::VectorXd &values);

}  // namespace fdtdmor

#endif  // FDTDMOR_CORE_STABILITY_HPP
