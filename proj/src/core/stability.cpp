// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "stability.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "error.hpp"
#include "linalg.hpp"

namespace fdtdmor
{

namespace
{

void RequirePositiveDefinite(const ReducedModel &model)
{
  if (!linalg::IsPositiveDefinite(model.d_eps) || !linalg::IsPositiveDefinite(model.d_mu))
  {
    throw Error(ErrorCode::InvariantViolation,
                "reduced permittivity or permeability block is not positive definite");
  }
}

}  // namespace

StabilityReport ReducedStabilityCheck(const ReducedModel &model, double dt, double s_factor)
{
  if (!(dt > 0.0))
  {
    throw Error(ErrorCode::InvalidParameter, "timestep must be positive");
  }
  RequirePositiveDefinite(model);
  StabilityReport report;
  report.limit = 2.0 / dt;
  report.s_factor = s_factor;
  report.singular_values =
      linalg::NormalizedCurlSingularValues(model.d_eps, model.d_mu, model.curl);
  for (Eigen::Index i = 0; i < report.singular_values.size(); i++)
  {
    if (report.singular_values[i] >= report.limit)
    {
      report.violating_count++;
    }
  }
  return report;
}

ReducedModel EnforceStability(const ReducedModel &model, double dt, double gamma)
{
  if (!(gamma > 0.0 && gamma < 1.0))
  {
    throw Error(ErrorCode::InvalidParameter, "gamma must lie strictly between 0 and 1");
  }
  if (!(dt > 0.0))
  {
    throw Error(ErrorCode::InvalidParameter, "timestep must be positive");
  }
  RequirePositiveDefinite(model);
  ReducedModel out = model;
  if (model.curl.size() == 0)
  {
    return out;
  }
  const Eigen::MatrixXd eps_inv_half = linalg::SymmetricPower(model.d_eps, -0.5);
  const Eigen::MatrixXd mu_inv_half = linalg::SymmetricPower(model.d_mu, -0.5);
  const Eigen::MatrixXd normalized = eps_inv_half * model.curl * mu_inv_half;
  const linalg::ThinSvd svd = linalg::Svd(normalized, true);
  const double cap = gamma * 2.0 / dt;
  const Eigen::VectorXd &sigma = svd.sigma;
  if (sigma.size() == 0 || sigma.maxCoeff() <= cap)
  {
    return out;
  }
  // Only the clipped directions change: K' = K - Deps^1/2 U (S - S') W^T Dmu^1/2.
  Eigen::VectorXd excess = (sigma.array() - cap).max(0.0).matrix();
  const Eigen::Index k = (excess.array() > 0.0).count();
  const Eigen::MatrixXd u = svd.u.leftCols(k);
  const Eigen::MatrixXd w = svd.v.leftCols(k);
  const Eigen::MatrixXd delta = u * excess.head(k).asDiagonal() * w.transpose();
  const Eigen::MatrixXd eps_half = linalg::SymmetricPower(model.d_eps, 0.5);
  const Eigen::MatrixXd mu_half = linalg::SymmetricPower(model.d_mu, 0.5);
  out.curl = model.curl - eps_half * delta * mu_half;
  return out;
}

Eigen::VectorXcd UpdateEigenvalues(const Eigen::MatrixXd &r, const Eigen::MatrixXd &f)
{
  if (r.rows() != r.cols() || f.rows() != r.rows() || f.cols() != r.cols())
  {
    throw Error(ErrorCode::InvalidParameter, "update eigenvalues need square matrices of one size");
  }
  if (r.rows() == 0)
  {
    return Eigen::VectorXcd();
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(r + f);
  if (!lu.isInvertible() || lu.rcond() < 1e-14)
  {
    throw Error(ErrorCode::SingularOperator, "R + F is singular");
  }
  return linalg::GeneralEigenvalues(lu.solve(r - f));
}

Eigen::VectorXcd UpdateEigenvalues(const ReducedModel &model)
{
  return UpdateEigenvalues(model.UpdateR(), model.UpdateF());
}

bool IsLossless(const ReducedModel &model)
{
  return (model.d_sigma_e.size() == 0 || model.d_sigma_e.cwiseAbs().maxCoeff() == 0.0) &&
         (model.d_sigma_m.size() == 0 || model.d_sigma_m.cwiseAbs().maxCoeff() == 0.0);
}

Eigen::VectorXcd LosslessUpdateEigenvalues(const Eigen::VectorXd &singular_values,
                                           std::size_t size, double dt)
{
  const auto n = static_cast<Eigen::Index>(size);
  const auto r = singular_values.size();
  if (2 * r > n)
  {
    throw Error(ErrorCode::InvalidParameter, "more singular values than the system allows");
  }
  Eigen::VectorXcd out = Eigen::VectorXcd::Ones(n);
  for (Eigen::Index i = 0; i < r; i++)
  {
    const double k = singular_values[i] * dt;
    const double half_trace = 1.0 - 0.5 * k * k;
    const double disc = half_trace * half_trace - 1.0;
    if (disc < 0.0)
    {
      const double im = std::sqrt(-disc);
      out[2 * i] = {half_trace, im};
      out[2 * i + 1] = {half_trace, -im};
    }
    else
    {
      // Real reciprocal pair; take the larger root directly and divide for the other.
      const double root =
          half_trace < 0.0 ? half_trace - std::sqrt(disc) : half_trace + std::sqrt(disc);
      out[2 * i] = root;
      out[2 * i + 1] = 1.0 / root;
    }
  }
  return out;
}

void WriteEigenvalueCsv(std::ostream &os, const Eigen::VectorXcd &values)
{
  os << "index,real,imaginary,magnitude\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < values.size(); i++)
  {
    os << i << ',' << values[i].real() << ',' << values[i].imag() << ',' << std::abs(values[i])
       << '\n';
  }
}

void WriteSingularValueCsv(std::ostream &os, const Eigen::VectorXd &values)
{
  os << "index,real,imaginary,magnitude\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < values.size(); i++)
  {
    os << i << ',' << values[i] << ",0," << std::abs(values[i]) << '\n';
  }
}

}  // namespace fdtdmor
