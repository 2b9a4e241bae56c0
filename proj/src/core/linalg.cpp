// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "error.hpp"

extern "C"
{
  void dgeev_(const char *jobvl, const char *jobvr, const int *n, double *a, const int *lda,
              double *wr, double *wi, double *vl, const int *ldvl, double *vr, const int *ldvr,
              double *work, const int *lwork, int *info);
  void dgesdd_(const char *jobz, const int *m, const int *n, double *a, const int *lda, double *s,
               double *u, const int *ldu, double *vt, const int *ldvt, double *work, const int *lwork,
               int *iwork, int *info);
}

namespace fdtdmor::linalg
{

// Eigen 3.4.0 BDCSVD can crash on highly degenerate spectra (cavity curls).
ThinSvd Svd(Eigen::MatrixXd a, bool want_vectors)
{
  const int m = static_cast<int>(a.rows()), n = static_cast<int>(a.cols());
  const int k = std::min(m, n);
  ThinSvd out;
  out.sigma.resize(k);
  if (k == 0)
  {
    out.u.resize(m, 0);
    out.v.resize(n, 0);
    return out;
  }
  const char *jobz = want_vectors ? "S" : "N";
  Eigen::MatrixXd u, vt;
  int ldu = 1, ldvt = 1;
  if (want_vectors)
  {
    u.resize(m, k);
    vt.resize(k, n);
    ldu = m;
    ldvt = k;
  }
  double dummy = 0.0, query = 0.0;
  double *up = want_vectors ? u.data() : &dummy;
  double *vp = want_vectors ? vt.data() : &dummy;
  int lwork = -1, info = 0;
  std::vector<int> iwork(8 * static_cast<std::size_t>(k));
  dgesdd_(jobz, &m, &n, a.data(), &m, out.sigma.data(), up, &ldu, vp, &ldvt, &query, &lwork,
          iwork.data(), &info);
  lwork = static_cast<int>(query);
  std::vector<double> work(static_cast<std::size_t>(std::max(lwork, 1)));
  dgesdd_(jobz, &m, &n, a.data(), &m, out.sigma.data(), up, &ldu, vp, &ldvt, work.data(), &lwork,
          iwork.data(), &info);
  if (info != 0)
  {
    throw Error(ErrorCode::InvariantViolation,
                "dgesdd failed to converge (info = " + std::to_string(info) + ")");
  }
  if (want_vectors)
  {
    out.u = std::move(u);
    out.v = vt.transpose();
  }
  return out;
}

bool IsDiagonal(const Eigen::MatrixXd &a)
{
  for (Eigen::Index j = 0; j < a.cols(); j++)
  {
    for (Eigen::Index i = 0; i < a.rows(); i++)
    {
      if (i != j && a(i, j) != 0.0)
      {
        return false;
      }
    }
  }
  return true;
}

bool IsPositiveDefinite(const Eigen::MatrixXd &a)
{
  if (a.rows() != a.cols())
  {
    return false;
  }
  if (a.rows() == 0)
  {
    return true;
  }
  if (IsDiagonal(a))
  {
    return a.diagonal().minCoeff() > 0.0;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (a + a.transpose()));
  return llt.info() == Eigen::Success;
}

Eigen::MatrixXd SymmetricPower(const Eigen::MatrixXd &a, double p)
{
  if (a.rows() != a.cols())
  {
    throw Error(ErrorCode::InvalidParameter, "matrix power needs a square matrix");
  }
  if (a.rows() == 0)
  {
    return a;
  }
  if (IsDiagonal(a))
  {
    const Eigen::VectorXd d = a.diagonal();
    const double floor = 1e-14 * d.maxCoeff();
    return d.unaryExpr([&](double x) { return std::pow(std::max(x, floor), p); }).asDiagonal();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a + a.transpose()));
  const Eigen::VectorXd lambda = es.eigenvalues();
  const double floor = 1e-14 * lambda.maxCoeff();
  const Eigen::VectorXd powered =
      lambda.unaryExpr([&](double x) { return std::pow(std::max(x, floor), p); });
  return es.eigenvectors() * powered.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::VectorXd NormalizedCurlSingularValues(const Eigen::MatrixXd &d_eps,
                                             const Eigen::MatrixXd &d_mu,
                                             const Eigen::MatrixXd &curl)
{
  if (curl.size() == 0)
  {
    return Eigen::VectorXd();
  }
  return Svd(SymmetricPower(d_eps, -0.5) * curl * SymmetricPower(d_mu, -0.5), false).sigma;
}

Eigen::VectorXd NormalizedCurlSingularValues(const Eigen::VectorXd &eps,
                                             const Eigen::VectorXd &mu,
                                             const Eigen::MatrixXd &curl)
{
  if (curl.size() == 0)
  {
    return Eigen::VectorXd();
  }
  return Svd(eps.cwiseSqrt().cwiseInverse().asDiagonal() * curl *
                 mu.cwiseSqrt().cwiseInverse().asDiagonal(),
             false)
      .sigma;
}

Eigen::VectorXcd GeneralEigenvalues(const Eigen::MatrixXd &a)
{
  if (a.rows() != a.cols())
  {
    throw Error(ErrorCode::InvalidParameter, "eigenvalues need a square matrix");
  }
  const int n = static_cast<int>(a.rows());
  if (n == 0)
  {
    return Eigen::VectorXcd();
  }
  Eigen::MatrixXd work_a = a;
  std::vector<double> wr(n), wi(n);
  double dummy = 0.0;
  const int one = 1;
  int lwork = -1, info = 0;
  double query = 0.0;
  dgeev_("N", "N", &n, work_a.data(), &n, wr.data(), wi.data(), &dummy, &one, &dummy, &one,
         &query, &lwork, &info);
  lwork = static_cast<int>(query);
  std::vector<double> work(static_cast<std::size_t>(std::max(lwork, 1)));
  dgeev_("N", "N", &n, work_a.data(), &n, wr.data(), wi.data(), &dummy, &one, &dummy, &one,
         work.data(), &lwork, &info);
  if (info != 0)
  {
    throw Error(ErrorCode::InvariantViolation,
                "dgeev failed to converge (info = " + std::to_string(info) + ")");
  }
  Eigen::VectorXcd out(n);
  for (int i = 0; i < n; i++)
  {
    out[i] = {wr[i], wi[i]};
  }
  return out;
}

}  // namespace fdtdmor::linalg
