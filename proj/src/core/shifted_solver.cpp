// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "shifted_solver.hpp"

#include <cmath>

#include <Eigen/SparseLU>

#include "error.hpp"

namespace fdtdmor
{

namespace
{

// Copies block (row0, col0, rows, cols) of a real sparse matrix.
SparseMatrix Block(const SparseMatrix &m, Eigen::Index row0, Eigen::Index col0,
                   Eigen::Index rows, Eigen::Index cols)
{
  return m.block(row0, col0, rows, cols);
}

bool DiagonalOnly(const SparseMatrix &m)
{
  for (int col = 0; col < m.outerSize(); col++)
  {
    for (SparseMatrix::InnerIterator it(m, col); it; ++it)
    {
      if (it.row() != it.col() && it.value() != 0.0)
      {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

Eigen::VectorXcd ShiftedOperator::Apply(const Eigen::VectorXcd &x) const
{
  const auto ne = a11.size();
  const auto nh = a22.size();
  Eigen::VectorXcd y(ne + nh);
  y.head(ne) = a11.cwiseProduct(x.head(ne)) + a12 * x.tail(nh);
  y.tail(nh) = a21 * x.head(ne) + a22.cwiseProduct(x.tail(nh));
  return y;
}

Eigen::MatrixXcd ShiftedOperator::ToDense() const
{
  const auto ne = a11.size();
  const auto nh = a22.size();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(ne + nh, ne + nh);
  a.topLeftCorner(ne, ne) = a11.asDiagonal();
  a.bottomRightCorner(nh, nh) = a22.asDiagonal();
  a.topRightCorner(ne, nh) = Eigen::MatrixXcd(a12);
  a.bottomLeftCorner(nh, ne) = Eigen::MatrixXcd(a21);
  return a;
}

ShiftedOperator MakeShifted(const UpdatePair &pair, Complex z)
{
  const auto n = pair.R.rows();
  const auto ne = static_cast<Eigen::Index>(pair.num_electric);
  const auto nh = n - ne;
  const SparseMatrix minus = pair.R - pair.F;
  const SparseMatrix plus = pair.R + pair.F;
  const SparseMatrix m11 = Block(minus, 0, 0, ne, ne), p11 = Block(plus, 0, 0, ne, ne);
  const SparseMatrix m22 = Block(minus, ne, ne, nh, nh), p22 = Block(plus, ne, ne, nh, nh);
  if (!DiagonalOnly(m11) || !DiagonalOnly(p11) || !DiagonalOnly(m22) || !DiagonalOnly(p22))
  {
    throw Error(ErrorCode::InvalidParameter, "update pair diagonal blocks must be diagonal");
  }
  ShiftedOperator op;
  op.z = z;
  op.a11 = Eigen::VectorXd(m11.diagonal()).cast<Complex>() +
           z * Eigen::VectorXd(p11.diagonal()).cast<Complex>();
  op.a22 = Eigen::VectorXd(m22.diagonal()).cast<Complex>() +
           z * Eigen::VectorXd(p22.diagonal()).cast<Complex>();
  op.a12 = Block(minus, 0, ne, ne, nh).cast<Complex>() + z * Block(plus, 0, ne, ne, nh).cast<Complex>();
  op.a21 = Block(minus, ne, 0, nh, ne).cast<Complex>() + z * Block(plus, ne, 0, nh, ne).cast<Complex>();
  op.a12.prune(Complex(0.0));
  op.a21.prune(Complex(0.0));
  for (Eigen::Index i = 0; i < nh; i++)
  {
    if (op.a22[i] == Complex(0.0))
    {
      throw Error(ErrorCode::SingularOperator,
                  "shifted operator has a zero diagonal entry in the magnetic block");
    }
  }
  return op;
}

struct ShiftedSolver::Factorization
{
  Eigen::SparseLU<ComplexSparse, Eigen::COLAMDOrdering<int>> lu;
};

ShiftedSolver::ShiftedSolver(ShiftedOperator op, const SolverOptions &options)
  : op_(std::move(op)), options_(options)
{
  const auto nh = op_.a22.size();
  for (Eigen::Index i = 0; i < nh; i++)
  {
    if (op_.a22[i] == Complex(0.0))
    {
      throw Error(ErrorCode::SingularOperator,
                  "shifted operator has a zero diagonal entry in the magnetic block");
    }
  }
  a22_inv_ = op_.a22.cwiseInverse();
  triangular_ = op_.a21.nonZeros() == 0;
  method_ = options_.method;
  if (method_ == SolverMethod::Auto)
  {
    method_ = op_.size() <= kDirectSolverLimit ? SolverMethod::Direct : SolverMethod::Iterative;
  }
  if (triangular_)
  {
    for (Eigen::Index i = 0; i < op_.a11.size(); i++)
    {
      if (op_.a11[i] == Complex(0.0))
      {
        throw Error(ErrorCode::SingularOperator,
                    "shifted operator has a zero diagonal entry in the electric block");
      }
    }
    return;
  }
  if (method_ == SolverMethod::Direct)
  {
    const auto ne = op_.a11.size();
    ComplexSparse schur = op_.a12 * a22_inv_.asDiagonal() * op_.a21;
    schur = -schur;
    ComplexSparse diag(ne, ne);
    diag.reserve(Eigen::VectorXi::Constant(ne, 1));
    for (Eigen::Index i = 0; i < ne; i++)
    {
      diag.insert(i, i) = op_.a11[i];
    }
    schur += diag;
    schur.makeCompressed();
    lu_ = std::make_unique<Factorization>();
    lu_->lu.compute(schur);
    if (lu_->lu.info() != Eigen::Success)
    {
      throw Error(ErrorCode::SingularOperator, "Schur complement factorization failed");
    }
  }
}

ShiftedSolver::~ShiftedSolver() = default;
ShiftedSolver::ShiftedSolver(ShiftedSolver &&) noexcept = default;
ShiftedSolver &ShiftedSolver::operator=(ShiftedSolver &&) noexcept = default;

Eigen::VectorXcd ShiftedSolver::Solve(const Eigen::VectorXcd &b) const
{
  const auto ne = op_.a11.size();
  const auto nh = op_.a22.size();
  if (b.size() != ne + nh)
  {
    throw Error(ErrorCode::InvalidParameter, "right-hand side length does not match operator");
  }
  Eigen::VectorXcd x(ne + nh);
  if (triangular_)
  {
    x.tail(nh) = a22_inv_.cwiseProduct(b.tail(nh));
    x.head(ne) = (b.head(ne) - op_.a12 * x.tail(nh)).cwiseQuotient(op_.a11);
    return x;
  }
  const Eigen::VectorXcd y = a22_inv_.cwiseProduct(b.tail(nh));
  const Eigen::VectorXcd rhs = b.head(ne) - op_.a12 * y;
  if (method_ == SolverMethod::Direct)
  {
    x.head(ne) = lu_->lu.solve(rhs);
    if (lu_->lu.info() != Eigen::Success)
    {
      throw Error(ErrorCode::SingularOperator, "Schur complement solve failed");
    }
  }
  else
  {
    // Schur residual equals the full residual, so the target is tied to |b|.
    const double bnorm = b.norm();
    x.head(ne) = SolveSchurIterative(rhs, options_.tol * std::min(bnorm, rhs.norm()));
  }
  x.tail(nh) = a22_inv_.cwiseProduct(b.tail(nh) - op_.a21 * x.head(ne));
  if (!x.allFinite())
  {
    throw Error(ErrorCode::SingularOperator, "shifted solve produced non-finite values");
  }
  return x;
}

Eigen::VectorXcd ShiftedSolver::SolveSchurIterative(const Eigen::VectorXcd &rhs,
                                                    double abs_tol) const
{
  const auto ne = op_.a11.size();
  const auto apply = [&](const Eigen::VectorXcd &v) -> Eigen::VectorXcd
  { return op_.a11.cwiseProduct(v) - op_.a12 * a22_inv_.cwiseProduct(op_.a21 * v); };
  const std::size_t max_iter =
      options_.max_iterations > 0
          ? options_.max_iterations
          : static_cast<std::size_t>(std::ceil(10.0 * std::sqrt(static_cast<double>(op_.size()))));

  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(ne);
  if (rhs.norm() <= abs_tol || rhs.norm() == 0.0)
  {
    return x;
  }
  // Conjugate gradient squared (Sonneveld). Restarts from the true residual when the
  // recursive one has drifted below the target but the true one has not.
  std::size_t it = 0;
  double true_res = rhs.norm();
  while (it < max_iter && true_res > abs_tol)
  {
    Eigen::VectorXcd r = rhs - apply(x);
    const Eigen::VectorXcd r0 = r;
    Eigen::VectorXcd p = Eigen::VectorXcd::Zero(ne), q = Eigen::VectorXcd::Zero(ne), u(ne);
    Complex rho_old = 1.0;
    double res = r.norm();
    bool first = true, breakdown = false;
    for (; it < max_iter && res > abs_tol; it++)
    {
      const Complex rho = r0.dot(r);
      if (rho == Complex(0.0))
      {
        breakdown = true;
        break;
      }
      if (first)
      {
        u = r;
        p = u;
        first = false;
      }
      else
      {
        const Complex beta = rho / rho_old;
        u = r + beta * q;
        p = u + beta * (q + beta * p);
      }
      const Eigen::VectorXcd v = apply(p);
      const Complex sigma = r0.dot(v);
      if (sigma == Complex(0.0))
      {
        breakdown = true;
        break;
      }
      const Complex alpha = rho / sigma;
      q = u - alpha * v;
      const Eigen::VectorXcd w = u + q;
      x += alpha * w;
      r -= alpha * apply(w);
      rho_old = rho;
      res = r.norm();
    }
    true_res = (rhs - apply(x)).norm();
    if (breakdown || !std::isfinite(true_res))
    {
      break;
    }
  }
  if (!(true_res <= abs_tol))
  {
    throw SolverFailure(true_res / rhs.norm(), it);
  }
  return x;
}

Eigen::VectorXcd SchurSolve(const ShiftedOperator &op, const Eigen::VectorXcd &b,
                            SolverMethod method, double tol)
{
  SolverOptions options;
  options.method = method;
  options.tol = tol;
  return ShiftedSolver(op, options).Solve(b);
}

Eigen::VectorXcd SolveZeroShift(const UpdatePair &pair, const Eigen::VectorXcd &b)
{
  ShiftedOperator op = MakeShifted(pair, 0.0);
  if (op.a21.nonZeros() != 0)
  {
    throw Error(ErrorCode::InvalidParameter, "zero-shift operator is not block triangular");
  }
  return ShiftedSolver(std::move(op)).Solve(b);
}

}  // namespace fdtdmor
