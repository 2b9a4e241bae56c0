// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FDTDMOR_CORE_SHIFTED_SOLVER_HPP
#define FDTDMOR_CORE_SHIFTED_SOLVER_HPP

#include <complex>
#include <cstddef>
#include <memory>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "assembly.hpp"

namespace fdtdmor
{

using Complex = std::complex<double>;
using ComplexSparse = Eigen::SparseMatrix<Complex>;

// (R - F) + z (R + F) in 2x2 block form with diagonal A11 and A22.
struct ShiftedOperator
{
  Eigen::VectorXcd a11, a22;
  ComplexSparse a12, a21;
  Complex z = 0.0;

  std::size_t num_electric() const { return static_cast<std::size_t>(a11.size()); }
  std::size_t num_magnetic() const { return static_cast<std::size_t>(a22.size()); }
  std::size_t size() const { return num_electric() + num_magnetic(); }

  Eigen::VectorXcd Apply(const Eigen::VectorXcd &x) const;
  // Dense copy, for tests and oracles.
  Eigen::MatrixXcd ToDense() const;
};

// Throws SingularOperator when A22 has a zero diagonal entry.
ShiftedOperator MakeShifted(const UpdatePair &pair, Complex z);

enum class SolverMethod
{
  Auto,
  Direct,
  Iterative
};

struct SolverOptions
{
  SolverMethod method = SolverMethod::Auto;
  double tol = 1.0e-4;
  std::size_t max_iterations = 0;  // 0 selects 10 sqrt(N)
};

// Auto picks direct up to this many unknowns.
inline constexpr std::size_t kDirectSolverLimit = 100000;

// Solves A x = b through the Schur complement S = A11 - A12 A22^-1 A21. The direct path
// factorizes S once at construction; the iterative path runs CGS on S. When A21 is empty
// the operator is block upper-triangular and is solved by back-substitution.
class ShiftedSolver
{
public:
  ShiftedSolver(ShiftedOperator op, const SolverOptions &options = {});
  ~ShiftedSolver();
  ShiftedSolver(ShiftedSolver &&) noexcept;
  ShiftedSolver &operator=(ShiftedSolver &&) noexcept;

  Eigen::VectorXcd Solve(const Eigen::VectorXcd &b) const;
  const ShiftedOperator &op() const { return op_; }
  SolverMethod method() const { return method_; }
  bool triangular() const { return triangular_; }

private:
  Eigen::VectorXcd SolveSchurIterative(const Eigen::VectorXcd &rhs, double abs_tol) const;

  struct Factorization;
  ShiftedOperator op_;
  SolverOptions options_;
  SolverMethod method_;
  bool triangular_ = false;
  Eigen::VectorXcd a22_inv_;
  std::unique_ptr<Factorization> lu_;
};

Eigen::VectorXcd SchurSolve(const ShiftedOperator &op, const Eigen::VectorXcd &b,
                            SolverMethod method = SolverMethod::Direct, double tol = 1.0e-4);

// Back-substitution for the z = 0 operator R - F (block upper-triangular).
Eigen::VectorXcd SolveZeroShift(const UpdatePair &pair, const Eigen::VectorXcd &b);

}  // namespace fdtdmor

#endif  // FDTDMOR_CORE_SHIFTED_SOLVER_HPP
