// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FDTDMOR_CORE_KRYLOV_HPP
#define FDTDMOR_CORE_KRYLOV_HPP

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "assembly.hpp"
#include "shifted_solver.hpp"

namespace fdtdmor
{

// 2L+1 points z_l = M exp(j 2 pi (l/L) f_max dt), l = -L..L, on a circle of radius M.
struct ExpansionPointSet
{
  double radius = 1.1;
  int half_count = 0;
  double f_max = 0.0;
  double dt = 0.0;
  std::vector<Complex> points;  // ordered l = -L..L

  // Points with l = 0..L; the others are their conjugates.
  std::vector<Complex> Representatives() const;
};

// Throws InvalidParameter for M <= 1 or L < 0, Aliasing when f_max dt >= 1/2.
ExpansionPointSet MakeExpansionPoints(double radius, int half_count, double f_max, double dt);

struct ProjectionBasis
{
  Eigen::MatrixXd v1;  // N_e x order
  Eigen::MatrixXd v2;  // N_h x order
  std::size_t order() const { return static_cast<std::size_t>(v1.cols()); }
};

struct BasisOptions
{
  SolverOptions solver;
  double deflation_tol = 1.0e-8;
};

// Multi-point Arnoldi: per representative point a chain v_{k+1} = A^-1 (R+F) v_k seeded
// with A^-1 B, where A = z (R+F) - (R-F) expands the transfer function at z. Each new
// complex vector is split into real and imaginary parts, then into E and H parts that
// are orthonormalized into V1 and V2. Points are visited round-robin.
ProjectionBasis BuildBasis(const SystemMatrices &m, const ExpansionPointSet &points,
                           std::size_t target_order, double dt, const BasisOptions &options = {});

// Dense reduced model. Square (n_e == n_h) when produced by projection; the full-size
// form from FromSystem may have n_e != n_h.
struct ReducedModel
{
  Eigen::MatrixXd d_eps, d_mu, d_sigma_e, d_sigma_m;
  Eigen::MatrixXd curl;   // n_e x n_h
  Eigen::MatrixXd input;  // (n_e + n_h) x N_in
  double dt = 0.0;

  Eigen::Index num_electric() const { return d_eps.rows(); }
  Eigen::Index num_magnetic() const { return d_mu.rows(); }
  Eigen::Index size() const { return num_electric() + num_magnetic(); }
  Eigen::Index num_inputs() const { return input.cols(); }

  // R~ and F~ rebuilt from the blocks.
  Eigen::MatrixXd UpdateR() const;
  Eigen::MatrixXd UpdateF() const;

  void Save(std::ostream &os) const;
  static ReducedModel Load(std::istream &is);
};

// V^T blocks: D~eps = V1^T Deps V1, K~ = V1^T K V2, B~ = blockdiag(V1, V2)^T B.
ReducedModel Project(const SystemMatrices &m, const ProjectionBasis &basis, double dt);

// Identity projection of a full system (dense); meant for small N.
ReducedModel FromSystem(const SystemMatrices &m, double dt);

// Full and reduced transfer function C (z (R+F) - (R-F))^-1 B with C = B^T, dense;
// used by tests and diagnostics.
Eigen::MatrixXcd TransferFunction(const Eigen::MatrixXd &r, const Eigen::MatrixXd &f,
                                  const Eigen::MatrixXd &b, Complex z);

}  // namespace fdtdmor

#endif  // FDTDMOR_CORE_KRYLOV_HPP
