// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

// Shared fixtures for the unit tests: small grids and seeded random systems.

#ifndef FDTDMOR_TESTS_TEST_SUPPORT_HPP
#define FDTDMOR_TESTS_TEST_SUPPORT_HPP

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "assembly.hpp"
#include "grid.hpp"
#include "krylov.hpp"

namespace fdtdmor::testing
{

inline BoundarySpec AllFaces(FaceCondition::Kind kind)
{
  BoundarySpec b;
  for (auto &f : b.faces)
  {
    f.kind = kind;
  }
  return b;
}

inline GridSpec Grid1d(int cells, double dz)
{
  const std::array<int, 1> c = {cells};
  const std::array<double, 1> d = {dz};
  return GridSpec::Make(1, c, d);
}

inline GridSpec Grid2d(int nx, int ny, double dx, double dy)
{
  const std::array<int, 2> c = {nx, ny};
  const std::array<double, 2> d = {dx, dy};
  return GridSpec::Make(2, c, d);
}

inline GridSpec Grid3d(int n, double d)
{
  const std::array<int, 3> c = {n, n, n};
  const std::array<double, 3> s = {d, d, d};
  return GridSpec::Make(3, c, s);
}

// 1 m cube with 9 cells per side, PEC walls.
inline SystemMatrices CubeSystem(std::vector<SourceSpec> sources = {})
{
  const GridSpec grid = Grid3d(9, 1.0 / 9.0);
  return Assemble(grid, MaterialMap(grid), AllFaces(FaceCondition::Kind::Pec), sources);
}

inline SourceSpec PointSource(Component c, Index3 at, double f_max = 0.3e9)
{
  SourceSpec s;
  s.name = "src";
  s.kind = IsElectric(c) ? SourceKind::ElectricCurrent : SourceKind::MagneticCurrent;
  s.component = c;
  s.locations = {at};
  s.waveform = Waveform::Gaussian(f_max);
  return s;
}

struct RandomSystemOptions
{
  int num_electric = 8;
  int num_magnetic = 7;
  int num_inputs = 2;
  bool lossy = true;
  double curl_density = 0.35;
};

// Random Maxwell-shaped system: positive diagonal material blocks in [0.5, 2],
// non-negative losses, curl entries of unit magnitude, and -1 input stamps on E rows.
inline SystemMatrices RandomSystem(std::uint32_t seed, const RandomSystemOptions &o = {})
{
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SystemMatrices m;
  m.eps = Eigen::VectorXd(o.num_electric);
  m.sigma_e = Eigen::VectorXd::Zero(o.num_electric);
  m.mu = Eigen::VectorXd(o.num_magnetic);
  m.sigma_m = Eigen::VectorXd::Zero(o.num_magnetic);
  for (int i = 0; i < o.num_electric; i++)
  {
    m.eps[i] = 0.5 + 1.5 * unit(rng);
    if (o.lossy)
    {
      m.sigma_e[i] = 0.3 * unit(rng);
    }
  }
  for (int i = 0; i < o.num_magnetic; i++)
  {
    m.mu[i] = 0.5 + 1.5 * unit(rng);
    if (o.lossy)
    {
      m.sigma_m[i] = 0.3 * unit(rng);
    }
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (int e = 0; e < o.num_electric; e++)
  {
    bool any = false;
    for (int h = 0; h < o.num_magnetic; h++)
    {
      if (unit(rng) < o.curl_density)
      {
        trip.emplace_back(e, h, unit(rng) < 0.5 ? -1.0 : 1.0);
        any = true;
      }
    }
    if (!any)
    {
      trip.emplace_back(e, e % o.num_magnetic, 1.0);
    }
  }
  m.curl.resize(o.num_electric, o.num_magnetic);
  m.curl.setFromTriplets(trip.begin(), trip.end());
  std::vector<Eigen::Triplet<double>> in;
  for (int j = 0; j < o.num_inputs; j++)
  {
    in.emplace_back(static_cast<int>(rng() % o.num_electric), j, -1.0);
  }
  m.input.resize(o.num_electric + o.num_magnetic, o.num_inputs);
  m.input.setFromTriplets(in.begin(), in.end());
  return m;
}

// Random orthonormal basis blocks for a congruence projection.
inline ProjectionBasis RandomBasis(std::uint32_t seed, int ne, int nh, int order)
{
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  auto orth = [&](int rows)
  {
    Eigen::MatrixXd a(rows, order);
    for (int i = 0; i < a.size(); i++)
    {
      a.data()[i] = g(rng);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    return Eigen::MatrixXd(qr.householderQ() * Eigen::MatrixXd::Identity(rows, order));
  };
  ProjectionBasis b;
  b.v1 = orth(ne);
  b.v2 = orth(nh);
  return b;
}

inline Eigen::MatrixXd BlockDiag(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b)
{
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

// Largest dt that keeps a random system inside its CFL-like bound: 2 / sigma_max.
inline double StableTimestep(const SystemMatrices &m, double s)
{
  const Eigen::MatrixXd k = Eigen::MatrixXd(m.curl);
  const Eigen::MatrixXd n =
      m.eps.cwiseInverse().cwiseSqrt().asDiagonal() * k * m.mu.cwiseInverse().cwiseSqrt().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(n);
  return s * 2.0 / svd.singularValues()[0];
}

}  // namespace fdtdmor::testing

#endif  // FDTDMOR_TESTS_TEST_SUPPORT_HPP
