// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "krylov.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>

#include "error.hpp"

namespace fdtdmor
{

namespace
{

// Modified Gram-Schmidt, two passes. Returns false if the vector deflates.
template <typename Vec>
bool Orthonormalize(const std::vector<Vec> &basis, Vec &v, double tol)
{
  const double before = v.norm();
  if (!(before > 0.0) || !std::isfinite(before))
  {
    return false;
  }
  for (int pass = 0; pass < 2; pass++)
  {
    for (const auto &q : basis)
    {
      v -= q.dot(v) * q;
    }
  }
  const double after = v.norm();
  if (!(after >= tol * before))
  {
    return false;
  }
  v /= after;
  return true;
}

Eigen::MatrixXd Stack(const std::vector<Eigen::VectorXd> &cols, Eigen::Index rows, std::size_t count)
{
  Eigen::MatrixXd out(rows, static_cast<Eigen::Index>(count));
  for (std::size_t j = 0; j < count; j++)
  {
    out.col(static_cast<Eigen::Index>(j)) = cols[j];
  }
  return out;
}

void WriteU64(std::ostream &os, std::uint64_t v)
{
  if constexpr (std::endian::native == std::endian::big)
  {
    v = __builtin_bswap64(v);
  }
  os.write(reinterpret_cast<const char *>(&v), sizeof(v));
}

void WriteF64(std::ostream &os, double d)
{
  WriteU64(os, std::bit_cast<std::uint64_t>(d));
}

std::uint64_t ReadU64(std::istream &is)
{
  std::uint64_t v = 0;
  is.read(reinterpret_cast<char *>(&v), sizeof(v));
  if (!is)
  {
    throw Error(ErrorCode::Io, "truncated reduced model file");
  }
  if constexpr (std::endian::native == std::endian::big)
  {
    v = __builtin_bswap64(v);
  }
  return v;
}

double ReadF64(std::istream &is)
{
  return std::bit_cast<double>(ReadU64(is));
}

void WriteBlock(std::ostream &os, const Eigen::MatrixXd &m)
{
  for (Eigen::Index i = 0; i < m.rows(); i++)
  {
    for (Eigen::Index j = 0; j < m.cols(); j++)
    {
      WriteF64(os, m(i, j));
    }
  }
}

Eigen::MatrixXd ReadBlock(std::istream &is, Eigen::Index rows, Eigen::Index cols)
{
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; i++)
  {
    for (Eigen::Index j = 0; j < cols; j++)
    {
      m(i, j) = ReadF64(is);
    }
  }
  return m;
}

Eigen::MatrixXd Symmetrized(const Eigen::MatrixXd &a)
{
  return 0.5 * (a + a.transpose());
}

}  // namespace

std::vector<Complex> ExpansionPointSet::Representatives() const
{
  return std::vector<Complex>(points.begin() + half_count, points.end());
}

ExpansionPointSet MakeExpansionPoints(double radius, int half_count, double f_max, double dt)
{
  if (!(radius > 1.0))
  {
    throw Error(ErrorCode::InvalidParameter, "expansion radius M must exceed 1");
  }
  if (half_count < 0)
  {
    throw Error(ErrorCode::InvalidParameter, "expansion half-count L must be non-negative");
  }
  if (!(dt > 0.0) || !(f_max >= 0.0))
  {
    throw Error(ErrorCode::InvalidParameter, "expansion points need dt > 0 and f_max >= 0");
  }
  if (f_max * dt >= 0.5)
  {
    throw Error(ErrorCode::Aliasing,
                "f_max * dt >= 1/2: expansion points would wrap past the Nyquist angle");
  }
  ExpansionPointSet set;
  set.radius = radius;
  set.half_count = half_count;
  set.f_max = f_max;
  set.dt = dt;
  for (int l = -half_count; l <= half_count; l++)
  {
    if (half_count == 0)
    {
      set.points.emplace_back(radius, 0.0);
      continue;
    }
    const double angle = 2.0 * std::numbers::pi * (static_cast<double>(l) / half_count) * f_max * dt;
    set.points.push_back(std::polar(radius, angle));
  }
  return set;
}

ProjectionBasis BuildBasis(const SystemMatrices &m, const ExpansionPointSet &points,
                           std::size_t target_order, double dt, const BasisOptions &options)
{
  if (target_order < 1)
  {
    throw Error(ErrorCode::InvalidParameter, "target reduced order must be at least 1");
  }
  const UpdatePair pair = BuildUpdatePair(m, dt);
  const ComplexSparse plus = SparseMatrix(pair.R + pair.F).cast<Complex>();
  const auto ne = static_cast<Eigen::Index>(m.num_electric());
  const auto nh = static_cast<Eigen::Index>(m.num_magnetic());
  const auto n = ne + nh;

  struct Chain
  {
    ShiftedSolver solver;
    std::vector<Eigen::VectorXcd> vectors;
    std::vector<Eigen::VectorXcd> last;
    bool active = true;
  };
  std::vector<Chain> chains;
  for (const Complex z : points.Representatives())
  {
    // (R-F) + (-z)(R+F) = -(z(R+F) - (R-F)); the sign does not change the span.
    chains.push_back({ShiftedSolver(MakeShifted(pair, -z), options.solver), {}, {}, true});
  }

  std::vector<Eigen::VectorXd> e_cols, h_cols;
  const auto add_real = [&](const Eigen::VectorXd &part)
  {
    if (e_cols.size() < target_order)
    {
      Eigen::VectorXd e = part.head(ne);
      if (Orthonormalize(e_cols, e, options.deflation_tol))
      {
        e_cols.push_back(std::move(e));
      }
    }
    if (h_cols.size() < target_order)
    {
      Eigen::VectorXd h = part.tail(nh);
      if (Orthonormalize(h_cols, h, options.deflation_tol))
      {
        h_cols.push_back(std::move(h));
      }
    }
  };

  const Eigen::MatrixXcd seed = Eigen::MatrixXd(m.input).cast<Complex>();
  const std::size_t max_sweeps = static_cast<std::size_t>(n) + 1;
  for (std::size_t sweep = 0; sweep < max_sweeps; sweep++)
  {
    bool any_active = false;
    for (auto &chain : chains)
    {
      if (std::min(e_cols.size(), h_cols.size()) >= target_order)
      {
        break;
      }
      if (!chain.active)
      {
        continue;
      }
      std::vector<Eigen::VectorXcd> candidates;
      if (sweep == 0)
      {
        for (Eigen::Index j = 0; j < seed.cols(); j++)
        {
          candidates.push_back(chain.solver.Solve(seed.col(j)));
        }
      }
      else
      {
        for (const auto &v : chain.last)
        {
          candidates.push_back(chain.solver.Solve(plus * v));
        }
      }
      chain.last.clear();
      for (auto &w : candidates)
      {
        if (!Orthonormalize(chain.vectors, w, options.deflation_tol))
        {
          continue;
        }
        chain.vectors.push_back(w);
        chain.last.push_back(w);
        add_real(w.real());
        add_real(w.imag());
      }
      chain.active = !chain.last.empty();
      any_active = any_active || chain.active;
    }
    if (!any_active || std::min(e_cols.size(), h_cols.size()) >= target_order)
    {
      break;
    }
  }

  const std::size_t order = std::min({e_cols.size(), h_cols.size(), target_order});
  if (order == 0)
  {
    throw Error(ErrorCode::DegenerateSource,
                "every Krylov candidate deflated; the sources do not excite the system");
  }
  ProjectionBasis basis;
  basis.v1 = Stack(e_cols, ne, order);
  basis.v2 = Stack(h_cols, nh, order);
  return basis;
}

Eigen::MatrixXd ReducedModel::UpdateR() const
{
  const auto ne = num_electric(), nh = num_magnetic();
  Eigen::MatrixXd r(ne + nh, ne + nh);
  r.topLeftCorner(ne, ne) = d_eps / dt;
  r.bottomRightCorner(nh, nh) = d_mu / dt;
  r.topRightCorner(ne, nh) = -0.5 * curl;
  r.bottomLeftCorner(nh, ne) = -0.5 * curl.transpose();
  return r;
}

Eigen::MatrixXd ReducedModel::UpdateF() const
{
  const auto ne = num_electric(), nh = num_magnetic();
  Eigen::MatrixXd f(ne + nh, ne + nh);
  f.topLeftCorner(ne, ne) = 0.5 * d_sigma_e;
  f.bottomRightCorner(nh, nh) = 0.5 * d_sigma_m;
  f.topRightCorner(ne, nh) = 0.5 * curl;
  f.bottomLeftCorner(nh, ne) = -0.5 * curl.transpose();
  return f;
}

void ReducedModel::Save(std::ostream &os) const
{
  if (num_electric() != num_magnetic())
  {
    throw Error(ErrorCode::InvalidParameter, "only square reduced models can be serialized");
  }
  WriteU64(os, static_cast<std::uint64_t>(num_electric()));
  WriteU64(os, static_cast<std::uint64_t>(num_inputs()));
  WriteF64(os, dt);
  for (const auto *block : {&d_eps, &d_mu, &d_sigma_e, &d_sigma_m, &curl, &input})
  {
    WriteBlock(os, *block);
  }
  if (!os)
  {
    throw Error(ErrorCode::Io, "failed to write reduced model");
  }
}

ReducedModel ReducedModel::Load(std::istream &is)
{
  const std::uint64_t order = ReadU64(is);
  const std::uint64_t inputs = ReadU64(is);
  if (order > (1u << 20) || inputs > (1u << 20))
  {
    throw Error(ErrorCode::Io, "reduced model header is implausible");
  }
  const auto n = static_cast<Eigen::Index>(order);
  const auto k = static_cast<Eigen::Index>(inputs);
  ReducedModel model;
  model.dt = ReadF64(is);
  model.d_eps = ReadBlock(is, n, n);
  model.d_mu = ReadBlock(is, n, n);
  model.d_sigma_e = ReadBlock(is, n, n);
  model.d_sigma_m = ReadBlock(is, n, n);
  model.curl = ReadBlock(is, n, n);
  model.input = ReadBlock(is, 2 * n, k);
  return model;
}

ReducedModel Project(const SystemMatrices &m, const ProjectionBasis &basis, double dt)
{
  const auto ne = static_cast<Eigen::Index>(m.num_electric());
  const auto nh = static_cast<Eigen::Index>(m.num_magnetic());
  if (basis.v1.rows() != ne || basis.v2.rows() != nh || basis.v1.cols() != basis.v2.cols())
  {
    throw Error(ErrorCode::InvalidParameter, "projection basis does not match the system");
  }
  const auto &v1 = basis.v1;
  const auto &v2 = basis.v2;
  ReducedModel r;
  r.dt = dt;
  r.d_eps = Symmetrized(v1.transpose() * (m.eps.asDiagonal() * v1));
  r.d_mu = Symmetrized(v2.transpose() * (m.mu.asDiagonal() * v2));
  r.d_sigma_e = Symmetrized(v1.transpose() * (m.sigma_e.asDiagonal() * v1));
  r.d_sigma_m = Symmetrized(v2.transpose() * (m.sigma_m.asDiagonal() * v2));
  r.curl = v1.transpose() * (m.curl * v2);
  const Eigen::MatrixXd b = Eigen::MatrixXd(m.input);
  r.input.resize(v1.cols() + v2.cols(), b.cols());
  r.input.topRows(v1.cols()) = v1.transpose() * b.topRows(ne);
  r.input.bottomRows(v2.cols()) = v2.transpose() * b.bottomRows(nh);
  return r;
}

ReducedModel FromSystem(const SystemMatrices &m, double dt)
{
  ReducedModel r;
  r.dt = dt;
  r.d_eps = m.eps.asDiagonal();
  r.d_mu = m.mu.asDiagonal();
  r.d_sigma_e = m.sigma_e.asDiagonal();
  r.d_sigma_m = m.sigma_m.asDiagonal();
  r.curl = Eigen::MatrixXd(m.curl);
  r.input = Eigen::MatrixXd(m.input);
  return r;
}

Eigen::MatrixXcd TransferFunction(const Eigen::MatrixXd &r, const Eigen::MatrixXd &f,
                                  const Eigen::MatrixXd &b, Complex z)
{
  const Eigen::MatrixXcd a = z * (r + f).cast<Complex>() - (r - f).cast<Complex>();
  const Eigen::MatrixXcd bc = b.cast<Complex>();
  return bc.transpose() * a.partialPivLu().solve(bc);
}

}  // namespace fdtdmor
