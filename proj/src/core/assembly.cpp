// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "assembly.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>

#include "error.hpp"
#include "linalg.hpp"

namespace fdtdmor
{

namespace
{

bool OnPecBackedFace(const GridSpec &grid, const BoundarySpec &boundaries, Component c,
                     const Index3 &idx)
{
  // Tangential electric components sit on integer positions along every axis except their
  // own; those at index 0 or n lie on a face.
  for (int a : grid.ActiveAxes())
  {
    if (a == ComponentAxis(c))
    {
      continue;
    }
    for (bool high : {false, true})
    {
      if (idx[a] != (high ? grid.cells[a] : 0))
      {
        continue;
      }
      if (boundaries.face(a, high).kind != FaceCondition::Kind::Pmc)
      {
        return true;
      }
    }
  }
  return false;
}

bool InsidePecBox(const GridSpec &grid, Component c, const Index3 &idx, const PecBox &box)
{
  for (int a : grid.ActiveAxes())
  {
    const int first = idx[a];
    const int last = (a == ComponentAxis(c)) ? idx[a] + 1 : idx[a];
    if (first < box.lo[a] || last > box.hi[a])
    {
      return false;
    }
  }
  return true;
}

template <typename Fn>
void ForEachIndex(const Index3 &ext, Fn &&fn)
{
  for (int i = 0; i < ext[0]; i++)
  {
    for (int j = 0; j < ext[1]; j++)
    {
      for (int k = 0; k < ext[2]; k++)
      {
        fn(Index3{i, j, k});
      }
    }
  }
}

struct CurlEntry
{
  Component e;
  Index3 e_index;
  double value;
};

// Entries of (curl E) at a magnetic location: (curl E)_c = d_a E_b - d_b E_a with
// (c, a, b) cyclic. A magnetic unknown sits on half-integer positions along a and b, so
// the neighbouring electric samples along a are at p_a and p_a + 1.
std::vector<CurlEntry> CurlOfElectric(const GridSpec &grid, Component h, const Index3 &p)
{
  std::vector<CurlEntry> out;
  const int c = ComponentAxis(h);
  const int a = (c + 1) % 3;
  const int b = (c + 2) % 3;
  const auto e_comp = [](int axis) { return static_cast<Component>(axis); };
  const auto add = [&](int deriv_axis, Component e, double sign)
  {
    if (!grid.Active(deriv_axis))
    {
      return;
    }
    const double inv = sign / grid.cell_sizes[deriv_axis];
    Index3 lo = p, hi = p;
    hi[deriv_axis] += 1;
    out.push_back({e, hi, inv});
    out.push_back({e, lo, -inv});
  };
  add(a, e_comp(b), +1.0);
  add(b, e_comp(a), -1.0);
  return out;
}

}  // namespace

UnknownMap UnknownMap::Build(const GridSpec &grid, const BoundarySpec &boundaries,
                             const std::vector<PecBox> &pec_boxes)
{
  grid.Validate();
  UnknownMap map;
  map.grid_ = grid;
  const auto e_comps = ActiveElectricComponents(grid.dimensionality);
  const auto h_comps = ActiveMagneticComponents(grid.dimensionality);

  for (Component c : e_comps)
  {
    const auto ext = ComponentExtents(grid, c);
    auto &rows = map.rows_[static_cast<int>(c)];
    rows.assign(static_cast<std::size_t>(ext[0]) * ext[1] * ext[2], -1);
    ForEachIndex(ext,
                 [&](const Index3 &idx)
                 {
                   if (OnPecBackedFace(grid, boundaries, c, idx))
                   {
                     return;
                   }
                   for (const auto &box : pec_boxes)
                   {
                     if (InsidePecBox(grid, c, idx, box))
                     {
                       return;
                     }
                   }
                   rows[map.Flat(c, idx)] = static_cast<long>(map.e_locations_.size());
                   map.e_locations_.push_back({c, idx});
                 });
  }

  for (Component c : h_comps)
  {
    const auto ext = ComponentExtents(grid, c);
    auto &rows = map.rows_[static_cast<int>(c)];
    rows.assign(static_cast<std::size_t>(ext[0]) * ext[1] * ext[2], -1);
    ForEachIndex(ext,
                 [&](const Index3 &idx)
                 {
                   bool coupled = false;
                   for (const auto &entry : CurlOfElectric(grid, c, idx))
                   {
                     if (map.Find(entry.e, entry.e_index))
                     {
                       coupled = true;
                       break;
                     }
                   }
                   if (coupled)
                   {
                     rows[map.Flat(c, idx)] = static_cast<long>(map.h_locations_.size());
                     map.h_locations_.push_back({c, idx});
                   }
                 });
  }
  return map;
}

std::size_t UnknownMap::Flat(Component c, const Index3 &idx) const
{
  const auto ext = ComponentExtents(grid_, c);
  return (static_cast<std::size_t>(idx[0]) * ext[1] + idx[1]) * ext[2] + idx[2];
}

std::optional<std::size_t> UnknownMap::Find(Component c, const Index3 &idx) const
{
  const auto &rows = rows_[static_cast<int>(c)];
  if (rows.empty() || !InsideComponent(grid_, c, idx))
  {
    return std::nullopt;
  }
  const long r = rows[Flat(c, idx)];
  if (r < 0)
  {
    return std::nullopt;
  }
  return static_cast<std::size_t>(r);
}

std::optional<std::size_t> UnknownMap::StateRow(Component c, const Index3 &idx) const
{
  auto r = Find(c, idx);
  if (r && !IsElectric(c))
  {
    *r += num_electric();
  }
  return r;
}

bool SystemMatrices::Lossless() const
{
  return (sigma_e.size() == 0 || sigma_e.cwiseAbs().maxCoeff() == 0.0) &&
         (sigma_m.size() == 0 || sigma_m.cwiseAbs().maxCoeff() == 0.0);
}

SystemMatrices Assemble(const GridSpec &grid, const MaterialMap &materials,
                        const BoundarySpec &boundaries, const std::vector<SourceSpec> &sources,
                        const std::vector<PecBox> &pec_boxes)
{
  grid.Validate();
  materials.Validate();
  boundaries.Validate(grid);
  if (materials.size() != grid.CellCount())
  {
    throw Error(ErrorCode::InvalidGrid, "material map does not match the grid");
  }

  auto unknowns = std::make_shared<UnknownMap>(UnknownMap::Build(grid, boundaries, pec_boxes));
  const auto ne = unknowns->num_electric();
  const auto nh = unknowns->num_magnetic();

  SystemMatrices m;
  m.eps.resize(ne);
  m.sigma_e.resize(ne);
  for (std::size_t r = 0; r < ne; r++)
  {
    const auto &loc = unknowns->ElectricLocation(r);
    const auto cell = grid.CellIndex(OwningCell(grid, loc.component, loc.index));
    m.eps[r] = materials.eps(cell);
    m.sigma_e[r] = materials.sigma_e(cell);
  }
  m.mu.resize(nh);
  m.sigma_m.resize(nh);
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t r = 0; r < nh; r++)
  {
    const auto &loc = unknowns->MagneticLocation(r);
    const auto cell = grid.CellIndex(OwningCell(grid, loc.component, loc.index));
    m.mu[r] = materials.mu(cell);
    m.sigma_m[r] = materials.sigma_m(cell);
    // K = -C^T where C is the discrete curl of E evaluated at magnetic locations.
    for (const auto &entry : CurlOfElectric(grid, loc.component, loc.index))
    {
      if (const auto e = unknowns->Find(entry.e, entry.e_index))
      {
        trip.emplace_back(static_cast<int>(*e), static_cast<int>(r), -entry.value);
      }
    }
  }
  m.curl.resize(static_cast<Eigen::Index>(ne), static_cast<Eigen::Index>(nh));
  m.curl.setFromTriplets(trip.begin(), trip.end());

  trip.clear();
  for (std::size_t s = 0; s < sources.size(); s++)
  {
    const auto &src = sources[s];
    src.waveform.Validate();
    const bool electric = src.kind == SourceKind::ElectricCurrent;
    if (IsElectric(src.component) != electric)
    {
      throw Error(ErrorCode::Stamp, "source '" + src.name + "': component " +
                                        std::string(ComponentName(src.component)) +
                                        " does not match the current kind");
    }
    for (const auto &loc : src.locations)
    {
      const auto row = unknowns->StateRow(src.component, loc);
      if (!row)
      {
        throw Error(ErrorCode::Stamp,
                    "source '" + src.name + "' location (" + std::to_string(loc[0]) + ", " +
                        std::to_string(loc[1]) + ", " + std::to_string(loc[2]) +
                        ") is outside the grid or on an eliminated unknown");
      }
      trip.emplace_back(static_cast<int>(*row), static_cast<int>(s), -1.0);
    }
  }
  m.input.resize(static_cast<Eigen::Index>(ne + nh), static_cast<Eigen::Index>(sources.size()));
  m.input.setFromTriplets(trip.begin(), trip.end(), [](double a, double) { return a; });
  m.unknowns = std::move(unknowns);
  return m;
}

std::vector<FieldSample> Disassemble(const UnknownMap &unknowns, const Eigen::VectorXd &state)
{
  const auto ne = unknowns.num_electric();
  if (static_cast<std::size_t>(state.size()) != ne + unknowns.num_magnetic())
  {
    throw Error(ErrorCode::InvalidParameter, "state length does not match the unknown map");
  }
  std::vector<FieldSample> out;
  out.reserve(static_cast<std::size_t>(state.size()));
  for (std::size_t r = 0; r < static_cast<std::size_t>(state.size()); r++)
  {
    const auto &loc = r < ne ? unknowns.ElectricLocation(r) : unknowns.MagneticLocation(r - ne);
    out.push_back({loc.component, loc.index, state[static_cast<Eigen::Index>(r)]});
  }
  return out;
}

UpdatePair BuildUpdatePair(const SystemMatrices &m, double dt)
{
  if (!(dt > 0.0))
  {
    throw Error(ErrorCode::InvalidParameter, "timestep must be positive");
  }
  const auto ne = static_cast<int>(m.num_electric());
  const auto n = static_cast<int>(m.size());
  std::vector<Eigen::Triplet<double>> r_trip, f_trip;
  for (int i = 0; i < ne; i++)
  {
    r_trip.emplace_back(i, i, m.eps[i] / dt);
    f_trip.emplace_back(i, i, 0.5 * m.sigma_e[i]);
  }
  for (int i = 0; i < static_cast<int>(m.num_magnetic()); i++)
  {
    r_trip.emplace_back(ne + i, ne + i, m.mu[i] / dt);
    f_trip.emplace_back(ne + i, ne + i, 0.5 * m.sigma_m[i]);
  }
  for (int col = 0; col < m.curl.outerSize(); col++)
  {
    for (SparseMatrix::InnerIterator it(m.curl, col); it; ++it)
    {
      const int e = static_cast<int>(it.row());
      const int h = ne + static_cast<int>(it.col());
      const double half = 0.5 * it.value();
      r_trip.emplace_back(e, h, -half);
      r_trip.emplace_back(h, e, -half);
      f_trip.emplace_back(e, h, half);
      f_trip.emplace_back(h, e, -half);
    }
  }
  UpdatePair pair;
  pair.R.resize(n, n);
  pair.F.resize(n, n);
  pair.R.setFromTriplets(r_trip.begin(), r_trip.end());
  pair.F.setFromTriplets(f_trip.begin(), f_trip.end());
  pair.num_electric = m.num_electric();
  pair.dt = dt;
  return pair;
}

FullStabilityReport FullStabilityCheck(const UpdatePair &pair)
{
  FullStabilityReport report;
  const auto n = pair.R.rows();
  const auto ne = static_cast<Eigen::Index>(pair.num_electric);
  const auto nh = n - ne;

  // F + F^T is diagonal; its diagonal holds the conductivities.
  const SparseMatrix sym = SparseMatrix(pair.F.transpose()) + pair.F;
  report.min_conductivity = n > 0 ? Eigen::VectorXd(sym.diagonal()).minCoeff() : 0.0;
  report.passive = report.min_conductivity >= 0.0;

  const Eigen::VectorXd diag = Eigen::VectorXd(pair.R.diagonal()) * pair.dt;
  const Eigen::VectorXd eps = diag.head(ne);
  const Eigen::VectorXd mu = diag.tail(nh);
  const Eigen::MatrixXd curl = -2.0 * Eigen::MatrixXd(pair.R.block(0, ne, ne, nh));
  report.limit = 2.0 / pair.dt;
  if (eps.size() > 0 && (eps.minCoeff() <= 0.0 || (mu.size() > 0 && mu.minCoeff() <= 0.0)))
  {
    report.r_positive = false;
    report.max_singular_value = std::numeric_limits<double>::infinity();
    return report;
  }
  const Eigen::VectorXd sv = linalg::NormalizedCurlSingularValues(eps, mu, curl);
  report.max_singular_value = sv.size() > 0 ? sv.maxCoeff() : 0.0;
  report.r_positive = report.max_singular_value < report.limit;
  return report;
}

void WriteCoordinateList(std::ostream &os, const SparseMatrix &m)
{
  os << std::setprecision(17);
  for (int col = 0; col < m.outerSize(); col++)
  {
    for (SparseMatrix::InnerIterator it(m, col); it; ++it)
    {
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
}

void WriteSystemDump(const SystemMatrices &m, const std::string &directory)
{
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  const auto open = [&](const char *name)
  {
    std::ofstream os(fs::path(directory) / name);
    if (!os)
    {
      throw Error(ErrorCode::Io, "cannot write " + (fs::path(directory) / name).string());
    }
    return os;
  };
  {
    auto os = open("K.coo");
    WriteCoordinateList(os, m.curl);
  }
  {
    auto os = open("B.coo");
    WriteCoordinateList(os, m.input);
  }
  const auto diag = [&](const char *name, const Eigen::VectorXd &v)
  {
    auto os = open(name);
    os << std::setprecision(17);
    for (Eigen::Index i = 0; i < v.size(); i++)
    {
      os << i << ' ' << i << ' ' << v[i] << '\n';
    }
  };
  diag("D_eps.coo", m.eps);
  diag("D_mu.coo", m.mu);
  diag("D_sigma_e.coo", m.sigma_e);
  diag("D_sigma_m.coo", m.sigma_m);
}

}  // namespace fdtdmor
