// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "grid.hpp"

#include <algorithm>
#include <limits>

#include "error.hpp"

namespace fdtdmor
{

namespace
{

constexpr std::array<std::string_view, 6> kComponentNames = {"Ex", "Ey", "Ez", "Hx", "Hy", "Hz"};

// Staggering of a component along an axis: electric components sit on half-integer
// positions along their own axis, magnetic components along the other two.
bool IsHalfIndex(Component c, int axis)
{
  const bool own = ComponentAxis(c) == axis;
  return IsElectric(c) ? own : !own;
}

}  // namespace

std::string_view ComponentName(Component c)
{
  return kComponentNames[static_cast<int>(c)];
}

std::optional<Component> ParseComponent(std::string_view name)
{
  for (std::size_t i = 0; i < kComponentNames.size(); i++)
  {
    if (kComponentNames[i] == name)
    {
      return static_cast<Component>(i);
    }
  }
  return std::nullopt;
}

std::vector<int> ActiveAxesFor(int dimensionality)
{
  switch (dimensionality)
  {
    case 1:
      return {2};
    case 2:
      return {0, 1};
    case 3:
      return {0, 1, 2};
  }
  throw Error(ErrorCode::InvalidGrid,
              "dimensionality must be 1, 2 or 3 (got " + std::to_string(dimensionality) + ")");
}

std::vector<Component> ActiveElectricComponents(int dimensionality)
{
  switch (dimensionality)
  {
    case 1:
      return {Component::Ex};
    case 2:
      return {Component::Ez};
    default:
      return {Component::Ex, Component::Ey, Component::Ez};
  }
}

std::vector<Component> ActiveMagneticComponents(int dimensionality)
{
  switch (dimensionality)
  {
    case 1:
      return {Component::Hy};
    case 2:
      return {Component::Hx, Component::Hy};
    default:
      return {Component::Hx, Component::Hy, Component::Hz};
  }
}

GridSpec GridSpec::Make(int dimensionality, std::span<const int> counts,
                        std::span<const double> sizes)
{
  const auto axes = ActiveAxesFor(dimensionality);
  if (counts.size() != axes.size() || sizes.size() != axes.size())
  {
    throw Error(ErrorCode::InvalidGrid, "a " + std::to_string(dimensionality) +
                                            "-D grid needs " + std::to_string(axes.size()) +
                                            " cell counts and cell sizes");
  }
  GridSpec grid;
  grid.dimensionality = dimensionality;
  for (std::size_t i = 0; i < axes.size(); i++)
  {
    grid.cells[axes[i]] = counts[i];
    grid.cell_sizes[axes[i]] = sizes[i];
  }
  grid.Validate();
  return grid;
}

bool GridSpec::Active(int axis) const
{
  const auto axes = ActiveAxesFor(dimensionality);
  return std::find(axes.begin(), axes.end(), axis) != axes.end();
}

std::vector<int> GridSpec::ActiveAxes() const
{
  return ActiveAxesFor(dimensionality);
}

std::size_t GridSpec::CellCount() const
{
  return static_cast<std::size_t>(cells[0]) * cells[1] * cells[2];
}

std::size_t GridSpec::CellIndex(const Index3 &cell) const
{
  return (static_cast<std::size_t>(cell[0]) * cells[1] + cell[1]) * cells[2] + cell[2];
}

void GridSpec::Validate() const
{
  ActiveAxesFor(dimensionality);
  for (int a = 0; a < 3; a++)
  {
    if (Active(a))
    {
      if (cells[a] < 1)
      {
        throw Error(ErrorCode::InvalidGrid, "cell count must be >= 1 on active axes");
      }
      if (!(cell_sizes[a] > 0.0) || !std::isfinite(cell_sizes[a]))
      {
        throw Error(ErrorCode::InvalidGrid, "cell sizes must be positive");
      }
    }
    else if (cells[a] != 1)
    {
      throw Error(ErrorCode::InvalidGrid, "inactive axes must hold exactly one cell");
    }
  }
}

MaterialMap::MaterialMap(const GridSpec &grid, const Medium &background) : grid_(grid)
{
  const auto n = grid.CellCount();
  eps_.assign(n, background.eps_r * constants::eps0);
  mu_.assign(n, background.mu_r * constants::mu0);
  sigma_e_.assign(n, background.sigma_e);
  sigma_m_.assign(n, background.sigma_m);
}

void MaterialMap::FillBox(const Index3 &lo, const Index3 &hi, const Medium &medium)
{
  Index3 a, b;
  for (int d = 0; d < 3; d++)
  {
    a[d] = std::clamp(lo[d], 0, grid_.cells[d] - 1);
    b[d] = std::clamp(hi[d], 0, grid_.cells[d] - 1);
  }
  for (int i = a[0]; i <= b[0]; i++)
  {
    for (int j = a[1]; j <= b[1]; j++)
    {
      for (int k = a[2]; k <= b[2]; k++)
      {
        const auto c = grid_.CellIndex({i, j, k});
        eps_[c] = medium.eps_r * constants::eps0;
        mu_[c] = medium.mu_r * constants::mu0;
        sigma_e_[c] = medium.sigma_e;
        sigma_m_[c] = medium.sigma_m;
      }
    }
  }
}

void MaterialMap::AddConductivity(std::size_t cell, double sigma_e, double sigma_m)
{
  sigma_e_[cell] += sigma_e;
  sigma_m_[cell] += sigma_m;
}

void MaterialMap::ScalePermittivityPermeability(double factor)
{
  for (auto &e : eps_)
  {
    e *= factor;
  }
  for (auto &m : mu_)
  {
    m *= factor;
  }
}

void MaterialMap::Validate() const
{
  for (std::size_t c = 0; c < eps_.size(); c++)
  {
    if (!(eps_[c] > 0.0) || !(mu_[c] > 0.0))
    {
      throw Error(ErrorCode::InvalidParameter,
                  "permittivity and permeability must be positive (cell " +
                      std::to_string(c) + ")");
    }
    if (!(sigma_e_[c] >= 0.0) || !(sigma_m_[c] >= 0.0))
    {
      throw Error(ErrorCode::InvalidParameter,
                  "conductivities must be non-negative (cell " + std::to_string(c) + ")");
    }
  }
}

void BoundarySpec::Validate(const GridSpec &grid) const
{
  for (int axis : grid.ActiveAxes())
  {
    int layers = 0;
    for (bool high : {false, true})
    {
      const auto &f = face(axis, high);
      if (f.kind != FaceCondition::Kind::MatchedAbsorber)
      {
        continue;
      }
      const auto &a = f.absorber;
      if (a.thickness < 1)
      {
        throw Error(ErrorCode::InvalidParameter, "absorber thickness must be >= 1");
      }
      if (a.poly_order < 0)
      {
        throw Error(ErrorCode::InvalidParameter, "absorber polynomial order must be >= 0");
      }
      if (!(a.target_reflection > 0.0 && a.target_reflection < 1.0))
      {
        throw Error(ErrorCode::InvalidParameter, "absorber target reflection must be in (0, 1)");
      }
      layers += a.thickness;
    }
    if (layers > grid.cells[axis])
    {
      throw Error(ErrorCode::InvalidParameter, "absorber layers exceed the grid extent");
    }
  }
}

Waveform Waveform::Gaussian(double f_max, double amplitude)
{
  Waveform w;
  w.kind = Kind::GaussianPulse;
  w.f_max = f_max;
  w.amplitude = amplitude;
  return w;
}

Waveform Waveform::Sine(double f0, double amplitude)
{
  Waveform w;
  w.kind = Kind::Sinusoid;
  w.f0 = f0;
  w.amplitude = amplitude;
  return w;
}

Waveform Waveform::Samples(std::vector<double> values)
{
  Waveform w;
  w.kind = Kind::UserSamples;
  w.samples = std::move(values);
  return w;
}

double Waveform::GaussianWidth() const
{
  // |G(f)| / |G(0)| = exp(-2 pi^2 f^2 tau^2) = 0.1 at f = f_max.
  return std::sqrt(std::log(10.0) / 2.0) / (std::numbers::pi * f_max);
}

double Waveform::Value(double t, std::size_t step) const
{
  switch (kind)
  {
    case Kind::GaussianPulse:
    {
      const double tau = GaussianWidth();
      const double x = (t - 4.0 * tau) / tau;
      return amplitude * std::exp(-0.5 * x * x);
    }
    case Kind::Sinusoid:
      return amplitude * std::sin(2.0 * std::numbers::pi * f0 * t);
    case Kind::UserSamples:
      return (step >= 1 && step <= samples.size()) ? amplitude * samples[step - 1] : 0.0;
  }
  return 0.0;
}

void Waveform::Validate() const
{
  if (kind == Kind::GaussianPulse && !(f_max > 0.0))
  {
    throw Error(ErrorCode::InvalidParameter, "Gaussian pulse f_max must be positive");
  }
  if (kind == Kind::Sinusoid && !(f0 > 0.0))
  {
    throw Error(ErrorCode::InvalidParameter, "sinusoid frequency must be positive");
  }
}

Index3 ComponentExtents(const GridSpec &grid, Component c)
{
  Index3 ext = {1, 1, 1};
  for (int a = 0; a < 3; a++)
  {
    if (grid.Active(a))
    {
      ext[a] = IsHalfIndex(c, a) ? grid.cells[a] : grid.cells[a] + 1;
    }
  }
  return ext;
}

bool InsideComponent(const GridSpec &grid, Component c, const Index3 &idx)
{
  const auto ext = ComponentExtents(grid, c);
  for (int a = 0; a < 3; a++)
  {
    if (idx[a] < 0 || idx[a] >= ext[a])
    {
      return false;
    }
  }
  return true;
}

Index3 OwningCell(const GridSpec &grid, Component, const Index3 &idx)
{
  Index3 cell = {0, 0, 0};
  for (int a = 0; a < 3; a++)
  {
    if (grid.Active(a))
    {
      cell[a] = std::min(idx[a], grid.cells[a] - 1);
    }
  }
  return cell;
}

double CflMaxTimestep(const GridSpec &grid, const MaterialMap &materials)
{
  grid.Validate();
  double inv_sq = 0.0;
  for (int a : grid.ActiveAxes())
  {
    inv_sq += 1.0 / (grid.cell_sizes[a] * grid.cell_sizes[a]);
  }
  const double geometric = 1.0 / std::sqrt(inv_sq);
  double dt = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < materials.size(); c++)
  {
    // 1/(c sqrt(...)) with c = 1/sqrt(eps mu).
    dt = std::min(dt, std::sqrt(materials.eps(c) * materials.mu(c)) * geometric);
  }
  return dt;
}

double AbsorberMaxConductivity(int thickness, int poly_order, double target_reflection,
                               double cell_size, double wave_impedance)
{
  if (thickness < 1)
  {
    throw Error(ErrorCode::InvalidParameter, "absorber thickness must be >= 1");
  }
  if (!(target_reflection > 0.0 && target_reflection < 1.0))
  {
    throw Error(ErrorCode::InvalidParameter, "absorber target reflection must be in (0, 1)");
  }
  if (poly_order < 0)
  {
    throw Error(ErrorCode::InvalidParameter, "absorber polynomial order must be >= 0");
  }
  const double d = thickness * cell_size;
  return -(poly_order + 1) * std::log(target_reflection) / (2.0 * wave_impedance * d);
}

double AbsorberConductivity(double depth, double total_depth, int poly_order, double sigma_max)
{
  if (poly_order == 0)
  {
    return sigma_max;
  }
  return sigma_max * std::pow(std::clamp(depth / total_depth, 0.0, 1.0), poly_order);
}

AbsorberProfile MakeAbsorberProfile(int thickness, int poly_order, double target_reflection,
                                    double cell_size, double wave_impedance)
{
  AbsorberProfile p;
  p.sigma_max = AbsorberMaxConductivity(thickness, poly_order, target_reflection, cell_size,
                                        wave_impedance);
  const double d = thickness * cell_size;
  for (int c = 0; c < thickness; c++)
  {
    const double se = AbsorberConductivity((c + 0.5) * cell_size, d, poly_order, p.sigma_max);
    p.sigma_e.push_back(se);
    p.sigma_m.push_back(se * wave_impedance * wave_impedance);
  }
  return p;
}

void ApplyAbsorbers(const BoundarySpec &boundaries, MaterialMap &materials)
{
  const auto &grid = materials.grid();
  boundaries.Validate(grid);
  std::vector<double> add_e(materials.size(), 0.0), add_m(materials.size(), 0.0);
  for (int axis : grid.ActiveAxes())
  {
    for (bool high : {false, true})
    {
      const auto &f = boundaries.face(axis, high);
      if (f.kind != FaceCondition::Kind::MatchedAbsorber)
      {
        continue;
      }
      const int t = f.absorber.thickness;
      const int n = grid.cells[axis];
      for (int i = 0; i < grid.cells[0]; i++)
      {
        for (int j = 0; j < grid.cells[1]; j++)
        {
          for (int k = 0; k < grid.cells[2]; k++)
          {
            const Index3 cell = {i, j, k};
            const int along = cell[axis];
            const int depth = high ? along - (n - t) : (t - 1 - along);
            if (depth < 0 || depth >= t)
            {
              continue;
            }
            const auto id = grid.CellIndex(cell);
            const double eta = std::sqrt(materials.mu(id) / materials.eps(id));
            const double smax =
                AbsorberMaxConductivity(t, f.absorber.poly_order, f.absorber.target_reflection,
                                        grid.cell_sizes[axis], eta);
            const double se = AbsorberConductivity((depth + 0.5) * grid.cell_sizes[axis],
                                                   t * grid.cell_sizes[axis],
                                                   f.absorber.poly_order, smax);
            add_e[id] += se;
            add_m[id] += se * eta * eta;
          }
        }
      }
    }
  }
  for (std::size_t c = 0; c < materials.size(); c++)
  {
    materials.AddConductivity(c, add_e[c], add_m[c]);
  }
}

}  // namespace fdtdmor
