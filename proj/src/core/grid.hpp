// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FDTDMOR_CORE_GRID_HPP
#define FDTDMOR_CORE_GRID_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fdtdmor
{

namespace constants
{

inline constexpr double c0 = 299792458.0;
inline constexpr double eps0 = 8.8541878128e-12;
inline constexpr double mu0 = 4.0e-7 * std::numbers::pi;

inline double eta0()
{
  return std::sqrt(mu0 / eps0);
}

}  // namespace constants

using Index3 = std::array<int, 3>;

enum class Component
{
  Ex,
  Ey,
  Ez,
  Hx,
  Hy,
  Hz
};

inline bool IsElectric(Component c)
{
  return c == Component::Ex || c == Component::Ey || c == Component::Ez;
}

// Cartesian axis (0, 1, 2) along which the component points.
inline int ComponentAxis(Component c)
{
  return static_cast<int>(c) % 3;
}

std::string_view ComponentName(Component c);
std::optional<Component> ParseComponent(std::string_view name);

// Uniform spacing per axis. Active axes follow the dimensionality: 1-D runs along z
// (Ex/Hy), 2-D spans x-y (TMz: Ez/Hx/Hy), 3-D uses all six components. Inactive axes
// hold exactly one cell.
struct GridSpec
{
  int dimensionality = 3;
  std::array<int, 3> cells = {1, 1, 1};
  std::array<double, 3> cell_sizes = {1.0, 1.0, 1.0};

  // Builds a grid from per-active-axis arrays, e.g. Make(2, {51, 51}, {0.02, 0.02}).
  static GridSpec Make(int dimensionality, std::span<const int> counts,
                       std::span<const double> sizes);

  bool Active(int axis) const;
  std::vector<int> ActiveAxes() const;
  std::size_t CellCount() const;
  std::size_t CellIndex(const Index3 &cell) const;

  // Throws InvalidGrid on bad counts or non-positive sizes.
  void Validate() const;
};

std::vector<int> ActiveAxesFor(int dimensionality);
std::vector<Component> ActiveElectricComponents(int dimensionality);
std::vector<Component> ActiveMagneticComponents(int dimensionality);

// Relative material parameters plus absolute conductivities.
struct Medium
{
  double eps_r = 1.0;
  double mu_r = 1.0;
  double sigma_e = 0.0;  // S/m
  double sigma_m = 0.0;  // Ohm/m
};

// Cell-centered material values in absolute units.
class MaterialMap
{
public:
  MaterialMap() = default;
  MaterialMap(const GridSpec &grid, const Medium &background = {});

  // Inclusive cell-index box; axes outside the grid are clamped.
  void FillBox(const Index3 &lo, const Index3 &hi, const Medium &medium);
  void AddConductivity(std::size_t cell, double sigma_e, double sigma_m);
  void ScalePermittivityPermeability(double factor);

  std::size_t size() const { return eps_.size(); }
  double eps(std::size_t cell) const { return eps_[cell]; }
  double mu(std::size_t cell) const { return mu_[cell]; }
  double sigma_e(std::size_t cell) const { return sigma_e_[cell]; }
  double sigma_m(std::size_t cell) const { return sigma_m_[cell]; }
  const GridSpec &grid() const { return grid_; }

  // eps, mu > 0 and conductivities >= 0 everywhere.
  void Validate() const;

private:
  GridSpec grid_;
  std::vector<double> eps_, mu_, sigma_e_, sigma_m_;
};

struct AbsorberSpec
{
  int thickness = 5;
  int poly_order = 4;
  double target_reflection = 1.0e-6;
};

struct FaceCondition
{
  enum class Kind
  {
    Pec,
    Pmc,
    MatchedAbsorber
  };
  Kind kind = Kind::Pec;
  AbsorberSpec absorber;
};

// Faces ordered x_lo, x_hi, y_lo, y_hi, z_lo, z_hi. Faces on inactive axes are ignored.
// A matched absorber is a lossy layer inside the grid backed by a PEC wall.
struct BoundarySpec
{
  std::array<FaceCondition, 6> faces;

  const FaceCondition &face(int axis, bool high) const { return faces[2 * axis + (high ? 1 : 0)]; }
  FaceCondition &face(int axis, bool high) { return faces[2 * axis + (high ? 1 : 0)]; }
  void Validate(const GridSpec &grid) const;
};

// Perfect conductor occupying the inclusive node-index box [lo, hi]. Tangential electric
// unknowns whose edges lie inside the box are eliminated.
struct PecBox
{
  Index3 lo = {0, 0, 0};
  Index3 hi = {0, 0, 0};
};

struct Waveform
{
  enum class Kind
  {
    GaussianPulse,
    Sinusoid,
    UserSamples
  };
  Kind kind = Kind::GaussianPulse;
  double f_max = 0.0;  // GaussianPulse: spectrum 20 dB down at f_max
  double f0 = 0.0;     // Sinusoid
  double amplitude = 1.0;
  std::vector<double> samples;  // UserSamples: value for step n+1 is samples[n]

  static Waveform Gaussian(double f_max, double amplitude = 1.0);
  static Waveform Sine(double f0, double amplitude = 1.0);
  static Waveform Samples(std::vector<double> values);

  double GaussianWidth() const;
  double GaussianDelay() const { return 4.0 * GaussianWidth(); }

  // Value at time t; step is the 1-based index of the update it drives.
  double Value(double t, std::size_t step) const;
  void Validate() const;
};

enum class SourceKind
{
  ElectricCurrent,
  MagneticCurrent
};

// One input channel: every location shares the waveform (line/plane sources).
struct SourceSpec
{
  std::string name;
  SourceKind kind = SourceKind::ElectricCurrent;
  Component component = Component::Ez;
  std::vector<Index3> locations;
  Waveform waveform;
};

struct ProbeSpec
{
  std::string name;
  Component component = Component::Ez;
  Index3 location = {0, 0, 0};
};

// Extents of a field component's staggered index space. Along active axes a component
// lives on half-integer positions (n entries) or integer positions (n+1 entries).
Index3 ComponentExtents(const GridSpec &grid, Component c);
bool InsideComponent(const GridSpec &grid, Component c, const Index3 &idx);

// Cell owning a staggered location: integer indices map to min(i, n-1).
Index3 OwningCell(const GridSpec &grid, Component c, const Index3 &idx);

// Largest stable leap-frog timestep: min over cells of 1/(c sqrt(sum 1/d_i^2)).
double CflMaxTimestep(const GridSpec &grid, const MaterialMap &materials);

struct AbsorberProfile
{
  double sigma_max = 0.0;
  std::vector<double> sigma_e;  // per cell, inner edge first
  std::vector<double> sigma_m;
};

// sigma_max = -(m+1) ln(R0) / (2 eta d); the graded conductivity at depth x from the
// inner edge is sigma_max (x/d)^m.
double AbsorberMaxConductivity(int thickness, int poly_order, double target_reflection,
                               double cell_size, double wave_impedance);
double AbsorberConductivity(double depth, double total_depth, int poly_order, double sigma_max);

// Per-cell matched (sigma_e, sigma_m = sigma_e eta^2) values sampled at cell centers.
AbsorberProfile MakeAbsorberProfile(int thickness, int poly_order, double target_reflection,
                                    double cell_size, double wave_impedance);

// Adds graded absorber conductivities for every MatchedAbsorber face. Corner cells
// accumulate contributions from each face.
void ApplyAbsorbers(const BoundarySpec &boundaries, MaterialMap &materials);

}  // namespace fdtdmor

#endif  // FDTDMOR_CORE_GRID_HPP
