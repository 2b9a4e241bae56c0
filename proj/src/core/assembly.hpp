// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FDTDMOR_CORE_ASSEMBLY_HPP
#define FDTDMOR_CORE_ASSEMBLY_HPP

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "grid.hpp"

namespace fdtdmor
{

using SparseMatrix = Eigen::SparseMatrix<double>;

// Bijection between staggered (component, index) locations and state-vector rows.
// Electric unknowns come first, then magnetic ones; each block is ordered by component
// and then lexicographically by (i, j, k).
class UnknownMap
{
public:
  struct Location
  {
    Component component;
    Index3 index;
  };

  // Eliminates tangential E on PEC-backed faces and inside PEC boxes, then drops
  // magnetic unknowns left without any electric coupling.
  static UnknownMap Build(const GridSpec &grid, const BoundarySpec &boundaries,
                          const std::vector<PecBox> &pec_boxes);

  std::size_t num_electric() const { return e_locations_.size(); }
  std::size_t num_magnetic() const { return h_locations_.size(); }

  // Row within the electric (or magnetic) block; nullopt if eliminated or outside.
  std::optional<std::size_t> Find(Component c, const Index3 &idx) const;
  // Row within the full state vector [E; H].
  std::optional<std::size_t> StateRow(Component c, const Index3 &idx) const;

  const Location &ElectricLocation(std::size_t row) const { return e_locations_[row]; }
  const Location &MagneticLocation(std::size_t row) const { return h_locations_[row]; }
  const GridSpec &grid() const { return grid_; }

private:
  std::size_t Flat(Component c, const Index3 &idx) const;

  GridSpec grid_;
  std::array<std::vector<long>, 6> rows_;  // per component: flat index -> row or -1
  std::vector<Location> e_locations_, h_locations_;
};

// Discrete Maxwell operators: Dε dE/dt = -K H - Dσe E - J, Dμ dH/dt = K^T E - Dσm H - M.
struct SystemMatrices
{
  SparseMatrix curl;  // K, N_e x N_h, entries ±1/Δ
  Eigen::VectorXd eps, mu, sigma_e, sigma_m;
  SparseMatrix input;  // B, N x N_in; -1 at stamped rows
  std::shared_ptr<const UnknownMap> unknowns;

  std::size_t num_electric() const { return static_cast<std::size_t>(curl.rows()); }
  std::size_t num_magnetic() const { return static_cast<std::size_t>(curl.cols()); }
  std::size_t size() const { return num_electric() + num_magnetic(); }
  std::size_t num_inputs() const { return static_cast<std::size_t>(input.cols()); }
  bool Lossless() const;
};

SystemMatrices Assemble(const GridSpec &grid, const MaterialMap &materials,
                        const BoundarySpec &boundaries, const std::vector<SourceSpec> &sources,
                        const std::vector<PecBox> &pec_boxes = {});

// Full-length state vector to (component, index, value) triples.
struct FieldSample
{
  Component component;
  Index3 index;
  double value;
};
std::vector<FieldSample> Disassemble(const UnknownMap &unknowns, const Eigen::VectorXd &state);

// R = [Dε/Δt, -K/2; -K^T/2, Dμ/Δt], F = [Dσe/2, K/2; -K^T/2, Dσm/2].
struct UpdatePair
{
  SparseMatrix R;
  SparseMatrix F;
  std::size_t num_electric = 0;
  double dt = 0.0;
};

UpdatePair BuildUpdatePair(const SystemMatrices &m, double dt);

struct FullStabilityReport
{
  bool passive = false;  // F + F^T >= 0
  bool r_positive = false;  // R > 0
  double min_conductivity = 0.0;
  double max_singular_value = 0.0;  // of Dε^-1/2 K Dμ^-1/2
  double limit = 0.0;               // 2/Δt
};

// Dense check; intended for N up to a few thousand unknowns.
FullStabilityReport FullStabilityCheck(const UpdatePair &pair);

// Coordinate-list text dump (row col value per line) of K, diagonals and B.
void WriteCoordinateList(std::ostream &os, const SparseMatrix &m);
void WriteSystemDump(const SystemMatrices &m, const std::string &directory);

}  // namespace fdtdmor

#endif  // FDTDMOR_CORE_ASSEMBLY_HPP
