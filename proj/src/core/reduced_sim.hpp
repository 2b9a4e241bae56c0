// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FDTDMOR_CORE_REDUCED_SIM_HPP
#define FDTDMOR_CORE_REDUCED_SIM_HPP

#include <cstddef>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "full_fdtd.hpp"
#include "krylov.hpp"

namespace fdtdmor
{

// Leap-frog on the dense reduced blocks. Both half-update matrices
// A_E = D~eps/dt + D~sigma_e/2 and A_H = D~mu/dt + D~sigma_m/2 are inverted once:
//   E' = P_E E + Q_E H + S_E u,   H' = P_H H + Q_H E' + S_H u.
class ReducedStepper
{
public:
  explicit ReducedStepper(const ReducedModel &model);

  void Step(Eigen::VectorXd &state, const Eigen::VectorXd &u) const;
  double Energy(const Eigen::VectorXd &state) const;  // x~^T R~ x~
  Eigen::Index size() const { return ne_ + nh_; }
  Eigen::Index num_electric() const { return ne_; }

private:
  Eigen::Index ne_, nh_;
  Eigen::MatrixXd p_e_, q_e_, s_e_, p_h_, q_h_, s_h_;
  Eigen::MatrixXd r_;
};

Eigen::VectorXd StepReduced(const Eigen::VectorXd &state, const ReducedModel &model,
                            const Eigen::VectorXd &u);

// Rows of blockdiag(V1, V2) for each probe, used to map x~ to probe values.
Eigen::MatrixXd ProbeProjection(const ProjectionBasis &basis, const UnknownMap &unknowns,
                                const std::vector<ProbeSpec> &probes);

// Applies the probe rows to a stored trajectory (one state per column).
TimeSeries ReconstructProbes(const ProjectionBasis &basis, const UnknownMap &unknowns,
                             const Eigen::MatrixXd &trajectory, const std::vector<ProbeSpec> &probes,
                             double dt);

struct ReducedRunResult
{
  TimeSeries series;
  Eigen::VectorXd final_state;
  double max_state_magnitude = 0.0;
  double max_input_magnitude = 0.0;
  double run_seconds = 0.0;
};

// Steps the reduced model and records probe values through `probe_rows` (rows of V per
// probe). Throws DivergenceError (engine "reduced") on blow-up, checked every 100 steps.
ReducedRunResult RunReduced(const ReducedModel &model, const Eigen::MatrixXd &probe_rows,
                            const std::vector<std::string> &probe_names,
                            const std::vector<SourceSpec> &sources, std::size_t steps,
                            bool record = true);

struct TimingRow
{
  std::string label;
  std::size_t size = 0;
  double setup = 0.0;
  double mor = 0.0;
  double run = 0.0;
  double total() const { return setup + mor + run; }
  double speedup = 0.0;  // 0 when no reference run
};

// Plain-text table with columns Size, Setup, MOR, Run, Total, Speedup.
void WriteTimingTable(std::ostream &os, const std::vector<TimingRow> &rows,
                      const std::vector<std::string> &comments = {});

}  // namespace fdtdmor

#endif  // FDTDMOR_CORE_REDUCED_SIM_HPP
