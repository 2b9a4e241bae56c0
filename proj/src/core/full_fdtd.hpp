// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FDTDMOR_CORE_FULL_FDTD_HPP
#define FDTDMOR_CORE_FULL_FDTD_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "assembly.hpp"

namespace fdtdmor
{

// Probe samples over a run. values[p][n] is probe p after step n + 1, i.e. E at time
// (n + 1) dt and H at (n + 3/2) dt as stored by the leap-frog.
struct TimeSeries
{
  std::vector<std::string> names;
  double dt = 0.0;
  std::vector<std::vector<double>> values;

  std::size_t steps() const { return values.empty() ? 0 : values.front().size(); }
  std::size_t num_probes() const { return names.size(); }
  std::size_t Find(const std::string &name) const;  // throws if absent
};

// Header "step,time,<probe>..." then one row per step. Comment lines (prefixed "# ")
// go first.
void WriteTimeSeriesCsv(std::ostream &os, const TimeSeries &series,
                        const std::vector<std::string> &comments = {});
TimeSeries ReadTimeSeriesCsv(std::istream &is);

// Evaluates the input vector u for the update that produces step n + 1. Electric
// currents are sampled at (n + 1/2) dt, magnetic currents at (n + 1) dt.
class InputSampler
{
public:
  InputSampler(const std::vector<SourceSpec> &sources, double dt);
  Eigen::VectorXd operator()(std::size_t step) const;  // step = n + 1 >= 1
  std::size_t size() const { return sources_.size(); }

private:
  std::vector<SourceSpec> sources_;
  double dt_;
};

// Explicit two-sweep leap-frog for (R+F) x^{n+1} = (R-F) x^n + B u. The E sweep uses
// the old H, the H sweep the new E.
class FullStepper
{
public:
  FullStepper(const SystemMatrices &m, double dt);

  void Step(Eigen::VectorXd &state, const Eigen::VectorXd &u) const;
  // x^T R x.
  double Energy(const Eigen::VectorXd &state) const;
  std::size_t size() const { return ne_ + nh_; }
  double dt() const { return dt_; }

private:
  const SystemMatrices *m_;
  double dt_;
  std::size_t ne_, nh_;
  Eigen::VectorXd e_keep_, e_scale_, h_keep_, h_scale_;
  SparseMatrix curl_t_;  // K^T, stored once for the H sweep
  SparseMatrix input_e_, input_h_;
};

// Single step with a freshly built stepper; convenient for tests.
Eigen::VectorXd StepFull(const Eigen::VectorXd &state, const SystemMatrices &m,
                         const Eigen::VectorXd &u, double dt);

// True when any entry is non-finite or exceeds 1e100 in magnitude.
bool StateDiverged(const Eigen::VectorXd &state);

struct FullRunResult
{
  TimeSeries series;
  Eigen::VectorXd final_state;
  double setup_seconds = 0.0;
  double run_seconds = 0.0;
};

// Throws DivergenceError (engine "full") with the step index when the state blows up;
// checked every 100 steps and at the end.
FullRunResult RunFull(const SystemMatrices &m, const std::vector<SourceSpec> &sources,
                      const std::vector<ProbeSpec> &probes, double dt, std::size_t steps);

// State rows for the probes; throws Stamp errors for eliminated or outside locations.
std::vector<std::size_t> ProbeRows(const UnknownMap &unknowns, const std::vector<ProbeSpec> &probes);

}  // namespace fdtdmor

#endif  // FDTDMOR_CORE_FULL_FDTD_HPP
