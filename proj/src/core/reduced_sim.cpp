// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "reduced_sim.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "error.hpp"

namespace fdtdmor
{

ReducedStepper::ReducedStepper(const ReducedModel &model)
  : ne_(model.num_electric()), nh_(model.num_magnetic())
{
  const double dt = model.dt;
  if (!(dt > 0.0))
  {
    throw Error(ErrorCode::InvalidParameter, "reduced model timestep must be positive");
  }
  if (model.input.rows() != ne_ + nh_)
  {
    throw Error(ErrorCode::InvalidParameter, "reduced input block has the wrong row count");
  }
  const Eigen::MatrixXd a_e = model.d_eps / dt + 0.5 * model.d_sigma_e;
  const Eigen::MatrixXd a_h = model.d_mu / dt + 0.5 * model.d_sigma_m;
  const Eigen::LLT<Eigen::MatrixXd> llt_e(a_e);
  const Eigen::LLT<Eigen::MatrixXd> llt_h(a_h);
  if (llt_e.info() != Eigen::Success || llt_h.info() != Eigen::Success)
  {
    throw Error(ErrorCode::SingularOperator,
                "reduced half-update matrices are not positive definite");
  }
  p_e_ = llt_e.solve(model.d_eps / dt - 0.5 * model.d_sigma_e);
  q_e_ = llt_e.solve(-model.curl);
  s_e_ = llt_e.solve(model.input.topRows(ne_));
  p_h_ = llt_h.solve(model.d_mu / dt - 0.5 * model.d_sigma_m);
  q_h_ = llt_h.solve(model.curl.transpose());
  s_h_ = llt_h.solve(model.input.bottomRows(nh_));
  r_ = model.UpdateR();
}

void ReducedStepper::Step(Eigen::VectorXd &state, const Eigen::VectorXd &u) const
{
  Eigen::VectorXd e = p_e_ * state.head(ne_);
  e.noalias() += q_e_ * state.tail(nh_);
  if (u.size() > 0)
  {
    e.noalias() += s_e_ * u;
  }
  Eigen::VectorXd h = p_h_ * state.tail(nh_);
  h.noalias() += q_h_ * e;
  if (u.size() > 0)
  {
    h.noalias() += s_h_ * u;
  }
  state.head(ne_) = e;
  state.tail(nh_) = h;
}

double ReducedStepper::Energy(const Eigen::VectorXd &state) const
{
  return state.dot(r_ * state);
}

Eigen::VectorXd StepReduced(const Eigen::VectorXd &state, const ReducedModel &model,
                            const Eigen::VectorXd &u)
{
  if (state.size() != model.size() || u.size() != model.num_inputs())
  {
    throw Error(ErrorCode::InvalidParameter, "state or input size does not match the model");
  }
  const ReducedStepper stepper(model);
  Eigen::VectorXd next = state;
  stepper.Step(next, u);
  if (StateDiverged(next))
  {
    throw DivergenceError("reduced", 1);
  }
  return next;
}

Eigen::MatrixXd ProbeProjection(const ProjectionBasis &basis, const UnknownMap &unknowns,
                                const std::vector<ProbeSpec> &probes)
{
  const auto order = static_cast<Eigen::Index>(basis.order());
  const auto ne = static_cast<std::size_t>(basis.v1.rows());
  const auto rows = ProbeRows(unknowns, probes);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(probes.size()), 2 * order);
  for (std::size_t p = 0; p < rows.size(); p++)
  {
    const auto i = static_cast<Eigen::Index>(p);
    if (rows[p] < ne)
    {
      out.row(i).head(order) = basis.v1.row(static_cast<Eigen::Index>(rows[p]));
    }
    else
    {
      out.row(i).tail(order) = basis.v2.row(static_cast<Eigen::Index>(rows[p] - ne));
    }
  }
  return out;
}

TimeSeries ReconstructProbes(const ProjectionBasis &basis, const UnknownMap &unknowns,
                             const Eigen::MatrixXd &trajectory, const std::vector<ProbeSpec> &probes,
                             double dt)
{
  const Eigen::MatrixXd rows = ProbeProjection(basis, unknowns, probes);
  if (trajectory.rows() != rows.cols())
  {
    throw Error(ErrorCode::InvalidParameter, "trajectory length does not match the basis");
  }
  const Eigen::MatrixXd values = rows * trajectory;
  TimeSeries ts;
  ts.dt = dt;
  for (std::size_t p = 0; p < probes.size(); p++)
  {
    ts.names.push_back(probes[p].name);
    std::vector<double> column(static_cast<std::size_t>(values.cols()));
    for (Eigen::Index n = 0; n < values.cols(); n++)
    {
      column[static_cast<std::size_t>(n)] = values(static_cast<Eigen::Index>(p), n);
    }
    ts.values.push_back(std::move(column));
  }
  return ts;
}

ReducedRunResult RunReduced(const ReducedModel &model, const Eigen::MatrixXd &probe_rows,
                            const std::vector<std::string> &probe_names,
                            const std::vector<SourceSpec> &sources, std::size_t steps, bool record)
{
  using Clock = std::chrono::steady_clock;
  if (steps < 1)
  {
    throw Error(ErrorCode::InvalidParameter, "steps must be at least 1");
  }
  if (static_cast<Eigen::Index>(sources.size()) != model.num_inputs())
  {
    throw Error(ErrorCode::InvalidParameter, "source list does not match the reduced input block");
  }
  if (probe_rows.cols() != model.size() ||
      probe_rows.rows() != static_cast<Eigen::Index>(probe_names.size()))
  {
    throw Error(ErrorCode::InvalidParameter, "probe rows do not match the reduced model");
  }
  const auto t0 = Clock::now();
  const ReducedStepper stepper(model);
  const InputSampler sampler(sources, model.dt);
  ReducedRunResult result;
  result.series.dt = model.dt;
  result.series.names = probe_names;
  result.series.values.assign(probe_names.size(), std::vector<double>(record ? steps : 0, 0.0));
  Eigen::VectorXd x = Eigen::VectorXd::Zero(model.size());
  Eigen::VectorXd probes(probe_rows.rows());
  for (std::size_t n = 0; n < steps; n++)
  {
    const Eigen::VectorXd u = sampler(n + 1);
    if (u.size() > 0)
    {
      result.max_input_magnitude = std::max(result.max_input_magnitude, u.cwiseAbs().maxCoeff());
    }
    stepper.Step(x, u);
    if (record)
    {
      probes.noalias() = probe_rows * x;
      for (Eigen::Index p = 0; p < probes.size(); p++)
      {
        result.series.values[static_cast<std::size_t>(p)][n] = probes[p];
      }
    }
    if ((n + 1) % 100 == 0 || n + 1 == steps)
    {
      if (StateDiverged(x))
      {
        throw DivergenceError("reduced", n + 1);
      }
      result.max_state_magnitude = std::max(result.max_state_magnitude, x.cwiseAbs().maxCoeff());
    }
  }
  result.final_state = std::move(x);
  result.run_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return result;
}

void WriteTimingTable(std::ostream &os, const std::vector<TimingRow> &rows,
                      const std::vector<std::string> &comments)
{
  for (const auto &c : comments)
  {
    os << "# " << c << '\n';
  }
  os << std::left << std::setw(10) << "Engine" << std::right << std::setw(10) << "Size"
     << std::setw(12) << "Setup" << std::setw(12) << "MOR" << std::setw(12) << "Run"
     << std::setw(12) << "Total" << std::setw(10) << "Speedup" << '\n';
  os << std::fixed << std::setprecision(4);
  for (const auto &r : rows)
  {
    os << std::left << std::setw(10) << r.label << std::right << std::setw(10) << r.size
       << std::setw(12) << r.setup << std::setw(12) << r.mor << std::setw(12) << r.run
       << std::setw(12) << r.total();
    if (r.speedup > 0.0)
    {
      os << std::setw(10) << std::setprecision(2) << r.speedup << std::setprecision(4);
    }
    else
    {
      os << std::setw(10) << "-";
    }
    os << '\n';
  }
  os.unsetf(std::ios::fixed);
}

}  // namespace fdtdmor
