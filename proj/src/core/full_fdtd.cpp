// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "full_fdtd.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "error.hpp"

namespace fdtdmor
{

std::size_t TimeSeries::Find(const std::string &name) const
{
  for (std::size_t i = 0; i < names.size(); i++)
  {
    if (names[i] == name)
    {
      return i;
    }
  }
  throw Error(ErrorCode::Comparison, "no probe named '" + name + "' in time series");
}

void WriteTimeSeriesCsv(std::ostream &os, const TimeSeries &series,
                        const std::vector<std::string> &comments)
{
  for (const auto &c : comments)
  {
    os << "# " << c << '\n';
  }
  os << "step,time";
  for (const auto &n : series.names)
  {
    os << ',' << n;
  }
  os << '\n' << std::setprecision(17);
  for (std::size_t n = 0; n < series.steps(); n++)
  {
    os << n + 1 << ',' << static_cast<double>(n + 1) * series.dt;
    for (const auto &v : series.values)
    {
      os << ',' << v[n];
    }
    os << '\n';
  }
}

TimeSeries ReadTimeSeriesCsv(std::istream &is)
{
  TimeSeries ts;
  std::string line;
  bool header = false;
  double last_time = 0.0;
  while (std::getline(is, line))
  {
    if (line.empty() || line[0] == '#')
    {
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ','))
    {
      cells.push_back(cell);
    }
    if (!header)
    {
      if (cells.size() < 2 || cells[0] != "step" || cells[1] != "time")
      {
        throw Error(ErrorCode::Io, "time series header must start with step,time");
      }
      ts.names.assign(cells.begin() + 2, cells.end());
      ts.values.assign(ts.names.size(), {});
      header = true;
      continue;
    }
    if (cells.size() != ts.names.size() + 2)
    {
      throw Error(ErrorCode::Io, "time series row has the wrong number of columns");
    }
    const double t = std::stod(cells[1]);
    if (ts.values.empty() || ts.values[0].empty())
    {
      ts.dt = t;
    }
    last_time = t;
    for (std::size_t p = 0; p < ts.names.size(); p++)
    {
      ts.values[p].push_back(std::stod(cells[p + 2]));
    }
  }
  if (!header)
  {
    throw Error(ErrorCode::Io, "empty time series file");
  }
  const std::size_t steps = ts.steps();
  if (steps > 1)
  {
    ts.dt = last_time / static_cast<double>(steps);
  }
  return ts;
}

InputSampler::InputSampler(const std::vector<SourceSpec> &sources, double dt)
  : sources_(sources), dt_(dt)
{
}

Eigen::VectorXd InputSampler::operator()(std::size_t step) const
{
  Eigen::VectorXd u(static_cast<Eigen::Index>(sources_.size()));
  for (std::size_t j = 0; j < sources_.size(); j++)
  {
    const double offset = sources_[j].kind == SourceKind::ElectricCurrent ? 0.5 : 0.0;
    const double t = (static_cast<double>(step) - offset) * dt_;
    u[static_cast<Eigen::Index>(j)] = sources_[j].waveform.Value(t, step);
  }
  return u;
}

FullStepper::FullStepper(const SystemMatrices &m, double dt)
  : m_(&m), dt_(dt), ne_(m.num_electric()), nh_(m.num_magnetic())
{
  if (!(dt > 0.0))
  {
    throw Error(ErrorCode::InvalidParameter, "timestep must be positive");
  }
  const Eigen::ArrayXd ae = m.eps.array() / dt + 0.5 * m.sigma_e.array();
  const Eigen::ArrayXd ah = m.mu.array() / dt + 0.5 * m.sigma_m.array();
  e_scale_ = ae.inverse().matrix();
  h_scale_ = ah.inverse().matrix();
  e_keep_ = ((m.eps.array() / dt - 0.5 * m.sigma_e.array()) / ae).matrix();
  h_keep_ = ((m.mu.array() / dt - 0.5 * m.sigma_m.array()) / ah).matrix();
  curl_t_ = m.curl.transpose();
  const auto ne = static_cast<Eigen::Index>(ne_);
  const auto nh = static_cast<Eigen::Index>(nh_);
  input_e_ = m.input.topRows(ne);
  input_h_ = m.input.bottomRows(nh);
}

void FullStepper::Step(Eigen::VectorXd &state, const Eigen::VectorXd &u) const
{
  const auto ne = static_cast<Eigen::Index>(ne_);
  const auto nh = static_cast<Eigen::Index>(nh_);
  auto e = state.head(ne);
  auto h = state.tail(nh);
  Eigen::VectorXd rhs_e = -(m_->curl * h);
  Eigen::VectorXd rhs_h;
  if (u.size() > 0)
  {
    rhs_e += input_e_ * u;
  }
  e = e_keep_.cwiseProduct(e) + e_scale_.cwiseProduct(rhs_e);
  rhs_h = curl_t_ * e;
  if (u.size() > 0)
  {
    rhs_h += input_h_ * u;
  }
  h = h_keep_.cwiseProduct(h) + h_scale_.cwiseProduct(rhs_h);
}

double FullStepper::Energy(const Eigen::VectorXd &state) const
{
  const auto ne = static_cast<Eigen::Index>(ne_);
  const auto nh = static_cast<Eigen::Index>(nh_);
  const auto e = state.head(ne);
  const auto h = state.tail(nh);
  const double diag = (e.array().square() * m_->eps.array()).sum() / dt_ +
                      (h.array().square() * m_->mu.array()).sum() / dt_;
  return diag - e.dot(m_->curl * h);
}

Eigen::VectorXd StepFull(const Eigen::VectorXd &state, const SystemMatrices &m,
                         const Eigen::VectorXd &u, double dt)
{
  if (static_cast<std::size_t>(state.size()) != m.size() ||
      static_cast<std::size_t>(u.size()) != m.num_inputs())
  {
    throw Error(ErrorCode::InvalidParameter, "state or input size does not match the system");
  }
  FullStepper stepper(m, dt);
  Eigen::VectorXd next = state;
  stepper.Step(next, u);
  if (StateDiverged(next))
  {
    throw DivergenceError("full", 1);
  }
  return next;
}

bool StateDiverged(const Eigen::VectorXd &state)
{
  for (Eigen::Index i = 0; i < state.size(); i++)
  {
    const double v = state[i];
    if (!std::isfinite(v) || std::abs(v) > 1e100)
    {
      return true;
    }
  }
  return false;
}

std::vector<std::size_t> ProbeRows(const UnknownMap &unknowns, const std::vector<ProbeSpec> &probes)
{
  std::vector<std::size_t> rows;
  for (const auto &p : probes)
  {
    const auto row = unknowns.StateRow(p.component, p.location);
    if (!row)
    {
      throw Error(ErrorCode::Stamp, "probe '" + p.name + "' sits on an eliminated or missing " +
                                        std::string(ComponentName(p.component)) + " location");
    }
    rows.push_back(*row);
  }
  return rows;
}

FullRunResult RunFull(const SystemMatrices &m, const std::vector<SourceSpec> &sources,
                      const std::vector<ProbeSpec> &probes, double dt, std::size_t steps)
{
  using Clock = std::chrono::steady_clock;
  if (steps < 1)
  {
    throw Error(ErrorCode::InvalidParameter, "steps must be at least 1");
  }
  if (sources.size() != m.num_inputs())
  {
    throw Error(ErrorCode::InvalidParameter, "source list does not match the input matrix");
  }
  const auto t0 = Clock::now();
  FullRunResult result;
  const FullStepper stepper(m, dt);
  const InputSampler sampler(sources, dt);
  const auto rows = ProbeRows(*m.unknowns, probes);
  result.series.dt = dt;
  for (const auto &p : probes)
  {
    result.series.names.push_back(p.name);
  }
  result.series.values.assign(probes.size(), std::vector<double>(steps, 0.0));
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.size()));
  const auto t1 = Clock::now();

  for (std::size_t n = 0; n < steps; n++)
  {
    stepper.Step(x, sampler(n + 1));
    for (std::size_t p = 0; p < rows.size(); p++)
    {
      result.series.values[p][n] = x[static_cast<Eigen::Index>(rows[p])];
    }
    if (((n + 1) % 100 == 0 || n + 1 == steps) && StateDiverged(x))
    {
      throw DivergenceError("full", n + 1);
    }
  }
  const auto t2 = Clock::now();
  result.final_state = std::move(x);
  result.setup_seconds = std::chrono::duration<double>(t1 - t0).count();
  result.run_seconds = std::chrono::duration<double>(t2 - t1).count();
  return result;
}

}  // namespace fdtdmor
