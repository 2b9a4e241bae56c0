// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "error.hpp"
#include "full_fdtd.hpp"
#include "test_support.hpp"

namespace fdtdmor
{
namespace
{

using testing::AllFaces;
using testing::Grid1d;
using testing::Grid3d;

Eigen::VectorXd RandomVector(std::mt19937 &rng, Eigen::Index n)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; i++)
  {
    v[i] = u(rng);
  }
  return v;
}

TEST(FullFdtd, ZeroInputZeroStateStaysZero)
{
  const GridSpec grid = Grid3d(4, 0.1);
  auto src = testing::PointSource(Component::Ez, {2, 2, 1});
  src.waveform = Waveform::Samples(std::vector<double>(50, 0.0));
  const auto m = Assemble(grid, MaterialMap(grid), AllFaces(FaceCondition::Kind::Pec), {src});
  ProbeSpec probe{"p", Component::Ez, {2, 2, 2}};
  const auto r = RunFull(m, {src}, {probe}, 0.9 * CflMaxTimestep(grid, MaterialMap(grid)), 50);
  EXPECT_EQ(r.final_state.cwiseAbs().maxCoeff(), 0.0);
  for (double v : r.series.values[0])
  {
    EXPECT_EQ(v, 0.0);
  }
}

TEST(FullFdtd, OneDimensionalImpulseSigns)
{
  const GridSpec grid = Grid1d(2, 1.0);
  const auto m = Assemble(grid, MaterialMap(grid), AllFaces(FaceCondition::Kind::Pmc), {});
  const double dt = 1e-9;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(5);
  x[1] = 1.0;  // middle E node
  const Eigen::VectorXd y = StepFull(x, m, Eigen::VectorXd(), dt);
  // E is untouched while H is zero; H then picks up K^T E dt / mu.
  EXPECT_EQ(y.head(3), x.head(3));
  const double g = dt / constants::mu0;
  EXPECT_NEAR(y[3], -g, 1e-15 * g);
  EXPECT_NEAR(y[4], g, 1e-15 * g);
}

TEST(FullFdtd, ElectricCurrentDrivesMinusSign)
{
  const GridSpec grid = Grid1d(4, 1.0);
  auto src = testing::PointSource(Component::Ex, {0, 0, 2});
  const auto m = Assemble(grid, MaterialMap(grid), AllFaces(FaceCondition::Kind::Pmc), {src});
  const double dt = 1e-9;
  Eigen::VectorXd u(1);
  u << 1.0;
  const Eigen::VectorXd y = StepFull(Eigen::VectorXd::Zero(m.size()), m, u, dt);
  const auto row = *m.unknowns->StateRow(Component::Ex, {0, 0, 2});
  EXPECT_NEAR(y[static_cast<Eigen::Index>(row)], -dt / constants::eps0, 1e-12 * dt / constants::eps0);
}

// Oracle: dense solve of (R + F) x' = (R - F) x + B u.
TEST(FullFdtdProperty, LeapFrogMatchesDenseSolve)
{
  std::mt19937 rng(31);
  for (std::uint32_t seed = 0; seed < 20; seed++)
  {
    const auto m = testing::RandomSystem(300 + seed);
    const double dt = testing::StableTimestep(m, 0.8);
    const auto pair = BuildUpdatePair(m, dt);
    const Eigen::MatrixXd r(pair.R), f(pair.F), b(m.input);
    Eigen::VectorXd x = RandomVector(rng, static_cast<Eigen::Index>(m.size()));
    const FullStepper stepper(m, dt);
    for (int n = 0; n < 10; n++)
    {
      const Eigen::VectorXd u = RandomVector(rng, b.cols());
      const Eigen::VectorXd oracle = (r + f).fullPivLu().solve((r - f) * x + b * u);
      stepper.Step(x, u);
      EXPECT_LE((x - oracle).norm(), 1e-12 * std::max(1.0, oracle.norm())) << "seed " << seed;
      x = oracle;
    }
  }
}

TEST(FullFdtdProperty, LosslessEnergyConserved)
{
  std::mt19937 rng(32);
  const GridSpec grid = Grid3d(6, 0.05);
  const auto m = Assemble(grid, MaterialMap(grid), AllFaces(FaceCondition::Kind::Pec), {});
  for (double s : {0.3, 0.7, 0.99})
  {
    const double dt = s * CflMaxTimestep(grid, MaterialMap(grid));
    const FullStepper stepper(m, dt);
    Eigen::VectorXd x = RandomVector(rng, static_cast<Eigen::Index>(m.size()));
    x.tail(static_cast<Eigen::Index>(m.num_magnetic())) *= 1.0 / constants::eta0();
    const double e0 = stepper.Energy(x);
    ASSERT_GT(e0, 0.0);
    for (int n = 0; n < 1000; n++)
    {
      stepper.Step(x, Eigen::VectorXd());
    }
    EXPECT_LE(std::abs(stepper.Energy(x) - e0) / e0, 1e-10) << "s=" << s;
  }
}

TEST(FullFdtdProperty, LossyEnergyNonIncreasing)
{
  std::mt19937 rng(33);
  for (std::uint32_t seed = 0; seed < 10; seed++)
  {
    const auto m = testing::RandomSystem(400 + seed);
    const double dt = testing::StableTimestep(m, 0.9);
    const FullStepper stepper(m, dt);
    Eigen::VectorXd x = RandomVector(rng, static_cast<Eigen::Index>(m.size()));
    double e = stepper.Energy(x);
    for (int n = 0; n < 200; n++)
    {
      stepper.Step(x, Eigen::VectorXd());
      const double next = stepper.Energy(x);
      EXPECT_LE(next, e * (1.0 + 1e-12));
      e = next;
    }
  }
}

// A bump launched toward a graded absorber leaves almost nothing behind; the same
// bump between reflecting walls keeps all of its energy.
TEST(FullFdtd, AbsorberSwallowsOutgoingPulse)
{
  const GridSpec grid = Grid1d(300, 0.01);
  BoundarySpec open = AllFaces(FaceCondition::Kind::Pmc);
  open.face(2, true).kind = FaceCondition::Kind::MatchedAbsorber;
  open.face(2, true).absorber = {10, 3, 1e-6};
  MaterialMap mats(grid);
  ApplyAbsorbers(open, mats);
  const auto absorbing = Assemble(grid, mats, open, {});
  const auto closed = Assemble(grid, MaterialMap(grid), AllFaces(FaceCondition::Kind::Pmc), {});
  const double dt = 0.99 * CflMaxTimestep(grid, MaterialMap(grid));

  auto launch = [&](const SystemMatrices &m)
  {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.size()));
    for (int k = 0; k <= 300; k++)
    {
      const auto row = m.unknowns->StateRow(Component::Ex, {0, 0, k});
      if (row)
      {
        x[static_cast<Eigen::Index>(*row)] = std::exp(-std::pow((k - 150) / 10.0, 2));
      }
    }
    const FullStepper stepper(m, dt);
    const double e0 = stepper.Energy(x);
    for (int n = 0; n < 1500; n++)
    {
      stepper.Step(x, Eigen::VectorXd());
    }
    return stepper.Energy(x) / e0;
  };
  EXPECT_LT(launch(absorbing), 1e-4);
  EXPECT_NEAR(launch(closed), 1.0, 1e-10);
}

TEST(FullFdtd, CubeAboveCflDiverges)
{
  const GridSpec grid = Grid3d(9, 1.0 / 9.0);
  auto src = testing::PointSource(Component::Ez, {3, 2, 3});
  const auto m = Assemble(grid, MaterialMap(grid), AllFaces(FaceCondition::Kind::Pec), {src});
  const double dt = 1.98 * CflMaxTimestep(grid, MaterialMap(grid));
  ProbeSpec probe{"p", Component::Hx, {6, 3, 5}};
  EXPECT_THROW(RunFull(m, {src}, {probe}, dt, 5000), DivergenceError);
}

TEST(FullFdtd, ProbeOnEliminatedUnknownIsRejected)
{
  const GridSpec grid = Grid3d(4, 0.1);
  const auto m = Assemble(grid, MaterialMap(grid), AllFaces(FaceCondition::Kind::Pec), {});
  ProbeSpec probe{"wall", Component::Ez, {0, 1, 1}};
  EXPECT_THROW(ProbeRows(*m.unknowns, {probe}), Error);
}

TEST(TimeSeriesCsv, RoundTrip)
{
  TimeSeries ts;
  ts.names = {"a", "b"};
  ts.dt = 2.5e-11;
  ts.values = {{1.0, -2.0, 3.5e-7}, {0.0, 1e-300, -4.0}};
  std::stringstream ss;
  WriteTimeSeriesCsv(ss, ts, {"hello"});
  const TimeSeries back = ReadTimeSeriesCsv(ss);
  EXPECT_EQ(back.names, ts.names);
  EXPECT_EQ(back.values, ts.values);
  EXPECT_NEAR(back.dt, ts.dt, 1e-24);
}

}  // namespace
}  // namespace fdtdmor
