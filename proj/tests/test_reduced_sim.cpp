// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "full_fdtd.hpp"
#include "krylov.hpp"
#include "reduced_sim.hpp"
#include "stability.hpp"
#include "test_support.hpp"

namespace fdtdmor
{
namespace
{

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

struct Cavity
{
  GridSpec grid;
  SystemMatrices m;
  SourceSpec source;
  ProbeSpec probe;
  double dt_max;
};

Cavity SmallCavity()
{
  Cavity c;
  c.grid = testing::Grid2d(12, 10, 0.01, 0.01);
  c.source = testing::PointSource(Component::Ez, {4, 3, 0}, 4e9);
  c.probe = {"probe", Component::Hy, {7, 6, 0}};
  c.m = Assemble(c.grid, MaterialMap(c.grid), testing::AllFaces(FaceCondition::Kind::Pec), {c.source});
  c.dt_max = CflMaxTimestep(c.grid, MaterialMap(c.grid));
  return c;
}

// Oracle: dense solve of (R~ + F~) x' = (R~ - F~) x + B~ u.
TEST(ReducedStepProperty, MatchesDenseSolve)
{
  std::mt19937 rng(71);
  for (std::uint32_t seed = 0; seed < 20; seed++)
  {
    testing::RandomSystemOptions o;
    o.num_electric = 12;
    o.num_magnetic = 11;
    const auto m = testing::RandomSystem(1100 + seed, o);
    const double dt = testing::StableTimestep(m, 0.9);
    const auto r = Project(m, testing::RandomBasis(1200 + seed, 12, 11, 6), dt);
    const Eigen::MatrixXd rr = r.UpdateR(), ff = r.UpdateF();
    const ReducedStepper stepper(r);
    Eigen::VectorXd x = RandomVector(rng, r.size());
    for (int n = 0; n < 10; n++)
    {
      const Eigen::VectorXd u = RandomVector(rng, r.num_inputs());
      const Eigen::VectorXd oracle = (rr + ff).fullPivLu().solve((rr - ff) * x + r.input * u);
      stepper.Step(x, u);
      EXPECT_LE((x - oracle).norm(), 1e-12 * std::max(1.0, oracle.norm())) << "seed " << seed;
      x = oracle;
    }
  }
}

TEST(ReducedStepProperty, LosslessEnergyConserved)
{
  std::mt19937 rng(72);
  const auto c = SmallCavity();
  for (double s : {0.5, 0.99})
  {
    const double dt = s * c.dt_max;
    const auto r = Project(c.m, BuildBasis(c.m, MakeExpansionPoints(1.1, 2, 4e9, dt), 20, dt), dt);
    const ReducedStepper stepper(r);
    Eigen::VectorXd x = RandomVector(rng, r.size());
    x.tail(r.num_magnetic()) /= constants::eta0();
    const double e0 = stepper.Energy(x);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(r.num_inputs());
    for (int n = 0; n < 1000; n++)
    {
      stepper.Step(x, zero);
    }
    EXPECT_LE(std::abs(stepper.Energy(x) - e0) / e0, 1e-10) << "s=" << s;
  }
}

TEST(ReducedStepProperty, EnforcedLosslessEnergyConserved)
{
  std::mt19937 rng(73);
  const auto c = SmallCavity();
  const double dt = 3.0 * c.dt_max;
  const auto raw = Project(c.m, BuildBasis(c.m, MakeExpansionPoints(1.1, 2, 4e9, dt), 20, dt), dt);
  ASSERT_FALSE(ReducedStabilityCheck(raw, dt).stable());
  const auto r = EnforceStability(raw, dt);
  const ReducedStepper stepper(r);
  Eigen::VectorXd x = RandomVector(rng, r.size());
  x.tail(r.num_magnetic()) /= constants::eta0();
  const double e0 = stepper.Energy(x);
  ASSERT_GT(e0, 0.0);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(r.num_inputs());
  for (int n = 0; n < 1000; n++)
  {
    stepper.Step(x, zero);
  }
  EXPECT_LE(std::abs(stepper.Energy(x) - e0) / e0, 1e-10);
}

TEST(ReducedRun, IdentityProjectionReproducesFullRun)
{
  const auto c = SmallCavity();
  const double dt = 0.9 * c.dt_max;
  const auto full = RunFull(c.m, {c.source}, {c.probe}, dt, 400);
  const auto r = FromSystem(c.m, dt);
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(1, r.size());
  rows(0, static_cast<Eigen::Index>(*c.m.unknowns->StateRow(c.probe.component, c.probe.location))) = 1.0;
  const auto red = RunReduced(r, rows, {"probe"}, {c.source}, 400);
  double scale = 0.0, diff = 0.0;
  for (std::size_t n = 0; n < 400; n++)
  {
    scale = std::max(scale, std::abs(full.series.values[0][n]));
    diff = std::max(diff, std::abs(full.series.values[0][n] - red.series.values[0][n]));
  }
  EXPECT_GT(scale, 0.0);
  EXPECT_LE(diff, 1e-10 * scale);
}

// A square orthogonal basis is a change of coordinates; the probe output is unchanged.
TEST(ReducedRun, SquareOrthogonalBasisReproducesFullRun)
{
  const GridSpec grid = testing::Grid1d(20, 0.01);
  BoundarySpec b = testing::AllFaces(FaceCondition::Kind::Pec);
  b.face(2, true).kind = FaceCondition::Kind::Pmc;
  const auto source = testing::PointSource(Component::Ex, {0, 0, 6}, 4e9);
  const auto m = Assemble(grid, MaterialMap(grid), b, {source});
  ASSERT_EQ(m.num_electric(), m.num_magnetic());
  const int n = static_cast<int>(m.num_electric());
  const double dt = 0.9 * CflMaxTimestep(grid, MaterialMap(grid));
  const auto basis = testing::RandomBasis(9, n, n, n);
  const auto r = Project(m, basis, dt);
  const ProbeSpec probe{"p", Component::Hy, {0, 0, 14}};
  const auto full = RunFull(m, {source}, {probe}, dt, 300);
  const auto red = RunReduced(r, ProbeProjection(basis, *m.unknowns, {probe}), {"p"}, {source}, 300);
  double scale = 0.0, diff = 0.0;
  for (std::size_t k = 0; k < 300; k++)
  {
    scale = std::max(scale, std::abs(full.series.values[0][k]));
    diff = std::max(diff, std::abs(full.series.values[0][k] - red.series.values[0][k]));
  }
  EXPECT_GT(scale, 0.0);
  EXPECT_LE(diff, 1e-9 * scale);
}

TEST(ReducedRun, BoundedOutputAboveCflAfterEnforcement)
{
  const auto c = SmallCavity();
  const double dt = 4.0 * c.dt_max;
  const auto points = MakeExpansionPoints(1.1, 2, 4e9, dt);
  const auto basis = BuildBasis(c.m, points, 20, dt);
  const auto r = EnforceStability(Project(c.m, basis, dt), dt);
  const auto rows = ProbeProjection(basis, *c.m.unknowns, {c.probe});
  const auto run = RunReduced(r, rows, {"probe"}, {c.source}, 20000, false);
  EXPECT_GT(run.max_input_magnitude, 0.0);
  EXPECT_LE(run.max_state_magnitude, 1e6 * run.max_input_magnitude);
}

TEST(Timing, TotalAndTable)
{
  TimingRow row{"reduced", 80, 0.5, 1.25, 2.0, 3.0};
  EXPECT_DOUBLE_EQ(row.total(), 3.75);
  std::stringstream ss;
  WriteTimingTable(ss, {row}, {"note"});
  EXPECT_NE(ss.str().find("reduced"), std::string::npos);
  EXPECT_NE(ss.str().find("# note"), std::string::npos);
}

}  // namespace
}  // namespace fdtdmor
