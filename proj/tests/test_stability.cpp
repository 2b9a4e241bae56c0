// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "error.hpp"
#include "krylov.hpp"
#include "linalg.hpp"
#include "stability.hpp"
#include "test_support.hpp"

namespace fdtdmor
{
namespace
{

double SpectralNorm(const Eigen::MatrixXd &a)
{
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
}

// Random dense reduced model with SPD material blocks and PSD losses.
ReducedModel RandomReduced(std::uint32_t seed, int n, bool lossy = true)
{
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  auto random = [&](int r, int c)
  {
    Eigen::MatrixXd a(r, c);
    for (int i = 0; i < a.size(); i++)
    {
      a.data()[i] = g(rng);
    }
    return a;
  };
  auto spd = [&](double floor)
  {
    const Eigen::MatrixXd a = random(n, n);
    return Eigen::MatrixXd(a * a.transpose() / n + floor * Eigen::MatrixXd::Identity(n, n));
  };
  ReducedModel m;
  m.d_eps = spd(0.5);
  m.d_mu = spd(0.5);
  m.d_sigma_e = lossy ? Eigen::MatrixXd(spd(0.0) * 0.1) : Eigen::MatrixXd(Eigen::MatrixXd::Zero(n, n));
  m.d_sigma_m = lossy ? Eigen::MatrixXd(spd(0.0) * 0.1) : Eigen::MatrixXd(Eigen::MatrixXd::Zero(n, n));
  m.curl = random(n, n);
  m.input = random(2 * n, 2);
  m.dt = 1.0;
  return m;
}

double MaxSigma(const ReducedModel &m)
{
  return linalg::NormalizedCurlSingularValues(m.d_eps, m.d_mu, m.curl).maxCoeff();
}

TEST(StabilityCheck, SingularValuesSortedAndCounted)
{
  const auto m = RandomReduced(1, 8);
  const double sigma = MaxSigma(m);
  const double dt = 3.0 / sigma;  // limit 2/dt sits below the largest value
  const auto report = ReducedStabilityCheck(m, dt, 3.0);
  ASSERT_EQ(report.singular_values.size(), 8);
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < report.singular_values.size(); i++)
  {
    EXPECT_GE(report.singular_values[i], 0.0);
    if (i > 0)
    {
      EXPECT_LE(report.singular_values[i], report.singular_values[i - 1]);
    }
    count += report.singular_values[i] >= 2.0 / dt ? 1 : 0;
  }
  EXPECT_EQ(report.violating_count, count);
  EXPECT_GT(count, 0u);
  EXPECT_FALSE(report.stable());
}

TEST(StabilityCheck, ZeroCurlIsAlwaysStable)
{
  auto m = RandomReduced(2, 5);
  m.curl.setZero();
  const auto report = ReducedStabilityCheck(m, 1e6);
  EXPECT_EQ(report.singular_values.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_TRUE(report.stable());
}

TEST(StabilityCheck, IndefiniteMaterialBlockIsInvariantViolation)
{
  auto m = RandomReduced(3, 4);
  m.d_eps(0, 0) = -5.0;
  try
  {
    ReducedStabilityCheck(m, 1.0);
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::InvariantViolation);
  }
}

TEST(StabilityCheck, CubeBelowAndAboveCfl)
{
  const GridSpec grid = testing::Grid3d(4, 0.25);
  const auto m = Assemble(grid, MaterialMap(grid), testing::AllFaces(FaceCondition::Kind::Pec), {});
  const double dt = CflMaxTimestep(grid, MaterialMap(grid));
  EXPECT_EQ(ReducedStabilityCheck(FromSystem(m, 0.99 * dt), 0.99 * dt).violating_count, 0u);
  EXPECT_GT(ReducedStabilityCheck(FromSystem(m, 1.98 * dt), 1.98 * dt).violating_count, 0u);
}

TEST(Enforce, NoClipRoundTrip)
{
  const auto m = RandomReduced(4, 10);
  const double dt = 0.5 * 2.0 / MaxSigma(m);
  const auto out = EnforceStability(m, dt);
  EXPECT_LE((out.curl - m.curl).norm(), 1e-10 * m.curl.norm());
  EXPECT_EQ(out.d_eps, m.d_eps);
  EXPECT_EQ(out.input, m.input);
}

TEST(Enforce, GammaOutsideOpenIntervalRejected)
{
  const auto m = RandomReduced(5, 3);
  EXPECT_THROW(EnforceStability(m, 1.0, 1.0), Error);
  EXPECT_THROW(EnforceStability(m, 1.0, 0.0), Error);
  EXPECT_THROW(EnforceStability(m, 1.0, 1.5), Error);
}

TEST(EnforceProperty, ClipIdempotentBoundedAndStable)
{
  std::mt19937 rng(61);
  std::uniform_real_distribution<double> s(1.2, 6.0), gamma(0.5, 0.99999);
  for (std::uint32_t seed = 0; seed < 30; seed++)
  {
    const int n = 3 + static_cast<int>(seed % 12);
    const auto m = RandomReduced(100 + seed, n, seed % 3 != 0);
    const double pre = MaxSigma(m);
    const double dt = s(rng) * 2.0 / pre;
    const double g = gamma(rng);
    const double cap = g * 2.0 / dt;
    const auto once = EnforceStability(m, dt, g);
    const auto twice = EnforceStability(once, dt, g);
    EXPECT_LE((twice.curl - once.curl).norm(), 1e-10 * once.curl.norm());
    EXPECT_NEAR(MaxSigma(once), std::min(pre, cap), 1e-10 * pre);
    EXPECT_EQ(ReducedStabilityCheck(once, dt).violating_count, 0u);

    const Eigen::VectorXd sv = linalg::NormalizedCurlSingularValues(m.d_eps, m.d_mu, m.curl);
    double excess = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); i++)
    {
      excess += std::max(0.0, sv[i] - cap);
    }
    // The clipped directions live in the normalized frame; map the bound back through
    // the material square roots.
    const double scale = SpectralNorm(linalg::SymmetricPower(m.d_eps, 0.5)) *
                         SpectralNorm(linalg::SymmetricPower(m.d_mu, 0.5));
    EXPECT_LE(SpectralNorm(once.curl - m.curl), scale * excess * (1.0 + 1e-10));

    auto stepped = once;
    stepped.dt = dt;
    EXPECT_LE(UpdateEigenvalues(stepped).cwiseAbs().maxCoeff(), 1.0 + 1e-9) << "seed " << seed;
  }
}

TEST(EnforceProperty, NormalizedPerturbationBoundedByExcess)
{
  for (std::uint32_t seed = 0; seed < 20; seed++)
  {
    const auto m = RandomReduced(300 + seed, 6);
    const double dt = 4.0 * 2.0 / MaxSigma(m);
    const auto out = EnforceStability(m, dt, 0.9999);
    const Eigen::MatrixXd ei = linalg::SymmetricPower(m.d_eps, -0.5);
    const Eigen::MatrixXd mi = linalg::SymmetricPower(m.d_mu, -0.5);
    const Eigen::VectorXd sv = linalg::NormalizedCurlSingularValues(m.d_eps, m.d_mu, m.curl);
    const double cap = 0.9999 * 2.0 / dt;
    double excess = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); i++)
    {
      excess += std::max(0.0, sv[i] - cap);
    }
    EXPECT_LE(SpectralNorm(ei * (out.curl - m.curl) * mi), excess * (1.0 + 1e-10));
  }
}

TEST(UpdateEigenvalues, IdentityUpdateIsOne)
{
  const Eigen::VectorXcd l = UpdateEigenvalues(Eigen::MatrixXd::Identity(6, 6), Eigen::MatrixXd::Zero(6, 6));
  for (Eigen::Index i = 0; i < l.size(); i++)
  {
    EXPECT_EQ(l[i], Complex(1.0, 0.0));
  }
}

TEST(UpdateEigenvalues, SingularSumRejected)
{
  const Eigen::MatrixXd r = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::MatrixXd f = -Eigen::MatrixXd::Identity(3, 3);
  try
  {
    UpdateEigenvalues(r, f);
    FAIL();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::SingularOperator);
  }
}

TEST(UpdateEigenvalues, LosslessLineOnUnitCircle)
{
  for (int cells : {5, 12, 30})
  {
    const GridSpec grid = testing::Grid1d(cells, 0.01);
    BoundarySpec b = testing::AllFaces(FaceCondition::Kind::Pec);
    b.face(2, true).kind = FaceCondition::Kind::Pmc;
    const auto m = Assemble(grid, MaterialMap(grid), b, {});
    const double dt = 0.99 * CflMaxTimestep(grid, MaterialMap(grid));
    const auto l = UpdateEigenvalues(FromSystem(m, dt));
    EXPECT_LE((l.cwiseAbs().array() - 1.0).abs().maxCoeff(), 1e-9) << cells;
  }
}

TEST(UpdateEigenvalues, LossyAbsorberLineInsideDisk)
{
  const GridSpec grid = testing::Grid1d(60, 0.01);
  BoundarySpec b = testing::AllFaces(FaceCondition::Kind::Pec);
  b.face(2, true).kind = FaceCondition::Kind::MatchedAbsorber;
  b.face(2, true).absorber = {8, 3, 1e-6};
  MaterialMap mats(grid);
  ApplyAbsorbers(b, mats);
  const auto m = Assemble(grid, mats, b, {});
  const double dt = 0.99 * CflMaxTimestep(grid, MaterialMap(grid));
  const auto l = UpdateEigenvalues(FromSystem(m, dt));
  EXPECT_LT(l.cwiseAbs().maxCoeff(), 1.0);
}

// Lossless route: each normalized curl singular value gives a reciprocal pair.
TEST(UpdateEigenvalues, StructuredRouteMatchesDense)
{
  const GridSpec grid = testing::Grid3d(4, 0.25);
  const auto m = Assemble(grid, MaterialMap(grid), testing::AllFaces(FaceCondition::Kind::Pec), {});
  for (double s : {0.99, 1.98})
  {
    const double dt = s * CflMaxTimestep(grid, MaterialMap(grid));
    const Eigen::VectorXcd dense = UpdateEigenvalues(FromSystem(m, dt));
    const Eigen::VectorXd sv =
        linalg::NormalizedCurlSingularValues(m.eps, m.mu, Eigen::MatrixXd(m.curl));
    const Eigen::VectorXcd structured = LosslessUpdateEigenvalues(sv, m.size(), dt);
    ASSERT_EQ(structured.size(), dense.size());
    std::vector<bool> used(static_cast<std::size_t>(dense.size()), false);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < structured.size(); i++)
    {
      double best = std::numeric_limits<double>::infinity();
      Eigen::Index at = -1;
      for (Eigen::Index j = 0; j < dense.size(); j++)
      {
        const double d = std::abs(structured[i] - dense[j]);
        if (!used[static_cast<std::size_t>(j)] && d < best)
        {
          best = d;
          at = j;
        }
      }
      used[static_cast<std::size_t>(at)] = true;
      worst = std::max(worst, best / std::max(1.0, std::abs(dense[at])));
    }
    EXPECT_LE(worst, 1e-6) << "s=" << s;
  }
}

TEST(UpdateEigenvalues, EnforcedCubeBackOnUnitCircle)
{
  const GridSpec grid = testing::Grid3d(4, 0.25);
  const auto m = Assemble(grid, MaterialMap(grid), testing::AllFaces(FaceCondition::Kind::Pec), {});
  const double dt = 1.98 * CflMaxTimestep(grid, MaterialMap(grid));
  const auto full = FromSystem(m, dt);
  EXPECT_GT(UpdateEigenvalues(full).cwiseAbs().maxCoeff(), 1.0 + 1e-9);
  const auto fixed = EnforceStability(full, dt);
  const auto l = UpdateEigenvalues(fixed);
  EXPECT_LE(l.cwiseAbs().maxCoeff(), 1.0 + 1e-9);
  EXPECT_LE((l.cwiseAbs().array() - 1.0).abs().maxCoeff(), 1e-6);
}

}  // namespace
}  // namespace fdtdmor
