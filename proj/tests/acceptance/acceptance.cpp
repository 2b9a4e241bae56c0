// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

// Runs the eight acceptance criteria and prints one PASS/FAIL line per criterion.
// Usage: fdtdmor_acceptance [criterion ...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "full_fdtd.hpp"
#include "krylov.hpp"
#include "pipeline.hpp"
#include "reduced_sim.hpp"
#include "shifted_solver.hpp"
#include "stability.hpp"
#include "test_support.hpp"

namespace fdtdmor
{
namespace
{

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome
{
  bool passed = false;
  std::string detail;
};

double Seconds(Clock::time_point since)
{
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char *format, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

fs::path Scratch(const std::string &name)
{
  const fs::path p = fs::temp_directory_path() / ("fdtdmor_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

double MaxAbs(const Eigen::VectorXcd &v)
{
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

Outcome EigenvalueDemo()
{
  const auto start = Clock::now();
  auto c = GenerateScenario("cube-demo");
  const auto below = DumpEigenvalues(c, false);
  c.s_factor = 1.98;
  const auto above = DumpEigenvalues(c, false);
  const double lam_below = MaxAbs(below.full);
  const double lam_above = MaxAbs(above.full);
  const double lam_enforced = MaxAbs(above.full_enforced);
  double circle = 0.0;
  for (const auto &l : above.full_enforced)
  {
    circle = std::max(circle, std::abs(std::abs(l) - 1.0));
  }
  const double t = Seconds(start);
  const bool ok = lam_below <= 1.0 + 1e-9 && lam_above > 1.0 && above.full_enforced.size() > 0 &&
                  lam_enforced <= 1.0 + 1e-9 && circle <= 1e-6 && t < 60.0;
  return {ok, Fmt("max|l| s=0.99: %.12f, s=1.98: %.6f, enforced: %.12f, max||l|-1| enforced %.2e", lam_below,
                  lam_above, lam_enforced, circle) +
                  Fmt(", %.1f s", t)};
}

Outcome CubeResonances()
{
  const auto start = Clock::now();
  const auto run = RunScenario(GenerateScenario("cube-demo"), {false});
  std::vector<double> found;
  for (const auto &r : run.resonances)
  {
    found.push_back(r.frequency);
  }
  const auto cmp = CompareResonances({0.21199e9, 0.25963e9}, found);
  const double t = Seconds(start);
  bool ok = cmp.size() == 2 && t < 120.0;
  std::string detail;
  for (const auto &r : cmp)
  {
    ok = ok && r.relative_error <= 0.01;
    detail += Fmt("%.5f GHz -> %.5f GHz (%.3f%%); ", r.reference / 1e9, r.candidate / 1e9, 100 * r.relative_error);
  }
  return {ok, detail + Fmt("%.1f s", t)};
}

Outcome CavityAccuracy()
{
  const auto start = Clock::now();
  bool ok = true;
  std::string detail;
  for (const std::string s : {"0.99", "4.95"})
  {
    const auto c = GenerateScenario("cavity2d", {{"engine", "reduced"}, {"order", "80"}, {"s", s}});
    const auto run = RunScenario(c, {false});
    std::vector<double> found;
    for (const auto &r : run.resonances)
    {
      found.push_back(r.frequency);
    }
    const auto cmp = CompareResonances(run.analytical, found);
    double worst = 0.0;
    for (const auto &r : cmp)
    {
      worst = std::max(worst, r.relative_error);
    }
    ok = ok && cmp.size() == 6 && worst <= 0.01;
    detail += "s=" + s + (run.enforced ? " (enforced)" : "") + Fmt(": %g modes, worst %.3f%%; ",
                                                                 static_cast<double>(cmp.size()), 100 * worst);
  }
  const double t = Seconds(start);
  return {ok && t < 300.0, detail + Fmt("%.1f s", t)};
}

Outcome LateTimeStability()
{
  const auto start = Clock::now();
  auto c = GenerateScenario("cavity2d", {{"engine", "reduced"}, {"order", "80"}, {"s", "4.95"}});
  const auto system = BuildScenarioSystem(c, c.s_factor);
  const auto red = ReduceScenario(c, system);
  const auto rows = ProbeProjection(red.basis, *system.matrices.unknowns, c.probes);
  const auto run = RunReduced(red.model, rows, {c.probes[0].name}, c.sources, 1000000, false);
  const double t = Seconds(start);
  const bool ok = red.enforced && run.max_state_magnitude <= 1e6 * run.max_input_magnitude && t < 600.0;
  return {ok, Fmt("1e6 steps, max|x| %.3e, max|u| %.3e, ratio %.3e, ", run.max_state_magnitude,
                  run.max_input_magnitude, run.max_state_magnitude / run.max_input_magnitude) +
                  Fmt("%.1f s", t)};
}

Outcome StructurePreservation()
{
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> size(6, 40);
  double congruence = 0.0, f_min = 0.0, r_min = 1e300, lam = 0.0;
  const int systems = 25;
  for (int k = 0; k < systems; k++)
  {
    testing::RandomSystemOptions o;
    o.num_electric = size(rng);
    o.num_magnetic = size(rng);
    o.curl_density = 0.25;
    o.lossy = k % 3 != 0;
    const auto m = testing::RandomSystem(5000 + k, o);
    const int order = std::min(o.num_electric, o.num_magnetic) / 2 + 1;
    const auto basis = testing::RandomBasis(6000 + k, o.num_electric, o.num_magnetic, order);
    const double dt = testing::StableTimestep(m, 0.95);
    const auto r = Project(m, basis, dt);
    const auto pair = BuildUpdatePair(m, dt);
    const Eigen::MatrixXd v = testing::BlockDiag(basis.v1, basis.v2);
    const Eigen::MatrixXd rc = v.transpose() * Eigen::MatrixXd(pair.R) * v;
    const Eigen::MatrixXd fc = v.transpose() * Eigen::MatrixXd(pair.F) * v;
    congruence = std::max({congruence, (r.UpdateR() - rc).norm() / rc.norm(),
                           (r.UpdateF() - fc).norm() / std::max(1.0, fc.norm())});
    const Eigen::MatrixXd fsym = r.UpdateF() + r.UpdateF().transpose();
    const Eigen::MatrixXd rr = r.UpdateR();
    f_min = std::min(f_min, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(fsym).eigenvalues().minCoeff() /
                                std::max(1.0, fsym.norm()));
    r_min = std::min(r_min, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(rr).eigenvalues().minCoeff());
    lam = std::max(lam, MaxAbs(UpdateEigenvalues(r)));
  }
  const bool ok = congruence <= 1e-10 && f_min >= -1e-12 && r_min > 0.0 && lam <= 1.0 + 1e-10;
  return {ok, Fmt("%g systems, congruence %.2e, min eig(F+F^T) %.2e, min eig(R) %.3e", systems, congruence,
                  f_min, r_min) +
                  Fmt(", max|l| %.12f", lam)};
}

Outcome SolverEquivalence()
{
  std::mt19937 rng(6);
  std::uniform_int_distribution<int> size(5, 100);
  std::normal_distribution<double> g;
  double direct = 0.0, iterative = 0.0, residual = 0.0;
  int solves = 0;
  for (int k = 0; k < 20; k++)
  {
    testing::RandomSystemOptions o;
    o.num_electric = size(rng);
    o.num_magnetic = size(rng);
    o.curl_density = 4.0 / o.num_magnetic;
    o.lossy = k % 2 == 0;
    const auto m = testing::RandomSystem(7000 + k, o);
    const double dt = testing::StableTimestep(m, 0.9);
    const auto pair = BuildUpdatePair(m, dt);
    for (const Complex z : MakeExpansionPoints(1.1, 2, 0.3 / dt, dt).points)
    {
      const auto op = MakeShifted(pair, -z);
      const Eigen::MatrixXcd dense = op.ToDense();
      Eigen::VectorXcd b(dense.rows());
      for (Eigen::Index i = 0; i < b.size(); i++)
      {
        b[i] = {g(rng), g(rng)};
      }
      const Eigen::VectorXcd oracle = dense.fullPivLu().solve(b);
      SolverOptions opt;
      opt.method = SolverMethod::Direct;
      direct = std::max(direct, (ShiftedSolver(op, opt).Solve(b) - oracle).norm() / oracle.norm());
      opt.method = SolverMethod::Iterative;  // default residue limit 1e-4
      const Eigen::VectorXcd x = ShiftedSolver(op, opt).Solve(b);
      iterative = std::max(iterative, (x - oracle).norm() / oracle.norm());
      residual = std::max(residual, (op.Apply(x) - b).norm() / b.norm());
      solves++;
    }
  }
  const bool ok = direct <= 1e-10 && iterative <= 1e-4;
  return {ok, Fmt("%g shifted systems, direct error %.2e, iterative error %.2e (residual %.2e)", solves, direct,
                  iterative, residual)};
}

Outcome EnergyConservation()
{
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto random = [&](Eigen::Index n, Eigen::Index nh)
  {
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; i++)
    {
      x[i] = u(rng);
    }
    x.tail(nh) /= constants::eta0();
    return x;
  };
  auto c = GenerateScenario("cavity2d", {{"engine", "reduced"}, {"order", "80"}});
  const auto system = BuildScenarioSystem(c, 0.99);
  const auto &m = system.matrices;

  const FullStepper full(m, system.dt);
  Eigen::VectorXd x = random(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(m.num_magnetic()));
  const double e0 = full.Energy(x);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(m.input.cols());
  for (int n = 0; n < 1000; n++)
  {
    full.Step(x, zero);
  }
  const double full_drift = std::abs(full.Energy(x) - e0) / e0;

  const auto red = ReduceScenario(c, system);
  const ReducedStepper reduced(red.model);
  Eigen::VectorXd xr = random(red.model.size(), red.model.num_magnetic());
  const double r0 = reduced.Energy(xr);
  const Eigen::VectorXd zr = Eigen::VectorXd::Zero(red.model.num_inputs());
  for (int n = 0; n < 1000; n++)
  {
    reduced.Step(xr, zr);
  }
  const double red_drift = std::abs(reduced.Energy(xr) - r0) / r0;
  const bool ok = full_drift <= 1e-10 && red_drift <= 1e-10;
  return {ok, Fmt("1000 steps, full drift %.2e (N=%g), reduced drift %.2e (order %g)", full_drift,
                  static_cast<double>(m.size()), red_drift, static_cast<double>(red.model.size()))};
}

// Minimum over repeats of the mean reduced step time at a fixed order.
double ReducedStepSeconds(const ReducedModel &model)
{
  const ReducedStepper stepper(model);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(model.size());
  Eigen::VectorXd u = Eigen::VectorXd::Ones(model.num_inputs());
  double best = 1e300;
  for (int rep = 0; rep < 7; rep++)
  {
    const auto start = Clock::now();
    for (int n = 0; n < 2000; n++)
    {
      stepper.Step(x, u);
      u *= 0.5;  // decay so x stays finite
    }
    best = std::min(best, Seconds(start) / 2000);
  }
  return best;
}

Outcome WaveguideConsistency()
{
  const auto start = Clock::now();
  const fs::path ref_dir = Scratch("waveguide_full"), cand_dir = Scratch("waveguide_reduced");
  // Coarsened guide (21 x 201); both runs cover the same simulated time.
  auto ref = GenerateScenario("iris-waveguide", {{"coarsen", "2"}, {"steps", "10000"}, {"out", ref_dir.string()}});
  ref.outputs.timing = false;
  auto cand = GenerateScenario("iris-waveguide", {{"coarsen", "2"},
                                                  {"engine", "reduced"},
                                                  {"order", "200"},
                                                  {"s", "4.95"},
                                                  {"steps", "2000"},
                                                  {"out", cand_dir.string()}});
  cand.outputs.timing = false;
  RunScenario(ref);
  RunScenario(cand);
  const auto report = CompareRuns(ref_dir.string(), cand_dir.string());
  const double s21 = report.s21_max_db.value_or(1e300);

  // Diagnostic only: the same reduced order at s = 0.99 isolates the reduction error.
  const fs::path below_dir = Scratch("waveguide_reduced_099");
  auto below = GenerateScenario("iris-waveguide", {{"coarsen", "2"},
                                                   {"engine", "reduced"},
                                                   {"order", "200"},
                                                   {"steps", "10000"},
                                                   {"out", below_dir.string()}});
  below.outputs.timing = false;
  RunScenario(below);
  const double s21_below = CompareRuns(ref_dir.string(), below_dir.string()).s21_max_db.value_or(1e300);

  // Per-step cost at fixed order when N is roughly quadrupled.
  auto coarse = GenerateScenario("iris-waveguide", {{"coarsen", "2"}, {"engine", "reduced"}, {"order", "200"}, {"s", "4.95"}});
  auto fine = GenerateScenario("iris-waveguide", {{"coarsen", "1"}, {"engine", "reduced"}, {"order", "200"}, {"s", "4.95"}});
  const auto coarse_sys = BuildScenarioSystem(coarse, coarse.s_factor);
  const auto fine_sys = BuildScenarioSystem(fine, fine.s_factor);
  const double t_coarse = ReducedStepSeconds(ReduceScenario(coarse, coarse_sys).model);
  const double t_fine = ReducedStepSeconds(ReduceScenario(fine, fine_sys).model);
  const double change = std::abs(t_fine / t_coarse - 1.0);
  const double growth = static_cast<double>(fine_sys.matrices.size()) / static_cast<double>(coarse_sys.matrices.size());
  const double t = Seconds(start);
  const bool ok = report.s21_max_db.has_value() && s21 <= 1.0 && change < 0.2 && t < 600.0;
  return {ok, Fmt("max|dS21| %.2f dB over %g band points (reduced at s=0.99: %.2f dB); ", s21,
                  static_cast<double>(report.s21_band_points), s21_below) +
                  Fmt("reduced step %.2f us -> %.2f us (%.1f%%) for N x%.2f; ", 1e6 * t_coarse, 1e6 * t_fine,
                      100 * change, growth) +
                  Fmt("%.1f s", t)};
}

}  // namespace
}  // namespace fdtdmor

int main(int argc, char **argv)
{
  using Criterion = std::function<fdtdmor::Outcome()>;
  const std::vector<std::pair<std::string, Criterion>> criteria = {
      {"eigenvalue demo", fdtdmor::EigenvalueDemo},
      {"cube resonances", fdtdmor::CubeResonances},
      {"2-D cavity accuracy", fdtdmor::CavityAccuracy},
      {"late-time stability", fdtdmor::LateTimeStability},
      {"structure preservation", fdtdmor::StructurePreservation},
      {"solver equivalence", fdtdmor::SolverEquivalence},
      {"energy conservation", fdtdmor::EnergyConservation},
      {"waveguide self-consistency", fdtdmor::WaveguideConsistency},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; i++)
  {
    selected.push_back(std::atoi(argv[i]));
  }
  if (selected.empty())
  {
    for (int i = 1; i <= static_cast<int>(criteria.size()); i++)
    {
      selected.push_back(i);
    }
  }
  int failures = 0;
  for (const int id : selected)
  {
    if (id < 1 || id > static_cast<int>(criteria.size()))
    {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    const auto &[name, run] = criteria[static_cast<std::size_t>(id - 1)];
    fdtdmor::Outcome outcome;
    try
    {
      outcome = run();
    }
    catch (const std::exception &e)
    {
      outcome = {false, std::string("error: ") + e.what()};
    }
    failures += outcome.passed ? 0 : 1;
    std::printf("criterion %d (%s): %s  %s\n", id, name.c_str(), outcome.passed ? "PASS" : "FAIL",
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(selected.size()) - failures, selected.size());
  return failures == 0 ? 0 : 1;
}
