// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FDTDMOR_CORE_SCENARIO_HPP
#define FDTDMOR_CORE_SCENARIO_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grid.hpp"
#include "postprocess.hpp"
#include "shifted_solver.hpp"

namespace fdtdmor
{

// Inclusive cell-index box filled with a medium.
struct MaterialRegion
{
  Index3 lo = {0, 0, 0};
  Index3 hi = {0, 0, 0};
  Medium medium;
};

enum class Engine
{
  Full,
  Reduced,
};

struct ReductionConfig
{
  int order = 80;  // reduced state dimension 2N~
  double radius = 1.1;
  int half_count = 2;
  double f_max = 0.0;  // 0: largest Gaussian source f_max
  double gamma = 0.9999;
  std::optional<bool> enforce;  // unset: enforce when s_factor >= 1
};

struct SolverConfig
{
  SolverMethod method = SolverMethod::Auto;
  double tol = 1.0e-4;
};

struct OutputConfig
{
  std::string directory = "out";
  bool time_series = true;
  bool spectra = true;
  bool resonances = true;
  bool eigenvalues = false;
  bool singular_values = false;
  bool timing = true;
  bool system_dump = false;
  bool reduced_model = false;
  // Paired full-FDTD run for the Speedup column, at min(s, 0.99) over the same
  // simulated time.
  bool reference_run = false;
};

struct SParamConfig
{
  std::string port1_probe;
  std::string port2_probe;
};

struct AnalyticalModesConfig
{
  std::vector<double> lengths;
  double eps_r = 1.0;
  ModeFamily family = ModeFamily::Tm2d;
  std::size_t count = 6;
};

struct ResonanceConfig
{
  double prominence = kDefaultProminence;
  std::size_t max_count = 6;
  std::string probe;  // empty: first probe
};

struct ScenarioConfig
{
  std::string name = "scenario";
  GridSpec grid;
  Medium background;
  std::vector<MaterialRegion> regions;
  std::vector<PecBox> pec_boxes;
  BoundarySpec boundaries;
  std::vector<SourceSpec> sources;
  std::vector<ProbeSpec> probes;
  double s_factor = 0.99;
  std::size_t steps = 1000;
  Engine engine = Engine::Full;
  ReductionConfig reduction;
  SolverConfig solver;
  OutputConfig outputs;
  std::optional<SParamConfig> sparams;
  std::optional<AnalyticalModesConfig> analytical_modes;
  ResonanceConfig resonances;
};

// Parses a JSON scenario document. Unknown keys and bad values raise ConfigError naming
// the field path (e.g. "reduction.order").
ScenarioConfig ParseScenario(std::string_view text);
ScenarioConfig LoadScenario(const std::string &path);
// Canonical JSON text; ParseScenario(SerializeScenario(c)) reproduces c.
std::string SerializeScenario(const ScenarioConfig &config);
void ValidateScenario(const ScenarioConfig &config);

// FNV-1a 64 of the canonical serialization.
std::uint64_t ScenarioHash(const ScenarioConfig &config);
std::string HashHex(std::uint64_t hash);

// Built-in templates: cavity2d, cavity3d, cube-demo, iris-waveguide. Parameters are
// key=value overrides documented in the README.
ScenarioConfig GenerateScenario(const std::string &name,
                                const std::map<std::string, std::string> &params = {});
std::vector<std::string> ScenarioTemplates();

}  // namespace fdtdmor

#endif  // FDTDMOR_CORE_SCENARIO_HPP
