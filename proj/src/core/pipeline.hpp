// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FDTDMOR_CORE_PIPELINE_HPP
#define FDTDMOR_CORE_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "assembly.hpp"
#include "krylov.hpp"
#include "postprocess.hpp"
#include "reduced_sim.hpp"
#include "scenario.hpp"
#include "stability.hpp"

namespace fdtdmor
{

inline constexpr const char *kToolVersion = "0.1.0";

struct ScenarioSystem
{
  SystemMatrices matrices;
  double dt_max = 0.0;  // CFL limit
  double dt = 0.0;
  double s_factor = 0.0;
  double setup_seconds = 0.0;
};

// Materials, absorbers and assembly; dt = s_factor * CFL limit.
ScenarioSystem BuildScenarioSystem(const ScenarioConfig &config, double s_factor);

struct ReductionResult
{
  ProjectionBasis basis;
  ReducedModel model;          // after enforcement when it ran
  StabilityReport before;
  std::optional<StabilityReport> after;
  ExpansionPointSet points;
  bool enforced = false;
  double max_change = 0.0;     // |K~' - K~|_max, 0 when enforcement did not run
  double mor_seconds = 0.0;
};

// Krylov basis, projection, stability check and (when due) enforcement.
ReductionResult ReduceScenario(const ScenarioConfig &config, const ScenarioSystem &system);

// Effective reduction frequency: explicit f_max or the largest Gaussian source f_max.
double ReductionMaxFrequency(const ScenarioConfig &config);

struct EngineRun
{
  TimeSeries series;
  TimingRow timing;
  std::optional<ReductionResult> reduction;
  double max_state_magnitude = 0.0;
  double max_input_magnitude = 0.0;
};

// Runs the configured engine at config.s_factor for config.steps steps.
EngineRun RunEngine(const ScenarioConfig &config);

struct RunSummary
{
  std::string output_directory;
  double dt = 0.0;
  TimeSeries series;
  std::vector<TimingRow> timing;
  std::vector<Resonance> resonances;
  std::vector<double> analytical;
  std::optional<SParameters> sparams;
  std::optional<StabilityReport> stability;
  bool enforced = false;
  std::vector<std::string> files;
  std::string text;  // human-readable report
};

struct RunOptions
{
  bool write_outputs = true;
};

RunSummary RunScenario(const ScenarioConfig &config, const RunOptions &options = {});

// Provenance comment carried by every output file.
std::string ProvenanceLine(const ScenarioConfig &config, double dt);

// Peaks picked from a Hann-tapered padded spectrum of one probe.
std::vector<Resonance> DetectResonances(const TimeSeries &series, const std::string &probe,
                                        double prominence, std::size_t max_count);

struct ResonanceComparison
{
  double reference = 0.0;
  double candidate = 0.0;
  double relative_error = 0.0;
};

struct CompareThresholds
{
  double resonance_relative = 0.01;
  double s21_db = 1.0;
  double band_fraction = 0.1;
};

struct CompareReport
{
  std::vector<ResonanceComparison> resonances;
  std::optional<double> s21_max_db;  // over the band where the incident >= band_fraction * peak
  std::size_t s21_band_points = 0;
  bool passed = true;
  std::string text;
};

// Each side is an output directory (resonances.csv, s21.csv, incident_spectrum.csv,
// timeseries.csv) or a single resonance CSV file.
CompareReport CompareRuns(const std::string &reference, const std::string &candidate,
                          const CompareThresholds &thresholds = {});

// Pairs each reference resonance with the nearest candidate.
std::vector<ResonanceComparison> CompareResonances(const std::vector<double> &reference,
                                                   const std::vector<double> &candidate);

// Largest |dB(ref) - dB(cand)| over reference frequencies where the incident magnitude
// reaches band_fraction of its peak; candidate values are linearly interpolated in dB.
std::optional<double> MaxS21DeviationDb(const ComplexSpectrumTable &reference,
                                        const ComplexSpectrumTable &reference_incident,
                                        const ComplexSpectrumTable &candidate, double band_fraction,
                                        std::size_t *band_points = nullptr);

struct EigenDump
{
  Eigen::VectorXcd full;            // update eigenvalues at the scenario s
  Eigen::VectorXcd full_enforced;   // after enforcement (empty if no violation)
  Eigen::VectorXd singular_values;  // normalized curl, full system
  Eigen::VectorXcd reduced;         // reduced engine only
  Eigen::VectorXcd reduced_enforced;
  double dt = 0.0;
  bool structured = false;  // eigenvalues from the lossless singular-value route
  std::vector<std::string> files;
  std::string text;
};

// Full-system eigenvalues use the lossless singular-value route when possible and dense
// LAPACK otherwise (up to kDenseEigenLimit unknowns).
inline constexpr std::size_t kDenseEigenLimit = 2000;
EigenDump DumpEigenvalues(const ScenarioConfig &config, bool write_outputs = true);

}  // namespace fdtdmor

#endif  // FDTDMOR_CORE_PIPELINE_HPP
