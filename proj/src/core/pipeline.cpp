// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "error.hpp"
#include "full_fdtd.hpp"
#include "linalg.hpp"

namespace fdtdmor
{

namespace fs = std::filesystem;

namespace
{

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point a, Clock::time_point b)
{
  return std::chrono::duration<double>(b - a).count();
}

std::string Format(double v, int precision = 17)
{
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::size_t ProbeIndex(const TimeSeries &series, const std::string &name)
{
  for (std::size_t i = 0; i < series.names.size(); i++)
  {
    if (series.names[i] == name)
    {
      return i;
    }
  }
  throw Error(ErrorCode::Comparison, "no probe named '" + name + "' in the time series");
}

std::ofstream OpenOutput(const fs::path &path)
{
  std::ofstream os(path);
  if (!os)
  {
    throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  }
  os << std::setprecision(17);
  return os;
}

double MaxMagnitude(const Eigen::VectorXcd &v)
{
  return v.size() > 0 ? v.cwiseAbs().maxCoeff() : 0.0;
}

struct FullEigen
{
  Eigen::VectorXcd values;
  Eigen::VectorXcd enforced;
  Eigen::VectorXd singular_values;
  bool structured = false;
};

// Structured route for lossless systems, dense LAPACK otherwise.
FullEigen ComputeFullEigen(const SystemMatrices &m, double dt, double gamma)
{
  FullEigen out;
  const double limit = 2.0 / dt;
  const auto ne = static_cast<Eigen::Index>(m.num_electric());
  const auto nh = static_cast<Eigen::Index>(m.num_magnetic());
  if (m.Lossless() && std::min(ne, nh) <= 8000)
  {
    out.structured = true;
    out.singular_values = linalg::NormalizedCurlSingularValues(m.eps, m.mu, Eigen::MatrixXd(m.curl));
    out.values = LosslessUpdateEigenvalues(out.singular_values, m.size(), dt);
    if (out.singular_values.size() > 0 && out.singular_values.maxCoeff() >= gamma * limit)
    {
      const Eigen::VectorXd clipped = out.singular_values.cwiseMin(gamma * limit);
      out.enforced = LosslessUpdateEigenvalues(clipped, m.size(), dt);
    }
    return out;
  }
  if (m.size() > kDenseEigenLimit)
  {
    throw Error(ErrorCode::InvalidParameter,
                "system with " + std::to_string(m.size()) +
                    " unknowns is too large for dense update eigenvalues (limit " +
                    std::to_string(kDenseEigenLimit) + ")");
  }
  const ReducedModel dense = FromSystem(m, dt);
  const StabilityReport report = ReducedStabilityCheck(dense, dt);
  out.singular_values = report.singular_values;
  out.values = UpdateEigenvalues(dense);
  if (report.singular_values.size() > 0 && report.singular_values.maxCoeff() >= gamma * limit)
  {
    out.enforced = UpdateEigenvalues(EnforceStability(dense, dt, gamma));
  }
  return out;
}

void WriteEigenFile(const fs::path &path, const std::string &provenance, const Eigen::VectorXcd &v,
                    std::vector<std::string> &files)
{
  auto os = OpenOutput(path);
  os << "# " << provenance << '\n';
  WriteEigenvalueCsv(os, v);
  files.push_back(path.string());
}

void WriteSingularFile(const fs::path &path, const std::string &provenance, const Eigen::VectorXd &v,
                       std::vector<std::string> &files)
{
  auto os = OpenOutput(path);
  os << "# " << provenance << '\n';
  WriteSingularValueCsv(os, v);
  files.push_back(path.string());
}

void WriteAnalyticalCsv(std::ostream &os, const std::vector<double> &modes,
                        const std::vector<std::string> &comments)
{
  std::vector<Resonance> rows;
  for (double f : modes)
  {
    rows.push_back({f, 0.0});
  }
  std::vector<std::string> all = comments;
  all.push_back("analytical cavity modes; magnitude column unused");
  WriteResonanceCsv(os, rows, all);
}

}  // namespace

double ReductionMaxFrequency(const ScenarioConfig &config)
{
  if (config.reduction.f_max > 0.0)
  {
    return config.reduction.f_max;
  }
  double f = 0.0;
  for (const auto &s : config.sources)
  {
    if (s.waveform.kind == Waveform::Kind::GaussianPulse)
    {
      f = std::max(f, s.waveform.f_max);
    }
    else if (s.waveform.kind == Waveform::Kind::Sinusoid)
    {
      f = std::max(f, s.waveform.f0);
    }
  }
  if (!(f > 0.0))
  {
    throw ConfigError("reduction.f_max", "required when no source carries a frequency");
  }
  return f;
}

ScenarioSystem BuildScenarioSystem(const ScenarioConfig &config, double s_factor)
{
  const auto t0 = Clock::now();
  ScenarioSystem sys;
  MaterialMap materials(config.grid, config.background);
  for (const auto &r : config.regions)
  {
    materials.FillBox(r.lo, r.hi, r.medium);
  }
  ApplyAbsorbers(config.boundaries, materials);
  sys.matrices = Assemble(config.grid, materials, config.boundaries, config.sources, config.pec_boxes);
  sys.dt_max = CflMaxTimestep(config.grid, materials);
  sys.s_factor = s_factor;
  sys.dt = s_factor * sys.dt_max;
  sys.setup_seconds = Seconds(t0, Clock::now());
  return sys;
}

ReductionResult ReduceScenario(const ScenarioConfig &config, const ScenarioSystem &system)
{
  const auto t0 = Clock::now();
  ReductionResult r;
  const double dt = system.dt;
  r.points = MakeExpansionPoints(config.reduction.radius, config.reduction.half_count,
                                 ReductionMaxFrequency(config), dt);
  BasisOptions options;
  options.solver.method = config.solver.method;
  options.solver.tol = config.solver.tol;
  r.basis = BuildBasis(system.matrices, r.points, static_cast<std::size_t>(config.reduction.order / 2),
                       dt, options);
  r.model = Project(system.matrices, r.basis, dt);
  r.before = ReducedStabilityCheck(r.model, dt, system.s_factor);
  const bool enforce = config.reduction.enforce.value_or(system.s_factor >= 1.0);
  if (enforce)
  {
    ReducedModel enforced = EnforceStability(r.model, dt, config.reduction.gamma);
    r.max_change = r.model.curl.size() > 0 ? (enforced.curl - r.model.curl).cwiseAbs().maxCoeff() : 0.0;
    r.model = std::move(enforced);
    r.after = ReducedStabilityCheck(r.model, dt, system.s_factor);
    r.enforced = true;
  }
  r.mor_seconds = Seconds(t0, Clock::now());
  return r;
}

EngineRun RunEngine(const ScenarioConfig &config)
{
  ValidateScenario(config);
  const ScenarioSystem sys = BuildScenarioSystem(config, config.s_factor);
  EngineRun run;
  run.timing.setup = sys.setup_seconds;
  run.max_input_magnitude = 0.0;
  if (config.engine == Engine::Full)
  {
    FullRunResult r = RunFull(sys.matrices, config.sources, config.probes, sys.dt, config.steps);
    run.series = std::move(r.series);
    run.timing.label = "full";
    run.timing.size = sys.matrices.size();
    run.timing.setup += r.setup_seconds;
    run.timing.run = r.run_seconds;
    run.max_state_magnitude = r.final_state.size() > 0 ? r.final_state.cwiseAbs().maxCoeff() : 0.0;
    return run;
  }
  ReductionResult red = ReduceScenario(config, sys);
  const Eigen::MatrixXd rows = ProbeProjection(red.basis, *sys.matrices.unknowns, config.probes);
  std::vector<std::string> names;
  for (const auto &p : config.probes)
  {
    names.push_back(p.name);
  }
  ReducedRunResult r = RunReduced(red.model, rows, names, config.sources, config.steps);
  run.series = std::move(r.series);
  run.series.dt = sys.dt;
  run.timing.label = "reduced";
  run.timing.size = static_cast<std::size_t>(red.model.size());
  run.timing.mor = red.mor_seconds;
  run.timing.run = r.run_seconds;
  run.max_state_magnitude = r.max_state_magnitude;
  run.max_input_magnitude = r.max_input_magnitude;
  run.reduction = std::move(red);
  return run;
}

std::string ProvenanceLine(const ScenarioConfig &config, double dt)
{
  std::ostringstream os;
  os << "fdtdmor " << kToolVersion << " scenario=" << HashHex(ScenarioHash(config))
     << " dt=" << Format(dt) << " s_factor=" << Format(config.s_factor, 12)
     << " engine=" << (config.engine == Engine::Full ? "full" : "reduced");
  return os.str();
}

std::vector<Resonance> DetectResonances(const TimeSeries &series, const std::string &probe,
                                        double prominence, std::size_t max_count)
{
  const std::size_t p = probe.empty() ? 0 : ProbeIndex(series, probe);
  if (p >= series.num_probes())
  {
    return {};
  }
  const Spectrum spec = FrequencyResponse(series, true, Window::Hann);
  return FindResonances(spec, p, prominence, max_count);
}

RunSummary RunScenario(const ScenarioConfig &config, const RunOptions &options)
{
  ValidateScenario(config);
  RunSummary summary;
  summary.output_directory = config.outputs.directory;
  EngineRun run = RunEngine(config);
  summary.dt = run.series.dt;
  summary.series = run.series;
  if (run.reduction)
  {
    summary.stability = run.reduction->after ? *run.reduction->after : run.reduction->before;
    summary.enforced = run.reduction->enforced;
  }

  std::ostringstream text;
  text << "scenario " << config.name << " (" << HashHex(ScenarioHash(config)) << ")\n";
  text << "engine " << (config.engine == Engine::Full ? "full" : "reduced") << ", s = "
       << Format(config.s_factor, 6) << ", dt = " << Format(summary.dt, 8) << " s, steps "
       << config.steps << "\n";
  if (run.reduction)
  {
    const auto &red = *run.reduction;
    text << "reduced order " << red.model.size() << ", max normalized curl singular value "
         << Format(red.before.singular_values.size() ? red.before.singular_values(0) : 0.0, 8)
         << " vs limit " << Format(red.before.limit, 8) << " (" << red.before.violating_count
         << " violating)\n";
    if (red.enforced)
    {
      text << "enforcement applied, max |dK| = " << Format(red.max_change, 6) << ", violations after: "
           << red.after->violating_count << "\n";
    }
  }

  std::vector<TimingRow> timing;
  if (config.outputs.reference_run)
  {
    ScenarioConfig ref = config;
    ref.engine = Engine::Full;
    ref.s_factor = std::min(config.s_factor, 0.99);
    ref.steps = static_cast<std::size_t>(
        std::ceil(static_cast<double>(config.steps) * config.s_factor / ref.s_factor - 1e-9));
    EngineRun ref_run = RunEngine(ref);
    ref_run.timing.label = "full reference";
    run.timing.speedup = run.timing.total() > 0.0 ? ref_run.timing.total() / run.timing.total() : 0.0;
    timing.push_back(ref_run.timing);
  }
  timing.push_back(run.timing);
  summary.timing = timing;

  std::vector<Complex> incident_dft;
  if (config.sparams)
  {
    ScenarioConfig inc = config;
    inc.pec_boxes.clear();
    inc.regions.clear();
    inc.outputs.reference_run = false;
    const EngineRun inc_run = RunEngine(inc);
    const auto &p1 = config.sparams->port1_probe;
    const auto &p2 = config.sparams->port2_probe;
    const auto &incident = inc_run.series.values[ProbeIndex(inc_run.series, p1)];
    summary.sparams = ExtractSParams(incident, run.series.values[ProbeIndex(run.series, p1)],
                                     run.series.values[ProbeIndex(run.series, p2)], summary.dt);
    incident_dft = RealDft(incident, PaddedLength(incident.size()));
  }

  if (config.outputs.resonances || config.analytical_modes)
  {
    summary.resonances = DetectResonances(summary.series, config.resonances.probe,
                                          config.resonances.prominence, config.resonances.max_count);
  }
  if (config.analytical_modes)
  {
    const auto &a = *config.analytical_modes;
    summary.analytical = AnalyticalCavityModes(a.lengths, a.eps_r, a.count, a.family);
    const auto cmp = CompareResonances(summary.analytical, [&]
                                       {
                                         std::vector<double> f;
                                         for (const auto &r : summary.resonances)
                                         {
                                           f.push_back(r.frequency);
                                         }
                                         return f;
                                       }());
    for (std::size_t i = 0; i < cmp.size(); i++)
    {
      text << "mode " << i + 1 << ": analytical " << Format(cmp[i].reference, 8) << " Hz, detected "
           << Format(cmp[i].candidate, 8) << " Hz, relative error " << Format(cmp[i].relative_error, 4)
           << "\n";
    }
  }
  else
  {
    for (std::size_t i = 0; i < summary.resonances.size(); i++)
    {
      text << "resonance " << i + 1 << ": " << Format(summary.resonances[i].frequency, 8) << " Hz\n";
    }
  }
  text << "max |state| " << Format(run.max_state_magnitude, 6) << "\n";
  summary.text = text.str();

  if (!options.write_outputs)
  {
    return summary;
  }

  const fs::path dir(config.outputs.directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
  {
    throw Error(ErrorCode::Io, "cannot create output directory '" + dir.string() + "': " + ec.message());
  }
  const std::string prov = ProvenanceLine(config, summary.dt);
  const std::vector<std::string> comments = {prov};
  auto &files = summary.files;

  if (config.outputs.time_series)
  {
    auto os = OpenOutput(dir / "timeseries.csv");
    WriteTimeSeriesCsv(os, summary.series, comments);
    files.push_back((dir / "timeseries.csv").string());
  }
  if (config.outputs.spectra)
  {
    const Spectrum spec = FrequencyResponse(summary.series);
    for (std::size_t p = 0; p < spec.names.size(); p++)
    {
      const fs::path path = dir / ("spectrum_" + spec.names[p] + ".csv");
      auto os = OpenOutput(path);
      WriteComplexSpectrumCsv(os, spec.frequencies, spec.amplitudes[p], comments);
      files.push_back(path.string());
    }
  }
  if (config.outputs.resonances)
  {
    auto os = OpenOutput(dir / "resonances.csv");
    WriteResonanceCsv(os, summary.resonances, comments);
    files.push_back((dir / "resonances.csv").string());
  }
  if (config.analytical_modes)
  {
    auto os = OpenOutput(dir / "analytical.csv");
    WriteAnalyticalCsv(os, summary.analytical, comments);
    files.push_back((dir / "analytical.csv").string());
  }
  if (summary.sparams)
  {
    const auto &s = *summary.sparams;
    {
      auto os = OpenOutput(dir / "s11.csv");
      WriteComplexSpectrumCsv(os, s.frequencies, s.s11, comments, s.valid);
    }
    {
      auto os = OpenOutput(dir / "s21.csv");
      WriteComplexSpectrumCsv(os, s.frequencies, s.s21, comments, s.valid);
    }
    {
      auto os = OpenOutput(dir / "incident_spectrum.csv");
      WriteComplexSpectrumCsv(os, s.frequencies, incident_dft, comments);
    }
    files.push_back((dir / "s11.csv").string());
    files.push_back((dir / "s21.csv").string());
    files.push_back((dir / "incident_spectrum.csv").string());
  }
  if (config.outputs.timing)
  {
    auto os = OpenOutput(dir / "timing.txt");
    WriteTimingTable(os, summary.timing, comments);
    files.push_back((dir / "timing.txt").string());
  }
  if (run.reduction)
  {
    const auto &red = *run.reduction;
    if (config.outputs.eigenvalues)
    {
      WriteEigenFile(dir / "eigenvalues.csv", prov, UpdateEigenvalues(red.model), files);
    }
    if (config.outputs.singular_values)
    {
      WriteSingularFile(dir / "singular_values.csv", prov, red.before.singular_values, files);
      if (red.after)
      {
        WriteSingularFile(dir / "singular_values_enforced.csv", prov, red.after->singular_values, files);
      }
    }
    if (config.outputs.reduced_model)
    {
      std::ofstream os(dir / "reduced_model.bin", std::ios::binary);
      if (!os)
      {
        throw Error(ErrorCode::Io, "cannot write reduced_model.bin");
      }
      red.model.Save(os);
      files.push_back((dir / "reduced_model.bin").string());
    }
  }
  else if (config.outputs.eigenvalues || config.outputs.singular_values)
  {
    const ScenarioSystem sys = BuildScenarioSystem(config, config.s_factor);
    const FullEigen eig = ComputeFullEigen(sys.matrices, sys.dt, config.reduction.gamma);
    if (config.outputs.eigenvalues)
    {
      WriteEigenFile(dir / "eigenvalues.csv", prov, eig.values, files);
    }
    if (config.outputs.singular_values)
    {
      WriteSingularFile(dir / "singular_values.csv", prov, eig.singular_values, files);
    }
  }
  if (config.outputs.system_dump)
  {
    const ScenarioSystem sys = BuildScenarioSystem(config, config.s_factor);
    WriteSystemDump(sys.matrices, (dir / "system").string());
    files.push_back((dir / "system").string());
  }
  {
    auto os = OpenOutput(dir / "summary.txt");
    os << "# " << prov << '\n' << summary.text;
    files.push_back((dir / "summary.txt").string());
  }
  return summary;
}

std::vector<ResonanceComparison> CompareResonances(const std::vector<double> &reference,
                                                   const std::vector<double> &candidate)
{
  std::vector<ResonanceComparison> out;
  for (double f : reference)
  {
    ResonanceComparison c;
    c.reference = f;
    if (candidate.empty())
    {
      c.candidate = 0.0;
      c.relative_error = 1.0;
    }
    else
    {
      c.candidate = *std::min_element(candidate.begin(), candidate.end(), [&](double a, double b)
                                      { return std::abs(a - f) < std::abs(b - f); });
      c.relative_error = f != 0.0 ? std::abs(c.candidate - f) / std::abs(f) : std::abs(c.candidate);
    }
    out.push_back(c);
  }
  return out;
}

std::optional<double> MaxS21DeviationDb(const ComplexSpectrumTable &reference,
                                        const ComplexSpectrumTable &reference_incident,
                                        const ComplexSpectrumTable &candidate, double band_fraction,
                                        std::size_t *band_points)
{
  if (band_points)
  {
    *band_points = 0;
  }
  if (reference_incident.values.empty() || candidate.frequencies.size() < 2)
  {
    return std::nullopt;
  }
  double peak = 0.0;
  for (const auto &v : reference_incident.values)
  {
    peak = std::max(peak, std::abs(v));
  }
  const auto &inc_f = reference_incident.frequencies;
  const auto incident_at = [&](double f)
  {
    const auto it = std::lower_bound(inc_f.begin(), inc_f.end(), f);
    std::size_t k = static_cast<std::size_t>(it - inc_f.begin());
    if (k >= inc_f.size())
    {
      k = inc_f.size() - 1;
    }
    if (k > 0 && std::abs(inc_f[k - 1] - f) < std::abs(inc_f[k] - f))
    {
      k--;
    }
    return std::abs(reference_incident.values[k]);
  };
  const auto &cf = candidate.frequencies;
  std::optional<double> worst;
  std::size_t count = 0;
  for (std::size_t i = 0; i < reference.frequencies.size(); i++)
  {
    const double f = reference.frequencies[i];
    if (incident_at(f) < band_fraction * peak)
    {
      continue;
    }
    if (f < cf.front() || f > cf.back())
    {
      continue;
    }
    auto it = std::upper_bound(cf.begin(), cf.end(), f);
    std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - cf.begin()), cf.size() - 1);
    std::size_t lo = hi > 0 ? hi - 1 : 0;
    const double db_lo = MagnitudeDb(candidate.values[lo]);
    const double db_hi = MagnitudeDb(candidate.values[hi]);
    const double w = cf[hi] > cf[lo] ? (f - cf[lo]) / (cf[hi] - cf[lo]) : 0.0;
    const double cand_db = db_lo + w * (db_hi - db_lo);
    const double dev = std::abs(MagnitudeDb(reference.values[i]) - cand_db);
    worst = worst ? std::max(*worst, dev) : dev;
    count++;
  }
  if (band_points)
  {
    *band_points = count;
  }
  return worst;
}

namespace
{

struct ArtifactSide
{
  std::optional<std::vector<Resonance>> resonances;
  std::optional<ComplexSpectrumTable> s21;
  std::optional<ComplexSpectrumTable> incident;
  std::optional<std::vector<std::string>> probes;
};

template <typename Fn>
auto ReadFile(const fs::path &path, Fn &&reader)
{
  std::ifstream is(path);
  if (!is)
  {
    throw Error(ErrorCode::Io, "cannot read '" + path.string() + "'");
  }
  return reader(is);
}

ArtifactSide LoadSide(const std::string &path)
{
  ArtifactSide side;
  const fs::path p(path);
  if (fs::is_regular_file(p))
  {
    side.resonances = ReadFile(p, ReadResonanceCsv);
    return side;
  }
  if (!fs::is_directory(p))
  {
    throw Error(ErrorCode::Io, "'" + path + "' is neither a directory nor a file");
  }
  if (fs::exists(p / "resonances.csv"))
  {
    side.resonances = ReadFile(p / "resonances.csv", ReadResonanceCsv);
  }
  if (fs::exists(p / "s21.csv"))
  {
    side.s21 = ReadFile(p / "s21.csv", ReadComplexSpectrumCsv);
  }
  if (fs::exists(p / "incident_spectrum.csv"))
  {
    side.incident = ReadFile(p / "incident_spectrum.csv", ReadComplexSpectrumCsv);
  }
  if (fs::exists(p / "timeseries.csv"))
  {
    side.probes = ReadFile(p / "timeseries.csv", ReadTimeSeriesCsv).names;
  }
  return side;
}

}  // namespace

CompareReport CompareRuns(const std::string &reference, const std::string &candidate,
                          const CompareThresholds &thresholds)
{
  const ArtifactSide ref = LoadSide(reference);
  const ArtifactSide cand = LoadSide(candidate);
  if (ref.probes && cand.probes && *ref.probes != *cand.probes)
  {
    throw Error(ErrorCode::Comparison, "reference and candidate probe sets differ");
  }
  CompareReport report;
  std::ostringstream text;
  bool compared = false;
  if (ref.resonances)
  {
    if (!cand.resonances)
    {
      throw Error(ErrorCode::Comparison, "candidate has no resonance list");
    }
    std::vector<double> rf, cf;
    for (const auto &r : *ref.resonances)
    {
      rf.push_back(r.frequency);
    }
    for (const auto &r : *cand.resonances)
    {
      cf.push_back(r.frequency);
    }
    report.resonances = CompareResonances(rf, cf);
    for (std::size_t i = 0; i < report.resonances.size(); i++)
    {
      const auto &c = report.resonances[i];
      const bool ok = c.relative_error <= thresholds.resonance_relative;
      report.passed = report.passed && ok;
      text << "resonance " << i + 1 << ": reference " << Format(c.reference, 10) << " Hz, candidate "
           << Format(c.candidate, 10) << " Hz, relative error " << Format(c.relative_error, 6)
           << (ok ? "" : "  EXCEEDS " + Format(thresholds.resonance_relative, 4)) << "\n";
    }
    compared = true;
  }
  if (ref.s21 && ref.incident)
  {
    if (!cand.s21)
    {
      throw Error(ErrorCode::Comparison, "candidate has no S21 spectrum");
    }
    report.s21_max_db = MaxS21DeviationDb(*ref.s21, *ref.incident, *cand.s21, thresholds.band_fraction,
                                          &report.s21_band_points);
    if (!report.s21_max_db)
    {
      throw Error(ErrorCode::Comparison, "S21 spectra share no in-band frequencies");
    }
    const bool ok = *report.s21_max_db <= thresholds.s21_db;
    report.passed = report.passed && ok;
    text << "S21 max deviation " << Format(*report.s21_max_db, 6) << " dB over "
         << report.s21_band_points << " in-band points" << (ok ? "" : "  EXCEEDS " + Format(thresholds.s21_db, 4))
         << "\n";
    compared = true;
  }
  if (!compared)
  {
    throw Error(ErrorCode::Comparison, "no comparable artifacts (resonances.csv or s21.csv)");
  }
  text << "result: " << (report.passed ? "PASS" : "FAIL") << "\n";
  report.text = text.str();
  return report;
}

EigenDump DumpEigenvalues(const ScenarioConfig &config, bool write_outputs)
{
  ValidateScenario(config);
  EigenDump dump;
  const ScenarioSystem sys = BuildScenarioSystem(config, config.s_factor);
  dump.dt = sys.dt;
  FullEigen eig = ComputeFullEigen(sys.matrices, sys.dt, config.reduction.gamma);
  dump.full = std::move(eig.values);
  dump.full_enforced = std::move(eig.enforced);
  dump.singular_values = std::move(eig.singular_values);
  dump.structured = eig.structured;

  std::ostringstream text;
  text << "full system: " << sys.matrices.size() << " unknowns, s = " << Format(config.s_factor, 6)
       << ", " << (dump.structured ? "lossless singular-value route" : "dense eigenvalues") << "\n";
  text << "  max |lambda| = " << Format(MaxMagnitude(dump.full), 15) << "\n";
  if (dump.full_enforced.size() > 0)
  {
    text << "  after enforcement: max |lambda| = " << Format(MaxMagnitude(dump.full_enforced), 15) << "\n";
  }
  if (config.engine == Engine::Reduced)
  {
    ScenarioConfig plain = config;
    plain.reduction.enforce = false;
    const ReductionResult red = ReduceScenario(plain, sys);
    dump.reduced = UpdateEigenvalues(red.model);
    text << "reduced model: order " << red.model.size() << ", max |lambda| = "
         << Format(MaxMagnitude(dump.reduced), 15) << "\n";
    const bool enforce = config.reduction.enforce.value_or(config.s_factor >= 1.0);
    if (enforce || !red.before.stable())
    {
      dump.reduced_enforced = UpdateEigenvalues(EnforceStability(red.model, sys.dt, config.reduction.gamma));
      text << "  after enforcement: max |lambda| = " << Format(MaxMagnitude(dump.reduced_enforced), 15)
           << "\n";
    }
  }
  dump.text = text.str();
  if (!write_outputs)
  {
    return dump;
  }
  const fs::path dir(config.outputs.directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
  {
    throw Error(ErrorCode::Io, "cannot create output directory '" + dir.string() + "': " + ec.message());
  }
  const std::string prov = ProvenanceLine(config, sys.dt);
  WriteEigenFile(dir / "eigenvalues.csv", prov, dump.full, dump.files);
  WriteSingularFile(dir / "singular_values.csv", prov, dump.singular_values, dump.files);
  if (dump.full_enforced.size() > 0)
  {
    WriteEigenFile(dir / "eigenvalues_enforced.csv", prov, dump.full_enforced, dump.files);
  }
  if (dump.reduced.size() > 0)
  {
    WriteEigenFile(dir / "reduced_eigenvalues.csv", prov, dump.reduced, dump.files);
  }
  if (dump.reduced_enforced.size() > 0)
  {
    WriteEigenFile(dir / "reduced_eigenvalues_enforced.csv", prov, dump.reduced_enforced, dump.files);
  }
  return dump;
}

}  // namespace fdtdmor
