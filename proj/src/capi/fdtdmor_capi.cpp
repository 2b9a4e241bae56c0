// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "fdtdmor/fdtdmor.h"

#include <fstream>
#include <map>
#include <memory>
#include <new>
#include <string>

#include "error.hpp"
#include "pipeline.hpp"
#include "stability.hpp"

struct fdtdmor_scenario
{
  fdtdmor::ScenarioConfig config;
  std::string serialized;
};

struct fdtdmor_run_result
{
  fdtdmor::RunSummary summary;
};

struct fdtdmor_eigen_result
{
  fdtdmor::EigenDump dump;
};

struct fdtdmor_compare_report
{
  fdtdmor::CompareReport report;
};

struct fdtdmor_system
{
  fdtdmor::ScenarioSystem system;
};

struct fdtdmor_reduced_model
{
  fdtdmor::ReducedModel model;
};

namespace
{

thread_local std::string last_error;
thread_local std::string last_error_path;

void ClearError()
{
  last_error.clear();
  last_error_path.clear();
}

fdtdmor_status Fail(fdtdmor_status status, const std::string &message)
{
  last_error = message;
  return status;
}

fdtdmor_status MapCode(fdtdmor::ErrorCode code)
{
  using fdtdmor::ErrorCode;
  switch (code)
  {
    case ErrorCode::Config:
    case ErrorCode::InvalidGrid:
    case ErrorCode::Stamp:
    case ErrorCode::Aliasing:
      return FDTDMOR_ERR_CONFIG;
    case ErrorCode::InvalidParameter:
      return FDTDMOR_ERR_INVALID_ARGUMENT;
    case ErrorCode::Divergence:
      return FDTDMOR_ERR_DIVERGENCE;
    case ErrorCode::SingularOperator:
      return FDTDMOR_ERR_SINGULAR;
    case ErrorCode::SolverFailure:
      return FDTDMOR_ERR_SOLVER;
    case ErrorCode::DegenerateSource:
    case ErrorCode::DegenerateReference:
      return FDTDMOR_ERR_DEGENERATE;
    case ErrorCode::Comparison:
      return FDTDMOR_ERR_COMPARISON;
    case ErrorCode::Io:
      return FDTDMOR_ERR_IO;
    case ErrorCode::InvariantViolation:
      break;
  }
  return FDTDMOR_ERR_INTERNAL;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
fdtdmor_status Guard(Fn &&fn)
{
  ClearError();
  try
  {
    fn();
    return FDTDMOR_OK;
  }
  catch (const fdtdmor::ConfigError &e)
  {
    last_error_path = e.path();
    return Fail(FDTDMOR_ERR_CONFIG, e.what());
  }
  catch (const fdtdmor::Error &e)
  {
    return Fail(MapCode(e.code()), e.what());
  }
  catch (const std::bad_alloc &)
  {
    return Fail(FDTDMOR_ERR_INTERNAL, "out of memory");
  }
  catch (const std::exception &e)
  {
    return Fail(FDTDMOR_ERR_INTERNAL, e.what());
  }
}

double MaxOrMinusOne(const Eigen::VectorXcd &v)
{
  return v.size() > 0 ? v.cwiseAbs().maxCoeff() : -1.0;
}

}  // namespace

extern "C" {

const char *fdtdmor_version(void)
{
  return fdtdmor::kToolVersion;
}

const char *fdtdmor_last_error(void)
{
  return last_error.c_str();
}

const char *fdtdmor_last_error_path(void)
{
  return last_error_path.c_str();
}

const char *fdtdmor_status_name(fdtdmor_status status)
{
  switch (status)
  {
    case FDTDMOR_OK:
      return "ok";
    case FDTDMOR_ERR_CONFIG:
      return "config error";
    case FDTDMOR_ERR_DIVERGENCE:
      return "divergence";
    case FDTDMOR_ERR_THRESHOLD:
      return "threshold exceeded";
    case FDTDMOR_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case FDTDMOR_ERR_SINGULAR:
      return "singular operator";
    case FDTDMOR_ERR_SOLVER:
      return "solver failure";
    case FDTDMOR_ERR_IO:
      return "i/o error";
    case FDTDMOR_ERR_DEGENERATE:
      return "degenerate input";
    case FDTDMOR_ERR_COMPARISON:
      return "comparison error";
    case FDTDMOR_ERR_INTERNAL:
      break;
  }
  return "internal error";
}

fdtdmor_status fdtdmor_scenario_load(const char *path, fdtdmor_scenario **out)
{
  if (!path || !out)
  {
    return Fail(FDTDMOR_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] { *out = new fdtdmor_scenario{fdtdmor::LoadScenario(path), {}}; });
}

fdtdmor_status fdtdmor_scenario_parse(const char *text, fdtdmor_scenario **out)
{
  if (!text || !out)
  {
    return Fail(FDTDMOR_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] { *out = new fdtdmor_scenario{fdtdmor::ParseScenario(text), {}}; });
}

fdtdmor_status fdtdmor_scenario_generate(const char *template_name, const char *const *params,
                                         size_t n_params, fdtdmor_scenario **out)
{
  if (!template_name || !out || (n_params > 0 && !params))
  {
    return Fail(FDTDMOR_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard(
      [&]
      {
        std::map<std::string, std::string> map;
        for (size_t i = 0; i < n_params; i++)
        {
          const std::string kv = params[i] ? params[i] : "";
          const auto eq = kv.find('=');
          if (eq == std::string::npos || eq == 0)
          {
            throw fdtdmor::ConfigError(kv, "template parameters take the form key=value");
          }
          map[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
        *out = new fdtdmor_scenario{fdtdmor::GenerateScenario(template_name, map), {}};
      });
}

size_t fdtdmor_template_count(void)
{
  return fdtdmor::ScenarioTemplates().size();
}

const char *fdtdmor_template_name(size_t index)
{
  static const std::vector<std::string> names = fdtdmor::ScenarioTemplates();
  return index < names.size() ? names[index].c_str() : nullptr;
}

const char *fdtdmor_scenario_serialize(fdtdmor_scenario *scenario)
{
  if (!scenario)
  {
    return nullptr;
  }
  scenario->serialized = fdtdmor::SerializeScenario(scenario->config);
  return scenario->serialized.c_str();
}

uint64_t fdtdmor_scenario_hash(const fdtdmor_scenario *scenario)
{
  return scenario ? fdtdmor::ScenarioHash(scenario->config) : 0;
}

fdtdmor_status fdtdmor_scenario_set_output_dir(fdtdmor_scenario *scenario, const char *directory)
{
  if (!scenario || !directory)
  {
    return Fail(FDTDMOR_ERR_INVALID_ARGUMENT, "null argument");
  }
  scenario->config.outputs.directory = directory;
  return FDTDMOR_OK;
}

fdtdmor_status fdtdmor_scenario_set_s_factor(fdtdmor_scenario *scenario, double s)
{
  if (!scenario)
  {
    return Fail(FDTDMOR_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard(
      [&]
      {
        auto c = scenario->config;
        c.s_factor = s;
        fdtdmor::ValidateScenario(c);
        scenario->config = std::move(c);
      });
}

fdtdmor_status fdtdmor_scenario_set_steps(fdtdmor_scenario *scenario, uint64_t steps)
{
  if (!scenario)
  {
    return Fail(FDTDMOR_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard(
      [&]
      {
        auto c = scenario->config;
        c.steps = static_cast<std::size_t>(steps);
        fdtdmor::ValidateScenario(c);
        scenario->config = std::move(c);
      });
}

fdtdmor_status fdtdmor_scenario_set_engine(fdtdmor_scenario *scenario, const char *engine)
{
  if (!scenario || !engine)
  {
    return Fail(FDTDMOR_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard(
      [&]
      {
        const std::string e = engine;
        if (e != "full" && e != "reduced")
        {
          throw fdtdmor::ConfigError("engine", "must be full or reduced");
        }
        auto c = scenario->config;
        c.engine = e == "full" ? fdtdmor::Engine::Full : fdtdmor::Engine::Reduced;
        fdtdmor::ValidateScenario(c);
        scenario->config = std::move(c);
      });
}

void fdtdmor_scenario_free(fdtdmor_scenario *scenario)
{
  delete scenario;
}

fdtdmor_status fdtdmor_run(const fdtdmor_scenario *scenario, int write_outputs, fdtdmor_run_result **out)
{
  if (!scenario || !out)
  {
    return Fail(FDTDMOR_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard(
      [&]
      {
        fdtdmor::RunOptions options;
        options.write_outputs = write_outputs != 0;
        *out = new fdtdmor_run_result{fdtdmor::RunScenario(scenario->config, options)};
      });
}

const char *fdtdmor_run_summary(const fdtdmor_run_result *result)
{
  return result ? result->summary.text.c_str() : nullptr;
}

double fdtdmor_run_dt(const fdtdmor_run_result *result)
{
  return result ? result->summary.dt : 0.0;
}

size_t fdtdmor_run_probe_count(const fdtdmor_run_result *result)
{
  return result ? result->summary.series.num_probes() : 0;
}

const char *fdtdmor_run_probe_name(const fdtdmor_run_result *result, size_t probe)
{
  if (!result || probe >= result->summary.series.names.size())
  {
    return nullptr;
  }
  return result->summary.series.names[probe].c_str();
}

size_t fdtdmor_run_step_count(const fdtdmor_run_result *result)
{
  return result ? result->summary.series.steps() : 0;
}

const double *fdtdmor_run_probe_values(const fdtdmor_run_result *result, size_t probe)
{
  if (!result || probe >= result->summary.series.values.size())
  {
    return nullptr;
  }
  return result->summary.series.values[probe].data();
}

size_t fdtdmor_run_resonance_count(const fdtdmor_run_result *result)
{
  return result ? result->summary.resonances.size() : 0;
}

double fdtdmor_run_resonance(const fdtdmor_run_result *result, size_t index)
{
  if (!result || index >= result->summary.resonances.size())
  {
    return 0.0;
  }
  return result->summary.resonances[index].frequency;
}

double fdtdmor_run_total_seconds(const fdtdmor_run_result *result)
{
  if (!result || result->summary.timing.empty())
  {
    return 0.0;
  }
  return result->summary.timing.back().total();
}

void fdtdmor_run_result_free(fdtdmor_run_result *result)
{
  delete result;
}

fdtdmor_status fdtdmor_eigen(const fdtdmor_scenario *scenario, int write_outputs,
                             fdtdmor_eigen_result **out)
{
  if (!scenario || !out)
  {
    return Fail(FDTDMOR_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&]
               { *out = new fdtdmor_eigen_result{fdtdmor::DumpEigenvalues(scenario->config, write_outputs != 0)}; });
}

const char *fdtdmor_eigen_summary(const fdtdmor_eigen_result *result)
{
  return result ? result->dump.text.c_str() : nullptr;
}

double fdtdmor_eigen_max_full(const fdtdmor_eigen_result *result)
{
  return result ? MaxOrMinusOne(result->dump.full) : -1.0;
}

double fdtdmor_eigen_max_full_enforced(const fdtdmor_eigen_result *result)
{
  return result ? MaxOrMinusOne(result->dump.full_enforced) : -1.0;
}

double fdtdmor_eigen_max_reduced(const fdtdmor_eigen_result *result)
{
  return result ? MaxOrMinusOne(result->dump.reduced) : -1.0;
}

double fdtdmor_eigen_max_reduced_enforced(const fdtdmor_eigen_result *result)
{
  return result ? MaxOrMinusOne(result->dump.reduced_enforced) : -1.0;
}

void fdtdmor_eigen_result_free(fdtdmor_eigen_result *result)
{
  delete result;
}

fdtdmor_status fdtdmor_compare(const char *reference, const char *candidate, fdtdmor_compare_report **out)
{
  if (!reference || !candidate || !out)
  {
    return Fail(FDTDMOR_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] { *out = new fdtdmor_compare_report{fdtdmor::CompareRuns(reference, candidate)}; });
}

int fdtdmor_compare_passed(const fdtdmor_compare_report *report)
{
  return report && report->report.passed ? 1 : 0;
}

const char *fdtdmor_compare_text(const fdtdmor_compare_report *report)
{
  return report ? report->report.text.c_str() : nullptr;
}

void fdtdmor_compare_report_free(fdtdmor_compare_report *report)
{
  delete report;
}

fdtdmor_status fdtdmor_system_assemble(const fdtdmor_scenario *scenario, fdtdmor_system **out)
{
  if (!scenario || !out)
  {
    return Fail(FDTDMOR_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard(
      [&]
      {
        *out = new fdtdmor_system{
            fdtdmor::BuildScenarioSystem(scenario->config, scenario->config.s_factor)};
      });
}

size_t fdtdmor_system_num_electric(const fdtdmor_system *system)
{
  return system ? system->system.matrices.num_electric() : 0;
}

size_t fdtdmor_system_num_magnetic(const fdtdmor_system *system)
{
  return system ? system->system.matrices.num_magnetic() : 0;
}

double fdtdmor_system_cfl_timestep(const fdtdmor_system *system)
{
  return system ? system->system.dt_max : 0.0;
}

fdtdmor_status fdtdmor_system_write_dump(const fdtdmor_system *system, const char *directory)
{
  if (!system || !directory)
  {
    return Fail(FDTDMOR_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] { fdtdmor::WriteSystemDump(system->system.matrices, directory); });
}

void fdtdmor_system_free(fdtdmor_system *system)
{
  delete system;
}

fdtdmor_status fdtdmor_reduce(const fdtdmor_scenario *scenario, fdtdmor_reduced_model **out)
{
  if (!scenario || !out)
  {
    return Fail(FDTDMOR_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard(
      [&]
      {
        const auto sys = fdtdmor::BuildScenarioSystem(scenario->config, scenario->config.s_factor);
        auto red = fdtdmor::ReduceScenario(scenario->config, sys);
        *out = new fdtdmor_reduced_model{std::move(red.model)};
      });
}

size_t fdtdmor_reduced_order(const fdtdmor_reduced_model *model)
{
  return model ? static_cast<size_t>(model->model.size()) : 0;
}

double fdtdmor_reduced_dt(const fdtdmor_reduced_model *model)
{
  return model ? model->model.dt : 0.0;
}

double fdtdmor_reduced_max_singular_value(const fdtdmor_reduced_model *model)
{
  if (!model)
  {
    return -1.0;
  }
  double out = -1.0;
  const auto status = Guard(
      [&]
      {
        const auto report = fdtdmor::ReducedStabilityCheck(model->model, model->model.dt);
        out = report.singular_values.size() > 0 ? report.singular_values.maxCoeff() : 0.0;
      });
  return status == FDTDMOR_OK ? out : -1.0;
}

fdtdmor_status fdtdmor_reduced_enforce(fdtdmor_reduced_model *model, double gamma)
{
  if (!model)
  {
    return Fail(FDTDMOR_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] { model->model = fdtdmor::EnforceStability(model->model, model->model.dt, gamma); });
}

fdtdmor_status fdtdmor_reduced_save(const fdtdmor_reduced_model *model, const char *path)
{
  if (!model || !path)
  {
    return Fail(FDTDMOR_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard(
      [&]
      {
        std::ofstream os(path, std::ios::binary);
        if (!os)
        {
          throw fdtdmor::Error(fdtdmor::ErrorCode::Io, std::string("cannot write '") + path + "'");
        }
        model->model.Save(os);
      });
}

fdtdmor_status fdtdmor_reduced_load(const char *path, fdtdmor_reduced_model **out)
{
  if (!path || !out)
  {
    return Fail(FDTDMOR_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard(
      [&]
      {
        std::ifstream is(path, std::ios::binary);
        if (!is)
        {
          throw fdtdmor::Error(fdtdmor::ErrorCode::Io, std::string("cannot read '") + path + "'");
        }
        *out = new fdtdmor_reduced_model{fdtdmor::ReducedModel::Load(is)};
      });
}

void fdtdmor_reduced_model_free(fdtdmor_reduced_model *model)
{
  delete model;
}

}  // extern "C"
