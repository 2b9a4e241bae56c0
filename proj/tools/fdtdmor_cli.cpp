// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line driver. Links only the C interface.

#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fdtdmor/fdtdmor.h"

namespace
{

// Exit codes: 0 success, 1 config error, 2 divergence, 3 comparison threshold failure,
// 4 anything else.
int ExitCode(fdtdmor_status status)
{
  switch (status)
  {
    case FDTDMOR_OK:
      return 0;
    case FDTDMOR_ERR_CONFIG:
      return 1;
    case FDTDMOR_ERR_DIVERGENCE:
      return 2;
    case FDTDMOR_ERR_THRESHOLD:
      return 3;
    default:
      return 4;
  }
}

std::mutex output_mutex;

int Report(fdtdmor_status status, const std::string &context)
{
  if (status != FDTDMOR_OK)
  {
    std::lock_guard<std::mutex> lock(output_mutex);
    std::cerr << "error: " << context << ": " << fdtdmor_status_name(status) << ": "
              << fdtdmor_last_error() << "\n";
  }
  return ExitCode(status);
}

struct Overrides
{
  std::optional<double> s_factor;
  std::optional<std::uint64_t> steps;
  std::optional<std::string> engine;
  std::optional<std::string> output_dir;
};

// Loads a scenario file and applies command-line overrides; returns a status.
fdtdmor_status LoadWithOverrides(const std::string &path, const Overrides &o,
                                 fdtdmor_scenario **scenario)
{
  fdtdmor_status st = fdtdmor_scenario_load(path.c_str(), scenario);
  if (st != FDTDMOR_OK)
  {
    return st;
  }
  if (o.engine && (st = fdtdmor_scenario_set_engine(*scenario, o.engine->c_str())) != FDTDMOR_OK)
  {
    return st;
  }
  if (o.s_factor && (st = fdtdmor_scenario_set_s_factor(*scenario, *o.s_factor)) != FDTDMOR_OK)
  {
    return st;
  }
  if (o.steps && (st = fdtdmor_scenario_set_steps(*scenario, *o.steps)) != FDTDMOR_OK)
  {
    return st;
  }
  if (o.output_dir)
  {
    st = fdtdmor_scenario_set_output_dir(*scenario, o.output_dir->c_str());
  }
  return st;
}

int RunOne(const std::string &path, Overrides o, bool quiet)
{
  fdtdmor_scenario *scenario = nullptr;
  fdtdmor_status st = LoadWithOverrides(path, o, &scenario);
  if (st != FDTDMOR_OK)
  {
    fdtdmor_scenario_free(scenario);
    return Report(st, path);
  }
  fdtdmor_run_result *result = nullptr;
  st = fdtdmor_run(scenario, 1, &result);
  fdtdmor_scenario_free(scenario);
  if (st != FDTDMOR_OK)
  {
    return Report(st, path);
  }
  if (!quiet)
  {
    std::lock_guard<std::mutex> lock(output_mutex);
    std::cout << fdtdmor_run_summary(result);
  }
  fdtdmor_run_result_free(result);
  return 0;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Finite-difference time-domain solver with stability-enforced model order reduction"};
  app.set_version_flag("--version", std::string(fdtdmor_version()));
  app.require_subcommand(1);

  std::vector<std::string> run_paths;
  Overrides run_overrides;
  int batch = 0;
  bool quiet = false;
  auto *run = app.add_subcommand("run", "Run one or more scenario files");
  run->add_option("scenario", run_paths, "Scenario file(s)")->required()->check(CLI::ExistingFile);
  run->add_option("--s", run_overrides.s_factor, "Override the time step factor s");
  run->add_option("--steps", run_overrides.steps, "Override the step count");
  run->add_option("--engine", run_overrides.engine, "Override the engine")
      ->check(CLI::IsMember({"full", "reduced"}));
  run->add_option("--out", run_overrides.output_dir,
                  "Output directory (one scenario) or parent directory (batch)");
  run->add_option("--batch", batch,
                  "Run the scenarios concurrently with up to this many workers; each writes to "
                  "its own directory")
      ->check(CLI::NonNegativeNumber);
  run->add_flag("-q,--quiet", quiet, "Suppress the run summary");

  std::string ref_path, cand_path;
  auto *compare = app.add_subcommand("compare", "Compare two sets of run artifacts");
  compare->add_option("reference", ref_path, "Reference output directory or resonance CSV")->required();
  compare->add_option("candidate", cand_path, "Candidate output directory or resonance CSV")->required();

  std::string eigen_path;
  Overrides eigen_overrides;
  auto *eigen = app.add_subcommand("eigen", "Dump update eigenvalues of a scenario");
  eigen->add_option("scenario", eigen_path, "Scenario file")->required()->check(CLI::ExistingFile);
  eigen->add_option("--s", eigen_overrides.s_factor, "Override the time step factor s");
  eigen->add_option("--engine", eigen_overrides.engine, "Override the engine")
      ->check(CLI::IsMember({"full", "reduced"}));
  eigen->add_option("--out", eigen_overrides.output_dir, "Output directory");

  std::string template_name;
  std::vector<std::string> params;
  std::string gen_output;
  auto *gen = app.add_subcommand("gen", "Print a built-in scenario template as JSON");
  std::vector<std::string> names;
  for (size_t i = 0; i < fdtdmor_template_count(); i++)
  {
    names.emplace_back(fdtdmor_template_name(i));
  }
  gen->add_option("template", template_name, "Template name")->required()->check(CLI::IsMember(names));
  gen->add_option("params", params, "key=value overrides");
  gen->add_option("-o,--output", gen_output, "Write to this file instead of stdout");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*run)
  {
    if (run_paths.size() == 1 && batch == 0)
    {
      return RunOne(run_paths[0], run_overrides, quiet);
    }
    // Batch: each scenario writes below <out>/<file stem> (or its own configured
    // directory when --out is absent, suffixed by the stem to stay isolated).
    const std::size_t workers = batch > 0 ? static_cast<std::size_t>(batch) : 1;
    std::vector<int> codes(run_paths.size(), 0);
    std::size_t next = 0;
    std::mutex next_mutex;
    auto worker = [&]
    {
      for (;;)
      {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lock(next_mutex);
          if (next >= run_paths.size())
          {
            return;
          }
          i = next++;
        }
        Overrides o = run_overrides;
        const std::string stem = std::filesystem::path(run_paths[i]).stem().string();
        const std::string parent = run_overrides.output_dir ? *run_overrides.output_dir : "out";
        o.output_dir = (std::filesystem::path(parent) / stem).string();
        codes[i] = RunOne(run_paths[i], o, quiet);
      }
    };
    std::vector<std::future<void>> pool;
    for (std::size_t w = 0; w < std::min(workers, run_paths.size()); w++)
    {
      pool.push_back(std::async(std::launch::async, worker));
    }
    for (auto &f : pool)
    {
      f.get();
    }
    int worst = 0;
    for (int c : codes)
    {
      worst = std::max(worst, c);
    }
    return worst;
  }

  if (*compare)
  {
    fdtdmor_compare_report *report = nullptr;
    const fdtdmor_status st = fdtdmor_compare(ref_path.c_str(), cand_path.c_str(), &report);
    if (st != FDTDMOR_OK)
    {
      return Report(st, "compare");
    }
    std::cout << fdtdmor_compare_text(report);
    const bool passed = fdtdmor_compare_passed(report) != 0;
    fdtdmor_compare_report_free(report);
    return passed ? 0 : ExitCode(FDTDMOR_ERR_THRESHOLD);
  }

  if (*eigen)
  {
    fdtdmor_scenario *scenario = nullptr;
    fdtdmor_status st = LoadWithOverrides(eigen_path, eigen_overrides, &scenario);
    if (st != FDTDMOR_OK)
    {
      fdtdmor_scenario_free(scenario);
      return Report(st, eigen_path);
    }
    fdtdmor_eigen_result *result = nullptr;
    st = fdtdmor_eigen(scenario, 1, &result);
    fdtdmor_scenario_free(scenario);
    if (st != FDTDMOR_OK)
    {
      return Report(st, eigen_path);
    }
    std::cout << fdtdmor_eigen_summary(result);
    fdtdmor_eigen_result_free(result);
    return 0;
  }

  if (*gen)
  {
    std::vector<const char *> raw;
    for (const auto &p : params)
    {
      raw.push_back(p.c_str());
    }
    fdtdmor_scenario *scenario = nullptr;
    const fdtdmor_status st =
        fdtdmor_scenario_generate(template_name.c_str(), raw.data(), raw.size(), &scenario);
    if (st != FDTDMOR_OK)
    {
      return Report(st, template_name);
    }
    const char *json = fdtdmor_scenario_serialize(scenario);
    int code = 0;
    if (gen_output.empty())
    {
      std::cout << json;
    }
    else
    {
      std::FILE *f = std::fopen(gen_output.c_str(), "w");
      if (!f)
      {
        std::cerr << "error: cannot write '" << gen_output << "'\n";
        code = 4;
      }
      else
      {
        std::fputs(json, f);
        std::fclose(f);
      }
    }
    fdtdmor_scenario_free(scenario);
    return code;
  }
  return 0;
}
