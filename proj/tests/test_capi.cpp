// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fdtdmor/fdtdmor.h"

namespace
{

namespace fs = std::filesystem;

fdtdmor_scenario *Generate(const std::string &name, std::vector<std::string> params = {})
{
  std::vector<const char *> raw;
  for (const auto &p : params)
  {
    raw.push_back(p.c_str());
  }
  fdtdmor_scenario *s = nullptr;
  const auto status = fdtdmor_scenario_generate(name.c_str(), raw.data(), raw.size(), &s);
  EXPECT_EQ(status, FDTDMOR_OK) << fdtdmor_last_error();
  return s;
}

TEST(CApi, VersionAndStatusNames)
{
  EXPECT_STREQ(fdtdmor_version(), "0.1.0");
  EXPECT_STREQ(fdtdmor_status_name(FDTDMOR_OK), "ok");
  EXPECT_GE(fdtdmor_template_count(), 4u);
  EXPECT_EQ(fdtdmor_template_name(fdtdmor_template_count()), nullptr);
}

TEST(CApi, ParseErrorCarriesPath)
{
  fdtdmor_scenario *s = Generate("cube-demo");
  std::string text = fdtdmor_scenario_serialize(s);
  fdtdmor_scenario_free(s);
  text.insert(text.find('{', text.find("\"grid\"")) + 1, "\"bogus\": 1,");
  fdtdmor_scenario *bad = nullptr;
  EXPECT_EQ(fdtdmor_scenario_parse(text.c_str(), &bad), FDTDMOR_ERR_CONFIG);
  EXPECT_EQ(bad, nullptr);
  EXPECT_STREQ(fdtdmor_last_error_path(), "grid.bogus");

  EXPECT_EQ(fdtdmor_scenario_parse("not json", &bad), FDTDMOR_ERR_CONFIG);
  EXPECT_EQ(fdtdmor_scenario_load("/nonexistent/scenario.json", &bad), FDTDMOR_ERR_CONFIG);
}

TEST(CApi, UnknownTemplateIsConfigError)
{
  fdtdmor_scenario *s = nullptr;
  EXPECT_EQ(fdtdmor_scenario_generate("nope", nullptr, 0, &s), FDTDMOR_ERR_CONFIG);
  const char *bad_param = "steps";
  EXPECT_EQ(fdtdmor_scenario_generate("cube-demo", &bad_param, 1, &s), FDTDMOR_ERR_CONFIG);
}

TEST(CApi, SerializeParseKeepsHash)
{
  fdtdmor_scenario *s = Generate("iris-waveguide");
  fdtdmor_scenario *back = nullptr;
  ASSERT_EQ(fdtdmor_scenario_parse(fdtdmor_scenario_serialize(s), &back), FDTDMOR_OK);
  EXPECT_EQ(fdtdmor_scenario_hash(s), fdtdmor_scenario_hash(back));
  ASSERT_EQ(fdtdmor_scenario_set_steps(back, 123), FDTDMOR_OK);
  EXPECT_NE(fdtdmor_scenario_hash(s), fdtdmor_scenario_hash(back));
  EXPECT_EQ(fdtdmor_scenario_set_engine(back, "warp"), FDTDMOR_ERR_CONFIG);
  EXPECT_EQ(fdtdmor_scenario_set_s_factor(back, -1.0), FDTDMOR_ERR_CONFIG);
  fdtdmor_scenario_free(s);
  fdtdmor_scenario_free(back);
}

TEST(CApi, RunWithoutOutputs)
{
  fdtdmor_scenario *s = Generate("cavity2d", {"cells=15", "steps=400", "engine=full"});
  fdtdmor_run_result *r = nullptr;
  ASSERT_EQ(fdtdmor_run(s, 0, &r), FDTDMOR_OK) << fdtdmor_last_error();
  EXPECT_GT(fdtdmor_run_dt(r), 0.0);
  ASSERT_GE(fdtdmor_run_probe_count(r), 1u);
  EXPECT_EQ(fdtdmor_run_step_count(r), 400u);
  const double *v = fdtdmor_run_probe_values(r, 0);
  ASSERT_NE(v, nullptr);
  double peak = 0.0;
  for (std::size_t n = 0; n < 400; n++)
  {
    peak = std::max(peak, std::abs(v[n]));
  }
  EXPECT_GT(peak, 0.0);
  EXPECT_EQ(fdtdmor_run_probe_values(r, 99), nullptr);
  EXPECT_NE(std::string(fdtdmor_run_summary(r)).size(), 0u);
  fdtdmor_run_result_free(r);
  fdtdmor_scenario_free(s);
}

TEST(CApi, DivergenceIsReported)
{
  fdtdmor_scenario *s = Generate("cube-demo", {"s=1.98", "steps=3000"});
  fdtdmor_run_result *r = nullptr;
  EXPECT_EQ(fdtdmor_run(s, 0, &r), FDTDMOR_ERR_DIVERGENCE);
  EXPECT_EQ(r, nullptr);
  fdtdmor_scenario_free(s);
}

TEST(CApi, EigenOnSmallCube)
{
  fdtdmor_scenario *s = Generate("cube-demo", {"cells=4", "s=1.98"});
  fdtdmor_eigen_result *e = nullptr;
  ASSERT_EQ(fdtdmor_eigen(s, 0, &e), FDTDMOR_OK) << fdtdmor_last_error();
  EXPECT_GT(fdtdmor_eigen_max_full(e), 1.0 + 1e-9);
  EXPECT_LE(fdtdmor_eigen_max_full_enforced(e), 1.0 + 1e-9);
  fdtdmor_eigen_result_free(e);
  fdtdmor_scenario_free(s);
}

TEST(CApi, CompareReportsThresholds)
{
  const fs::path dir = fs::temp_directory_path() / "fdtdmor_capi_cmp";
  fs::create_directories(dir);
  const std::string a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  if (FILE *f = std::fopen(a.c_str(), "w"))
  {
    std::fputs("index,frequency_Hz,magnitude\n0,1.0e9,1\n", f);
    std::fclose(f);
  }
  if (FILE *f = std::fopen(b.c_str(), "w"))
  {
    std::fputs("index,frequency_Hz,magnitude\n0,1.1e9,1\n", f);
    std::fclose(f);
  }
  fdtdmor_compare_report *rep = nullptr;
  ASSERT_EQ(fdtdmor_compare(a.c_str(), a.c_str(), &rep), FDTDMOR_OK);
  EXPECT_EQ(fdtdmor_compare_passed(rep), 1);
  fdtdmor_compare_report_free(rep);
  ASSERT_EQ(fdtdmor_compare(a.c_str(), b.c_str(), &rep), FDTDMOR_OK);
  EXPECT_EQ(fdtdmor_compare_passed(rep), 0);
  EXPECT_NE(std::string(fdtdmor_compare_text(rep)).find("FAIL"), std::string::npos);
  fdtdmor_compare_report_free(rep);
}

TEST(CApi, SystemSizeForLargeCavity)
{
  fdtdmor_scenario *s = Generate("cavity2d", {"cells=101"});
  fdtdmor_system *sys = nullptr;
  ASSERT_EQ(fdtdmor_system_assemble(s, &sys), FDTDMOR_OK) << fdtdmor_last_error();
  EXPECT_EQ(fdtdmor_system_num_electric(sys) + fdtdmor_system_num_magnetic(sys), 30200u);
  EXPECT_GT(fdtdmor_system_cfl_timestep(sys), 0.0);
  fdtdmor_system_free(sys);
  fdtdmor_scenario_free(s);
}

TEST(CApi, ReduceSaveLoad)
{
  fdtdmor_scenario *s = Generate("cavity2d", {"cells=15", "order=20", "s=3"});
  fdtdmor_reduced_model *m = nullptr;
  ASSERT_EQ(fdtdmor_reduce(s, &m), FDTDMOR_OK) << fdtdmor_last_error();
  EXPECT_EQ(fdtdmor_reduced_order(m), 20u);  // state dimension
  const double cap = 2.0 / fdtdmor_reduced_dt(m);
  EXPECT_LE(fdtdmor_reduced_max_singular_value(m), cap * (1.0 + 1e-9));
  const std::string path = (fs::temp_directory_path() / "fdtdmor_capi_model.bin").string();
  ASSERT_EQ(fdtdmor_reduced_save(m, path.c_str()), FDTDMOR_OK);
  fdtdmor_reduced_model *back = nullptr;
  ASSERT_EQ(fdtdmor_reduced_load(path.c_str(), &back), FDTDMOR_OK);
  EXPECT_EQ(fdtdmor_reduced_order(back), fdtdmor_reduced_order(m));
  EXPECT_EQ(fdtdmor_reduced_dt(back), fdtdmor_reduced_dt(m));
  EXPECT_EQ(fdtdmor_reduced_max_singular_value(back), fdtdmor_reduced_max_singular_value(m));
  EXPECT_EQ(fdtdmor_reduced_enforce(back, 2.0), FDTDMOR_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(fdtdmor_reduced_load("/nonexistent/model.bin", &back), FDTDMOR_ERR_IO);
  fdtdmor_reduced_model_free(back);
  fdtdmor_reduced_model_free(m);
  fdtdmor_scenario_free(s);
}

TEST(CApi, NullArgumentsRejected)
{
  fdtdmor_scenario *s = nullptr;
  EXPECT_EQ(fdtdmor_scenario_parse(nullptr, &s), FDTDMOR_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(fdtdmor_scenario_parse("{}", nullptr), FDTDMOR_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(fdtdmor_run(nullptr, 0, nullptr), FDTDMOR_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(fdtdmor_compare(nullptr, nullptr, nullptr), FDTDMOR_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(fdtdmor_reduced_save(nullptr, "x"), FDTDMOR_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(fdtdmor_scenario_set_steps(nullptr, 1), FDTDMOR_ERR_INVALID_ARGUMENT);
  fdtdmor_scenario_free(nullptr);
  fdtdmor_run_result_free(nullptr);
}

}  // namespace
