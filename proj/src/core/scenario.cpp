// Copyright 2026 The fdtdmor Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "error.hpp"

namespace fdtdmor
{

using json = nlohmann::json;

namespace
{

std::string Join(const std::string &path, const std::string &key)
{
  return path.empty() ? key : path + "." + key;
}

std::string Index(const std::string &path, std::size_t i)
{
  return path + "[" + std::to_string(i) + "]";
}

void RequireObject(const json &j, const std::string &path)
{
  if (!j.is_object())
  {
    throw ConfigError(path, "expected an object");
  }
}

void CheckKeys(const json &j, const std::string &path, std::initializer_list<const char *> allowed)
{
  RequireObject(j, path);
  for (const auto &item : j.items())
  {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char *k) { return item.key() == k; }))
    {
      throw ConfigError(Join(path, item.key()), "unknown key");
    }
  }
}

const json *Optional(const json &j, const char *key)
{
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const json &Required(const json &j, const std::string &path, const char *key)
{
  const auto it = j.find(key);
  if (it == j.end())
  {
    throw ConfigError(Join(path, key), "missing required field");
  }
  return *it;
}

double Number(const json &j, const std::string &path)
{
  if (!j.is_number())
  {
    throw ConfigError(path, "expected a number");
  }
  return j.get<double>();
}

long Integer(const json &j, const std::string &path)
{
  if (!j.is_number_integer())
  {
    throw ConfigError(path, "expected an integer");
  }
  return j.get<long>();
}

bool Boolean(const json &j, const std::string &path)
{
  if (!j.is_boolean())
  {
    throw ConfigError(path, "expected true or false");
  }
  return j.get<bool>();
}

std::string String(const json &j, const std::string &path)
{
  if (!j.is_string())
  {
    throw ConfigError(path, "expected a string");
  }
  return j.get<std::string>();
}

template <typename T, typename Fn>
void ReadOpt(const json &j, const std::string &path, const char *key, T &out, Fn &&conv)
{
  if (const json *v = Optional(j, key))
  {
    out = conv(*v, Join(path, key));
  }
}

std::vector<double> NumberList(const json &j, const std::string &path)
{
  if (!j.is_array())
  {
    throw ConfigError(path, "expected an array of numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); i++)
  {
    out.push_back(Number(j[i], Index(path, i)));
  }
  return out;
}

// Accepts either 3 indices (i, j, k) or one per active axis.
Index3 ReadIndex(const json &j, const std::string &path, int dimensionality)
{
  if (!j.is_array())
  {
    throw ConfigError(path, "expected an index array");
  }
  Index3 idx = {0, 0, 0};
  const auto axes = ActiveAxesFor(dimensionality);
  if (j.size() == 3)
  {
    for (int a = 0; a < 3; a++)
    {
      idx[a] = static_cast<int>(Integer(j[a], Index(path, a)));
    }
  }
  else if (j.size() == axes.size())
  {
    for (std::size_t a = 0; a < axes.size(); a++)
    {
      idx[axes[a]] = static_cast<int>(Integer(j[a], Index(path, a)));
    }
  }
  else
  {
    throw ConfigError(path, "index needs 3 entries or one per active axis");
  }
  return idx;
}

json WriteIndex(const Index3 &idx)
{
  return json::array({idx[0], idx[1], idx[2]});
}

Medium ReadMedium(const json &j, const std::string &path)
{
  CheckKeys(j, path, {"eps_r", "mu_r", "sigma_e", "sigma_m"});
  Medium m;
  ReadOpt(j, path, "eps_r", m.eps_r, Number);
  ReadOpt(j, path, "mu_r", m.mu_r, Number);
  ReadOpt(j, path, "sigma_e", m.sigma_e, Number);
  ReadOpt(j, path, "sigma_m", m.sigma_m, Number);
  if (!(m.eps_r > 0.0) || !(m.mu_r > 0.0))
  {
    throw ConfigError(path, "eps_r and mu_r must be positive");
  }
  if (!(m.sigma_e >= 0.0) || !(m.sigma_m >= 0.0))
  {
    throw ConfigError(path, "conductivities must be non-negative");
  }
  return m;
}

json WriteMedium(const Medium &m)
{
  return {{"eps_r", m.eps_r}, {"mu_r", m.mu_r}, {"sigma_e", m.sigma_e}, {"sigma_m", m.sigma_m}};
}

const char *kFaceNames[6] = {"x_lo", "x_hi", "y_lo", "y_hi", "z_lo", "z_hi"};

FaceCondition ReadFace(const json &j, const std::string &path)
{
  FaceCondition face;
  std::string kind;
  if (j.is_string())
  {
    kind = j.get<std::string>();
  }
  else
  {
    CheckKeys(j, path, {"kind", "thickness", "poly_order", "target_reflection"});
    kind = String(Required(j, path, "kind"), Join(path, "kind"));
    ReadOpt(j, path, "thickness", face.absorber.thickness,
            [](const json &v, const std::string &p) { return static_cast<int>(Integer(v, p)); });
    ReadOpt(j, path, "poly_order", face.absorber.poly_order,
            [](const json &v, const std::string &p) { return static_cast<int>(Integer(v, p)); });
    ReadOpt(j, path, "target_reflection", face.absorber.target_reflection, Number);
  }
  if (kind == "pec")
  {
    face.kind = FaceCondition::Kind::Pec;
  }
  else if (kind == "pmc")
  {
    face.kind = FaceCondition::Kind::Pmc;
  }
  else if (kind == "absorber")
  {
    face.kind = FaceCondition::Kind::MatchedAbsorber;
  }
  else
  {
    throw ConfigError(path, "boundary kind must be pec, pmc or absorber");
  }
  return face;
}

json WriteFace(const FaceCondition &f)
{
  switch (f.kind)
  {
    case FaceCondition::Kind::Pec:
      return "pec";
    case FaceCondition::Kind::Pmc:
      return "pmc";
    case FaceCondition::Kind::MatchedAbsorber:
      break;
  }
  return {{"kind", "absorber"},
          {"thickness", f.absorber.thickness},
          {"poly_order", f.absorber.poly_order},
          {"target_reflection", f.absorber.target_reflection}};
}

Waveform ReadWaveform(const json &j, const std::string &path)
{
  CheckKeys(j, path, {"type", "f_max", "f0", "amplitude", "values"});
  const std::string type = String(Required(j, path, "type"), Join(path, "type"));
  Waveform w;
  if (type == "gaussian")
  {
    w = Waveform::Gaussian(Number(Required(j, path, "f_max"), Join(path, "f_max")));
  }
  else if (type == "sinusoid")
  {
    w = Waveform::Sine(Number(Required(j, path, "f0"), Join(path, "f0")));
  }
  else if (type == "samples")
  {
    w = Waveform::Samples(NumberList(Required(j, path, "values"), Join(path, "values")));
  }
  else
  {
    throw ConfigError(Join(path, "type"), "waveform type must be gaussian, sinusoid or samples");
  }
  ReadOpt(j, path, "amplitude", w.amplitude, Number);
  try
  {
    w.Validate();
  }
  catch (const Error &e)
  {
    throw ConfigError(path, e.what());
  }
  return w;
}

json WriteWaveform(const Waveform &w)
{
  switch (w.kind)
  {
    case Waveform::Kind::GaussianPulse:
      return {{"type", "gaussian"}, {"f_max", w.f_max}, {"amplitude", w.amplitude}};
    case Waveform::Kind::Sinusoid:
      return {{"type", "sinusoid"}, {"f0", w.f0}, {"amplitude", w.amplitude}};
    case Waveform::Kind::UserSamples:
      break;
  }
  return {{"type", "samples"}, {"values", w.samples}, {"amplitude", w.amplitude}};
}

Component ReadComponent(const json &j, const std::string &path)
{
  const auto c = ParseComponent(String(j, path));
  if (!c)
  {
    throw ConfigError(path, "unknown field component");
  }
  return *c;
}

std::string MethodName(SolverMethod m)
{
  switch (m)
  {
    case SolverMethod::Direct:
      return "direct";
    case SolverMethod::Iterative:
      return "iterative";
    case SolverMethod::Auto:
      break;
  }
  return "auto";
}

json ToJson(const ScenarioConfig &c)
{
  json j;
  j["name"] = c.name;
  std::vector<int> cells;
  std::vector<double> sizes;
  for (int a : c.grid.ActiveAxes())
  {
    cells.push_back(c.grid.cells[a]);
    sizes.push_back(c.grid.cell_sizes[a]);
  }
  j["grid"] = {{"dimensionality", c.grid.dimensionality}, {"cells", cells}, {"cell_size", sizes}};
  json regions = json::array();
  for (const auto &r : c.regions)
  {
    regions.push_back({{"lo", WriteIndex(r.lo)}, {"hi", WriteIndex(r.hi)}, {"medium", WriteMedium(r.medium)}});
  }
  j["materials"] = {{"background", WriteMedium(c.background)}, {"regions", regions}};
  json boxes = json::array();
  for (const auto &b : c.pec_boxes)
  {
    boxes.push_back({{"lo", WriteIndex(b.lo)}, {"hi", WriteIndex(b.hi)}});
  }
  j["pec_boxes"] = boxes;
  json faces = json::object();
  for (int f = 0; f < 6; f++)
  {
    faces[kFaceNames[f]] = WriteFace(c.boundaries.faces[f]);
  }
  j["boundaries"] = faces;
  json sources = json::array();
  for (const auto &s : c.sources)
  {
    json locs = json::array();
    for (const auto &l : s.locations)
    {
      locs.push_back(WriteIndex(l));
    }
    sources.push_back({{"name", s.name},
                       {"kind", s.kind == SourceKind::ElectricCurrent ? "J" : "M"},
                       {"component", std::string(ComponentName(s.component))},
                       {"locations", locs},
                       {"waveform", WriteWaveform(s.waveform)}});
  }
  j["sources"] = sources;
  json probes = json::array();
  for (const auto &p : c.probes)
  {
    probes.push_back({{"name", p.name},
                      {"component", std::string(ComponentName(p.component))},
                      {"location", WriteIndex(p.location)}});
  }
  j["probes"] = probes;
  j["s_factor"] = c.s_factor;
  j["steps"] = c.steps;
  j["engine"] = c.engine == Engine::Full ? "full" : "reduced";
  json red = {{"order", c.reduction.order},       {"M", c.reduction.radius},
              {"L", c.reduction.half_count},      {"f_max", c.reduction.f_max},
              {"gamma", c.reduction.gamma}};
  if (c.reduction.enforce)
  {
    red["enforce"] = *c.reduction.enforce;
  }
  j["reduction"] = red;
  j["solver"] = {{"method", MethodName(c.solver.method)}, {"tol", c.solver.tol}};
  const auto &o = c.outputs;
  j["outputs"] = {{"directory", o.directory},       {"time_series", o.time_series},
                  {"spectra", o.spectra},           {"resonances", o.resonances},
                  {"eigenvalues", o.eigenvalues},   {"singular_values", o.singular_values},
                  {"timing", o.timing},             {"system_dump", o.system_dump},
                  {"reduced_model", o.reduced_model}, {"reference_run", o.reference_run}};
  if (c.sparams)
  {
    j["sparams"] = {{"port1_probe", c.sparams->port1_probe}, {"port2_probe", c.sparams->port2_probe}};
  }
  json analysis = json::object();
  if (c.analytical_modes)
  {
    const auto &a = *c.analytical_modes;
    analysis["analytical_modes"] = {{"lengths", a.lengths},
                                    {"eps_r", a.eps_r},
                                    {"family", a.family == ModeFamily::Tm2d ? "tm2d" : "cube3d"},
                                    {"count", a.count}};
  }
  analysis["resonances"] = {{"prominence", c.resonances.prominence},
                            {"max_count", c.resonances.max_count},
                            {"probe", c.resonances.probe}};
  j["analysis"] = analysis;
  return j;
}

ScenarioConfig FromJson(const json &j)
{
  CheckKeys(j, "", {"name", "grid", "materials", "pec_boxes", "boundaries", "sources", "probes",
                    "s_factor", "steps", "engine", "reduction", "solver", "outputs", "sparams",
                    "analysis"});
  ScenarioConfig c;
  ReadOpt(j, "", "name", c.name, String);

  // grid
  {
    const std::string path = "grid";
    const json &g = Required(j, "", "grid");
    CheckKeys(g, path, {"dimensionality", "cells", "cell_size"});
    const long dim = Integer(Required(g, path, "dimensionality"), Join(path, "dimensionality"));
    if (dim < 1 || dim > 3)
    {
      throw ConfigError(Join(path, "dimensionality"), "must be 1, 2 or 3");
    }
    const json &cj = Required(g, path, "cells");
    const json &sj = Required(g, path, "cell_size");
    const auto axes = ActiveAxesFor(static_cast<int>(dim));
    if (!cj.is_array() || cj.size() != axes.size())
    {
      throw ConfigError(Join(path, "cells"), "needs one count per active axis");
    }
    std::vector<int> counts;
    for (std::size_t i = 0; i < cj.size(); i++)
    {
      counts.push_back(static_cast<int>(Integer(cj[i], Index(Join(path, "cells"), i))));
    }
    std::vector<double> sizes;
    if (sj.is_number())
    {
      sizes.assign(axes.size(), Number(sj, Join(path, "cell_size")));
    }
    else
    {
      sizes = NumberList(sj, Join(path, "cell_size"));
      if (sizes.size() != axes.size())
      {
        throw ConfigError(Join(path, "cell_size"), "needs one size per active axis");
      }
    }
    try
    {
      c.grid = GridSpec::Make(static_cast<int>(dim), counts, sizes);
    }
    catch (const Error &e)
    {
      throw ConfigError(path, e.what());
    }
  }
  const int dim = c.grid.dimensionality;

  if (const json *m = Optional(j, "materials"))
  {
    const std::string path = "materials";
    CheckKeys(*m, path, {"background", "regions"});
    if (const json *b = Optional(*m, "background"))
    {
      c.background = ReadMedium(*b, Join(path, "background"));
    }
    if (const json *r = Optional(*m, "regions"))
    {
      const std::string rp = Join(path, "regions");
      if (!r->is_array())
      {
        throw ConfigError(rp, "expected an array");
      }
      for (std::size_t i = 0; i < r->size(); i++)
      {
        const std::string p = Index(rp, i);
        CheckKeys((*r)[i], p, {"lo", "hi", "medium"});
        MaterialRegion region;
        region.lo = ReadIndex(Required((*r)[i], p, "lo"), Join(p, "lo"), dim);
        region.hi = ReadIndex(Required((*r)[i], p, "hi"), Join(p, "hi"), dim);
        region.medium = ReadMedium(Required((*r)[i], p, "medium"), Join(p, "medium"));
        c.regions.push_back(region);
      }
    }
  }

  if (const json *b = Optional(j, "pec_boxes"))
  {
    if (!b->is_array())
    {
      throw ConfigError("pec_boxes", "expected an array");
    }
    for (std::size_t i = 0; i < b->size(); i++)
    {
      const std::string p = Index("pec_boxes", i);
      CheckKeys((*b)[i], p, {"lo", "hi"});
      PecBox box;
      box.lo = ReadIndex(Required((*b)[i], p, "lo"), Join(p, "lo"), dim);
      box.hi = ReadIndex(Required((*b)[i], p, "hi"), Join(p, "hi"), dim);
      c.pec_boxes.push_back(box);
    }
  }

  if (const json *b = Optional(j, "boundaries"))
  {
    CheckKeys(*b, "boundaries", {"x_lo", "x_hi", "y_lo", "y_hi", "z_lo", "z_hi"});
    for (int f = 0; f < 6; f++)
    {
      if (const json *face = Optional(*b, kFaceNames[f]))
      {
        c.boundaries.faces[f] = ReadFace(*face, Join("boundaries", kFaceNames[f]));
      }
    }
  }

  if (const json *s = Optional(j, "sources"))
  {
    if (!s->is_array())
    {
      throw ConfigError("sources", "expected an array");
    }
    for (std::size_t i = 0; i < s->size(); i++)
    {
      const std::string p = Index("sources", i);
      const json &sj = (*s)[i];
      CheckKeys(sj, p, {"name", "kind", "component", "locations", "waveform"});
      SourceSpec src;
      src.name = "source" + std::to_string(i);
      ReadOpt(sj, p, "name", src.name, String);
      std::string kind = "J";
      ReadOpt(sj, p, "kind", kind, String);
      if (kind == "J")
      {
        src.kind = SourceKind::ElectricCurrent;
      }
      else if (kind == "M")
      {
        src.kind = SourceKind::MagneticCurrent;
      }
      else
      {
        throw ConfigError(Join(p, "kind"), "source kind must be J or M");
      }
      src.component = ReadComponent(Required(sj, p, "component"), Join(p, "component"));
      const json &locs = Required(sj, p, "locations");
      if (!locs.is_array() || locs.empty())
      {
        throw ConfigError(Join(p, "locations"), "expected a non-empty array of indices");
      }
      for (std::size_t k = 0; k < locs.size(); k++)
      {
        src.locations.push_back(ReadIndex(locs[k], Index(Join(p, "locations"), k), dim));
      }
      src.waveform = ReadWaveform(Required(sj, p, "waveform"), Join(p, "waveform"));
      c.sources.push_back(std::move(src));
    }
  }

  if (const json *pr = Optional(j, "probes"))
  {
    if (!pr->is_array())
    {
      throw ConfigError("probes", "expected an array");
    }
    for (std::size_t i = 0; i < pr->size(); i++)
    {
      const std::string p = Index("probes", i);
      const json &pj = (*pr)[i];
      CheckKeys(pj, p, {"name", "component", "location"});
      ProbeSpec probe;
      probe.name = "probe" + std::to_string(i);
      ReadOpt(pj, p, "name", probe.name, String);
      probe.component = ReadComponent(Required(pj, p, "component"), Join(p, "component"));
      probe.location = ReadIndex(Required(pj, p, "location"), Join(p, "location"), dim);
      c.probes.push_back(probe);
    }
  }

  ReadOpt(j, "", "s_factor", c.s_factor, Number);
  if (const json *s = Optional(j, "steps"))
  {
    const long steps = Integer(*s, "steps");
    if (steps < 1)
    {
      throw ConfigError("steps", "must be at least 1");
    }
    c.steps = static_cast<std::size_t>(steps);
  }
  if (const json *e = Optional(j, "engine"))
  {
    const std::string engine = String(*e, "engine");
    if (engine == "full")
    {
      c.engine = Engine::Full;
    }
    else if (engine == "reduced")
    {
      c.engine = Engine::Reduced;
    }
    else
    {
      throw ConfigError("engine", "must be full or reduced");
    }
  }

  if (const json *r = Optional(j, "reduction"))
  {
    const std::string p = "reduction";
    CheckKeys(*r, p, {"order", "M", "L", "f_max", "gamma", "enforce"});
    auto &red = c.reduction;
    ReadOpt(*r, p, "order", red.order,
            [](const json &v, const std::string &q) { return static_cast<int>(Integer(v, q)); });
    ReadOpt(*r, p, "M", red.radius, Number);
    ReadOpt(*r, p, "L", red.half_count,
            [](const json &v, const std::string &q) { return static_cast<int>(Integer(v, q)); });
    ReadOpt(*r, p, "f_max", red.f_max, Number);
    ReadOpt(*r, p, "gamma", red.gamma, Number);
    if (const json *e = Optional(*r, "enforce"))
    {
      red.enforce = Boolean(*e, Join(p, "enforce"));
    }
  }

  if (const json *s = Optional(j, "solver"))
  {
    CheckKeys(*s, "solver", {"method", "tol"});
    if (const json *m = Optional(*s, "method"))
    {
      const std::string method = String(*m, "solver.method");
      if (method == "auto")
      {
        c.solver.method = SolverMethod::Auto;
      }
      else if (method == "direct")
      {
        c.solver.method = SolverMethod::Direct;
      }
      else if (method == "iterative")
      {
        c.solver.method = SolverMethod::Iterative;
      }
      else
      {
        throw ConfigError("solver.method", "must be auto, direct or iterative");
      }
    }
    ReadOpt(*s, "solver", "tol", c.solver.tol, Number);
  }

  if (const json *o = Optional(j, "outputs"))
  {
    const std::string p = "outputs";
    CheckKeys(*o, p, {"directory", "time_series", "spectra", "resonances", "eigenvalues",
                      "singular_values", "timing", "system_dump", "reduced_model", "reference_run"});
    auto &out = c.outputs;
    ReadOpt(*o, p, "directory", out.directory, String);
    ReadOpt(*o, p, "time_series", out.time_series, Boolean);
    ReadOpt(*o, p, "spectra", out.spectra, Boolean);
    ReadOpt(*o, p, "resonances", out.resonances, Boolean);
    ReadOpt(*o, p, "eigenvalues", out.eigenvalues, Boolean);
    ReadOpt(*o, p, "singular_values", out.singular_values, Boolean);
    ReadOpt(*o, p, "timing", out.timing, Boolean);
    ReadOpt(*o, p, "system_dump", out.system_dump, Boolean);
    ReadOpt(*o, p, "reduced_model", out.reduced_model, Boolean);
    ReadOpt(*o, p, "reference_run", out.reference_run, Boolean);
  }

  if (const json *s = Optional(j, "sparams"))
  {
    CheckKeys(*s, "sparams", {"port1_probe", "port2_probe"});
    SParamConfig sp;
    sp.port1_probe = String(Required(*s, "sparams", "port1_probe"), "sparams.port1_probe");
    sp.port2_probe = String(Required(*s, "sparams", "port2_probe"), "sparams.port2_probe");
    c.sparams = sp;
  }

  if (const json *a = Optional(j, "analysis"))
  {
    CheckKeys(*a, "analysis", {"analytical_modes", "resonances"});
    if (const json *m = Optional(*a, "analytical_modes"))
    {
      const std::string p = "analysis.analytical_modes";
      CheckKeys(*m, p, {"lengths", "eps_r", "family", "count"});
      AnalyticalModesConfig am;
      am.lengths = NumberList(Required(*m, p, "lengths"), Join(p, "lengths"));
      ReadOpt(*m, p, "eps_r", am.eps_r, Number);
      if (const json *f = Optional(*m, "family"))
      {
        const std::string fam = String(*f, Join(p, "family"));
        if (fam == "tm2d")
        {
          am.family = ModeFamily::Tm2d;
        }
        else if (fam == "cube3d")
        {
          am.family = ModeFamily::Cube3d;
        }
        else
        {
          throw ConfigError(Join(p, "family"), "must be tm2d or cube3d");
        }
      }
      if (const json *n = Optional(*m, "count"))
      {
        const long count = Integer(*n, Join(p, "count"));
        if (count < 1)
        {
          throw ConfigError(Join(p, "count"), "must be at least 1");
        }
        am.count = static_cast<std::size_t>(count);
      }
      c.analytical_modes = am;
    }
    if (const json *r = Optional(*a, "resonances"))
    {
      const std::string p = "analysis.resonances";
      CheckKeys(*r, p, {"prominence", "max_count", "probe"});
      ReadOpt(*r, p, "prominence", c.resonances.prominence, Number);
      if (const json *n = Optional(*r, "max_count"))
      {
        const long count = Integer(*n, Join(p, "max_count"));
        if (count < 1)
        {
          throw ConfigError(Join(p, "max_count"), "must be at least 1");
        }
        c.resonances.max_count = static_cast<std::size_t>(count);
      }
      ReadOpt(*r, p, "probe", c.resonances.probe, String);
    }
  }
  ValidateScenario(c);
  return c;
}

bool InBox(const Index3 &p, const Index3 &lo, const Index3 &hi)
{
  return p[0] >= lo[0] && p[0] <= hi[0] && p[1] >= lo[1] && p[1] <= hi[1] && p[2] >= lo[2] &&
         p[2] <= hi[2];
}

}  // namespace

void ValidateScenario(const ScenarioConfig &c)
{
  try
  {
    c.grid.Validate();
  }
  catch (const Error &e)
  {
    throw ConfigError("grid", e.what());
  }
  try
  {
    c.boundaries.Validate(c.grid);
  }
  catch (const Error &e)
  {
    throw ConfigError("boundaries", e.what());
  }
  if (!(c.s_factor > 0.0) || !std::isfinite(c.s_factor))
  {
    throw ConfigError("s_factor", "must be positive");
  }
  if (c.steps < 1)
  {
    throw ConfigError("steps", "must be at least 1");
  }
  if (c.engine == Engine::Reduced)
  {
    if (c.reduction.order < 2 || c.reduction.order % 2 != 0)
    {
      throw ConfigError("reduction.order", "must be even and at least 2");
    }
    if (!(c.reduction.radius > 1.0))
    {
      throw ConfigError("reduction.M", "must exceed 1");
    }
    if (c.reduction.half_count < 0)
    {
      throw ConfigError("reduction.L", "must be non-negative");
    }
    if (!(c.reduction.f_max >= 0.0))
    {
      throw ConfigError("reduction.f_max", "must be non-negative");
    }
  }
  if (!(c.reduction.gamma > 0.0 && c.reduction.gamma < 1.0))
  {
    throw ConfigError("reduction.gamma", "must lie strictly between 0 and 1");
  }
  if (!(c.solver.tol > 0.0))
  {
    throw ConfigError("solver.tol", "must be positive");
  }
  if (c.sources.empty())
  {
    throw ConfigError("sources", "at least one source is required");
  }
  if (c.probes.empty())
  {
    throw ConfigError("probes", "at least one probe is required");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < c.probes.size(); i++)
  {
    const auto &p = c.probes[i];
    const std::string path = Index("probes", i);
    if (!names.insert(p.name).second)
    {
      throw ConfigError(Join(path, "name"), "duplicate probe name '" + p.name + "'");
    }
    if (!InsideComponent(c.grid, p.component, p.location))
    {
      throw ConfigError(Join(path, "location"), "outside the component's index range");
    }
  }
  for (std::size_t i = 0; i < c.sources.size(); i++)
  {
    const auto &s = c.sources[i];
    const std::string path = Index("sources", i);
    if (IsElectric(s.component) != (s.kind == SourceKind::ElectricCurrent))
    {
      throw ConfigError(Join(path, "component"), "J drives E components and M drives H components");
    }
    for (std::size_t k = 0; k < s.locations.size(); k++)
    {
      if (!InsideComponent(c.grid, s.component, s.locations[k]))
      {
        throw ConfigError(Index(Join(path, "locations"), k), "outside the component's index range");
      }
    }
  }
  const auto has_probe = [&](const std::string &n)
  { return std::any_of(c.probes.begin(), c.probes.end(), [&](const ProbeSpec &p) { return p.name == n; }); };
  if (c.sparams)
  {
    if (!has_probe(c.sparams->port1_probe))
    {
      throw ConfigError("sparams.port1_probe", "no probe named '" + c.sparams->port1_probe + "'");
    }
    if (!has_probe(c.sparams->port2_probe))
    {
      throw ConfigError("sparams.port2_probe", "no probe named '" + c.sparams->port2_probe + "'");
    }
  }
  if (!c.resonances.probe.empty() && !has_probe(c.resonances.probe))
  {
    throw ConfigError("analysis.resonances.probe", "no probe named '" + c.resonances.probe + "'");
  }
  if (!(c.resonances.prominence > 0.0))
  {
    throw ConfigError("analysis.resonances.prominence", "must be positive");
  }
  if (c.analytical_modes)
  {
    const auto &a = *c.analytical_modes;
    const std::size_t dims = a.family == ModeFamily::Tm2d ? 2 : 3;
    if (a.lengths.size() != dims ||
        std::any_of(a.lengths.begin(), a.lengths.end(), [](double l) { return !(l > 0.0); }))
    {
      throw ConfigError("analysis.analytical_modes.lengths",
                        "needs " + std::to_string(dims) + " positive lengths");
    }
    if (!(a.eps_r > 0.0))
    {
      throw ConfigError("analysis.analytical_modes.eps_r", "must be positive");
    }
  }
  (void)InBox;
}

ScenarioConfig ParseScenario(std::string_view text)
{
  json j;
  try
  {
    j = json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    throw ConfigError("", std::string("malformed scenario document: ") + e.what());
  }
  return FromJson(j);
}

ScenarioConfig LoadScenario(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("", "cannot open scenario file '" + path + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseScenario(ss.str());
}

std::string SerializeScenario(const ScenarioConfig &config)
{
  return ToJson(config).dump(2) + "\n";
}

std::uint64_t ScenarioHash(const ScenarioConfig &config)
{
  const std::string text = ToJson(config).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text)
  {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string HashHex(std::uint64_t hash)
{
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << hash;
  return os.str();
}

namespace
{

class Params
{
public:
  explicit Params(const std::map<std::string, std::string> &p) : p_(p) {}

  double Num(const std::string &key, double def)
  {
    used_.insert(key);
    const auto it = p_.find(key);
    if (it == p_.end())
    {
      return def;
    }
    try
    {
      std::size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size())
      {
        throw std::invalid_argument("trailing characters");
      }
      return v;
    }
    catch (const std::exception &)
    {
      throw ConfigError(key, "expected a number, got '" + it->second + "'");
    }
  }

  int Int(const std::string &key, int def)
  {
    const double v = Num(key, def);
    if (v != std::floor(v))
    {
      throw ConfigError(key, "expected an integer");
    }
    return static_cast<int>(v);
  }

  std::string Str(const std::string &key, const std::string &def)
  {
    used_.insert(key);
    const auto it = p_.find(key);
    return it == p_.end() ? def : it->second;
  }

  void Finish() const
  {
    for (const auto &kv : p_)
    {
      if (!used_.count(kv.first))
      {
        throw ConfigError(kv.first, "unknown template parameter");
      }
    }
  }

private:
  const std::map<std::string, std::string> &p_;
  std::set<std::string> used_;
};

void ApplyCommon(ScenarioConfig &c, Params &p, double default_s, int default_steps,
                 int default_order, double f_max)
{
  c.s_factor = p.Num("s", default_s);
  c.steps = static_cast<std::size_t>(p.Int("steps", default_steps));
  const std::string engine = p.Str("engine", "full");
  if (engine != "full" && engine != "reduced")
  {
    throw ConfigError("engine", "must be full or reduced");
  }
  c.engine = engine == "full" ? Engine::Full : Engine::Reduced;
  c.reduction.order = p.Int("order", default_order);
  c.reduction.radius = p.Num("M", 1.1);
  c.reduction.half_count = p.Int("L", 2);
  c.reduction.f_max = p.Num("f_max", f_max);
  c.reduction.gamma = p.Num("gamma", 0.9999);
  c.outputs.directory = p.Str("out", "out/" + c.name);
  const std::string method = p.Str("solver", "auto");
  if (method == "direct")
  {
    c.solver.method = SolverMethod::Direct;
  }
  else if (method == "iterative")
  {
    c.solver.method = SolverMethod::Iterative;
  }
  else if (method != "auto")
  {
    throw ConfigError("solver", "must be auto, direct or iterative");
  }
}

ScenarioConfig Cavity2d(Params &p)
{
  ScenarioConfig c;
  c.name = "cavity2d";
  const int n = p.Int("cells", 51);
  const double d = p.Num("size", 0.02);
  const double f_max = p.Num("source_f_max", 0.75e9);
  c.grid = GridSpec::Make(2, std::vector<int>{n, n}, std::vector<double>{d, d});
  // Positions as fractions of the side chosen so all six lowest TM modes couple.
  const auto at = [&](double frac) { return std::clamp(static_cast<int>(std::lround(frac * n)), 1, n - 1); };
  c.sources.push_back({"src", SourceKind::ElectricCurrent, Component::Ez,
                       {{at(15.0 / 51), at(17.0 / 51), 0}}, Waveform::Gaussian(f_max)});
  c.probes.push_back({"probe", Component::Hy, {at(17.0 / 51), at(18.0 / 51), 0}});
  ApplyCommon(c, p, 0.99, 10000, 80, f_max);
  c.analytical_modes = AnalyticalModesConfig{{n * d, n * d}, 1.0, ModeFamily::Tm2d, 6};
  c.resonances.max_count = 6;
  c.resonances.probe = "probe";
  return c;
}

ScenarioConfig Cavity3d(Params &p)
{
  ScenarioConfig c;
  c.name = "cavity3d";
  const int n = p.Int("cells", 21);
  const double d = p.Num("size", 1.0 / n);
  const double f_max = p.Num("source_f_max", 0.5e9);
  c.grid = GridSpec::Make(3, std::vector<int>{n, n, n}, std::vector<double>{d, d, d});
  const auto at = [&](double frac) { return std::clamp(static_cast<int>(std::lround(frac * n)), 1, n - 1); };
  c.sources.push_back({"src", SourceKind::ElectricCurrent, Component::Ez,
                       {{at(0.31), at(0.23), std::min(at(0.37), n - 1)}}, Waveform::Gaussian(f_max)});
  c.probes.push_back({"probe", Component::Hx, {at(0.68), std::min(at(0.34), n - 1), std::min(at(0.57), n - 1)}});
  ApplyCommon(c, p, 0.99, 10000, 80, f_max);
  c.analytical_modes = AnalyticalModesConfig{{n * d, n * d, n * d}, 1.0, ModeFamily::Cube3d, 4};
  c.resonances.max_count = 6;
  c.resonances.probe = "probe";
  return c;
}

ScenarioConfig CubeDemo(Params &p)
{
  ScenarioConfig c;
  c.name = "cube-demo";
  const int n = p.Int("cells", 9);
  const double d = 1.0 / n;
  const double f_max = p.Num("source_f_max", 0.3e9);
  c.grid = GridSpec::Make(3, std::vector<int>{n, n, n}, std::vector<double>{d, d, d});
  c.sources.push_back({"src", SourceKind::ElectricCurrent, Component::Ez,
                       {{n / 3, 2 * n / 9 > 0 ? 2 * n / 9 : 1, n / 3}}, Waveform::Gaussian(f_max)});
  c.probes.push_back({"probe", Component::Hx, {2 * n / 3, n / 3, 5 * n / 9}});
  ApplyCommon(c, p, 0.99, 10000, 40, f_max);
  c.analytical_modes = AnalyticalModesConfig{{1.0, 1.0, 1.0}, 1.0, ModeFamily::Cube3d, 2};
  c.resonances.max_count = 4;
  c.resonances.probe = "probe";
  return c;
}

ScenarioConfig IrisWaveguide(Params &p)
{
  ScenarioConfig c;
  c.name = "iris-waveguide";
  // coarsen = 2 halves the resolution (21 x 201 cells at 2.5 mm).
  const int coarsen = p.Int("coarsen", 1);
  if (coarsen != 1 && coarsen != 2)
  {
    throw ConfigError("coarsen", "must be 1 or 2");
  }
  const int nx = 40 / coarsen + 1;
  const int ny = 400 / coarsen + 1;
  const double d = 1.25e-3 * coarsen;
  const double eps_r = p.Num("eps_r", 2.5);
  const double f_max = p.Num("source_f_max", 3.0e9);
  const int irises = p.Int("irises", 5);
  // Diaphragm thickness along the guide, in cells.
  const int iris_len = p.Int("iris_cells", 1);
  if (iris_len < 0)
  {
    throw ConfigError("iris_cells", "must be non-negative");
  }
  const int aperture = p.Int("aperture_cells", 20 / coarsen);
  const int separation = 40 / coarsen;
  c.grid = GridSpec::Make(2, std::vector<int>{nx, ny}, std::vector<double>{d, d});
  c.background.eps_r = eps_r;
  FaceCondition absorber;
  absorber.kind = FaceCondition::Kind::MatchedAbsorber;
  absorber.absorber = {5, 4, 1e-6};
  c.boundaries.face(1, false) = absorber;
  c.boundaries.face(1, true) = absorber;

  const int centre_x = nx / 2;
  const int gap_lo = centre_x - aperture / 2;
  const int gap_hi = gap_lo + aperture;
  const int centre_y = ny / 2;
  for (int k = 0; k < irises; k++)
  {
    const int yc = centre_y + (k - (irises - 1) / 2) * separation -
                   ((irises % 2 == 0) ? separation / 2 : 0);
    const int y0 = yc - iris_len / 2;  // node rows y0..y1 are metal
    const int y1 = y0 + iris_len;
    c.pec_boxes.push_back({{0, y0, 0}, {gap_lo, y1, 0}});
    c.pec_boxes.push_back({{gap_hi, y0, 0}, {nx, y1, 0}});
  }
  SourceSpec src{"line", SourceKind::ElectricCurrent, Component::Ez, {}, Waveform::Gaussian(f_max)};
  const int src_y = 15 / coarsen;
  for (int i = 1; i < nx; i++)
  {
    src.locations.push_back({i, src_y, 0});
  }
  c.sources.push_back(src);
  c.probes.push_back({"port1", Component::Ez, {centre_x, 40 / coarsen, 0}});
  c.probes.push_back({"port2", Component::Ez, {centre_x, ny - 40 / coarsen, 0}});
  ApplyCommon(c, p, 0.99, 20000, 200, f_max);
  c.sparams = SParamConfig{"port1", "port2"};
  c.resonances.probe = "port2";
  c.outputs.resonances = false;
  return c;
}

}  // namespace

std::vector<std::string> ScenarioTemplates()
{
  return {"cavity2d", "cavity3d", "cube-demo", "iris-waveguide"};
}

ScenarioConfig GenerateScenario(const std::string &name,
                                const std::map<std::string, std::string> &params)
{
  Params p(params);
  ScenarioConfig c;
  if (name == "cavity2d")
  {
    c = Cavity2d(p);
  }
  else if (name == "cavity3d")
  {
    c = Cavity3d(p);
  }
  else if (name == "cube-demo")
  {
    c = CubeDemo(p);
  }
  else if (name == "iris-waveguide")
  {
    c = IrisWaveguide(p);
  }
  else
  {
    throw ConfigError("template", "unknown scenario template '" + name + "'");
  }
  p.Finish();
  ValidateScenario(c);
  return c;
}

}  // namespace fdtdmor
