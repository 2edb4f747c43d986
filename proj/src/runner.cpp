// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "mrisk/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "mrisk/builtins.hpp"
#include "mrisk/extend.hpp"
#include "mrisk/minkowski.hpp"
#include "mrisk/reference.hpp"
#include "mrisk/solver.hpp"
#include "mrisk/subgrad.hpp"

namespace mrisk {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::ConfigError, what); }

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) bad(where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) bad("unknown key '" + k + "' in " + where);
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(where + " must be finite");
  return v;
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where + " must be a string");
  return j.get<std::string>();
}

std::int64_t get_integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where + " must be an integer");
  return j.get<std::int64_t>();
}

std::vector<double> get_numbers(const json& j, const std::string& where) {
  if (!j.is_array()) bad(where + " must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

// ---------------------------------------------------------------- tails

TailEnd parse_end(const json& j, const std::string& where) {
  if (j.is_number()) return TailEnd::at(get_number(j, where));
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return TailEnd::pos_inf();
    if (s == "-inf") return TailEnd::neg_inf();
    bad(where + " must be a number, \"inf\", \"-inf\" or an object");
  }
  check_keys(j, {"kind", "limit", "rate"}, where);
  if (!j.contains("kind")) bad(where + ".kind is required");
  const std::string kind = get_string(j["kind"], where + ".kind");
  std::optional<double> rate;
  if (j.contains("rate")) rate = get_number(j["rate"], where + ".rate");
  if (kind == "finite") {
    if (!j.contains("limit")) bad(where + ".limit is required for a finite end");
    if (rate) bad(where + ".rate is only allowed for divergent ends");
    return TailEnd::at(get_number(j["limit"], where + ".limit"));
  }
  if (j.contains("limit")) bad(where + ".limit is only allowed for finite ends");
  if (kind == "pos_inf") return TailEnd::pos_inf(rate);
  if (kind == "neg_inf") return TailEnd::neg_inf(rate);
  bad(where + ".kind must be finite, pos_inf or neg_inf");
}

Tail parse_tail(const json& j, const std::string& where) {
  if (j.is_number()) return Tail::limit(get_number(j, where));
  check_keys(j, {"upper", "lower"}, where);
  if (!j.contains("upper")) bad(where + ".upper is required");
  Tail t;
  t.upper = parse_end(j["upper"], where + ".upper");
  t.lower = j.contains("lower") ? parse_end(j["lower"], where + ".lower") : t.upper;
  return t;
}

json end_json(const TailEnd& e) {
  json j;
  switch (e.kind) {
    case TailEnd::Kind::Finite:
      j["kind"] = "finite";
      j["limit"] = e.limit;
      break;
    case TailEnd::Kind::PosInf: j["kind"] = "pos_inf"; break;
    case TailEnd::Kind::NegInf: j["kind"] = "neg_inf"; break;
  }
  if (e.rate) j["rate"] = *e.rate;
  return j;
}

json tail_json(const Tail& t) { return {{"upper", end_json(t.upper)}, {"lower", end_json(t.lower)}}; }

// ---------------------------------------------------------------- inline regimes

SpacePtr parse_space(const json& j) {
  check_keys(j, {"kind", "size", "window"}, "regime.space");
  if (!j.contains("kind")) bad("regime.space.kind is required");
  const std::string kind = get_string(j["kind"], "regime.space.kind");
  if (kind == "finite") {
    if (!j.contains("size") || j.contains("window")) bad("finite space needs 'size' and no 'window'");
    const std::int64_t n = get_integer(j["size"], "regime.space.size");
    if (n < 1 || n > 100000) bad("regime.space.size must lie in [1, 100000]");
    return SampleSpace::finite(static_cast<std::size_t>(n));
  }
  if (!j.contains("window") || j.contains("size")) bad(kind + " space needs 'window' and no 'size'");
  const std::int64_t n = get_integer(j["window"], "regime.space.window");
  if (n < 1 || n > 100000) bad("regime.space.window must lie in [1, 100000]");
  if (kind == "naturals") return SampleSpace::naturals(n);
  if (kind == "integers") return SampleSpace::integers(n);
  bad("regime.space.kind must be finite, naturals or integers");
}

GeneralizedMeasure parse_measure(const SpacePtr& sp, const json& j, const std::string& where) {
  if (j.is_array()) return GeneralizedMeasure(sp, get_numbers(j, where));
  check_keys(j, {"weights", "tail_upper", "tail_lower"}, where);
  if (!j.contains("weights")) bad(where + ".weights is required");
  const double up = j.contains("tail_upper") ? get_number(j["tail_upper"], where + ".tail_upper") : 0.0;
  const double lo = j.contains("tail_lower") ? get_number(j["tail_lower"], where + ".tail_lower") : 0.0;
  return GeneralizedMeasure(sp, get_numbers(j["weights"], where + ".weights"), up, lo);
}

AcceptanceSpec parse_acceptance(const SpacePtr& sp, const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind")) bad(where + ".kind is required");
  const std::string kind = get_string(j["kind"], where + ".kind");
  if (kind == "linear") {
    check_keys(j, {"kind", "members"}, where);
    if (!j.contains("members") || !j["members"].is_array()) bad(where + ".members must be an array");
    LinearDual a;
    for (std::size_t i = 0; i < j["members"].size(); ++i) {
      const json& m = j["members"][i];
      const std::string w = where + ".members[" + std::to_string(i) + "]";
      check_keys(m, {"measure", "penalty", "label"}, w);
      if (!m.contains("measure")) bad(w + ".measure is required");
      ScenarioMember sm{parse_measure(sp, m["measure"], w + ".measure"),
                        m.contains("penalty") ? get_number(m["penalty"], w + ".penalty") : 0.0,
                        m.contains("label") ? get_string(m["label"], w + ".label") : "member" + std::to_string(i)};
      a.family.push_back(std::move(sm));
    }
    return a;
  }
  if (kind == "entropic") {
    check_keys(j, {"kind", "base", "beta"}, where);
    if (!j.contains("base")) bad(where + ".base is required");
    return Entropic{parse_measure(sp, j["base"], where + ".base"),
                    j.contains("beta") ? get_number(j["beta"], where + ".beta") : 1.0};
  }
  if (kind == "avar") {
    check_keys(j, {"kind", "base", "alpha"}, where);
    if (!j.contains("base")) bad(where + ".base is required");
    return AVaR{parse_measure(sp, j["base"], where + ".base"),
                j.contains("alpha") ? get_number(j["alpha"], where + ".alpha") : 0.5};
  }
  if (kind == "intersection") {
    check_keys(j, {"kind", "members"}, where);
    if (!j.contains("members") || !j["members"].is_array() || j["members"].empty())
      bad(where + ".members must be a nonempty array");
    Intersection a;
    for (std::size_t i = 0; i < j["members"].size(); ++i)
      a.members.push_back(parse_acceptance(sp, j["members"][i], where + ".members[" + std::to_string(i) + "]"));
    return a;
  }
  bad(where + ".kind must be linear, entropic, avar or intersection");
}

RandomVariable parse_variable(const SpacePtr& sp, const json& j, const std::string& where) {
  check_keys(j, {"values", "tail"}, where);
  if (!j.contains("values")) bad(where + ".values is required");
  std::optional<Tail> tail;
  if (j.contains("tail")) tail = parse_tail(j["tail"], where + ".tail");
  return RandomVariable(sp, get_numbers(j["values"], where + ".values"), tail);
}

Regime parse_regime(const json& j) {
  check_keys(j, {"name", "space", "acceptance", "securities", "positive_index", "prices", "reference"}, "regime");
  if (!j.contains("space")) bad("regime.space is required");
  if (!j.contains("acceptance")) bad("regime.acceptance is required");
  SpacePtr sp = parse_space(j["space"]);
  AcceptanceSpec acc = parse_acceptance(sp, j["acceptance"], "regime.acceptance");
  const std::string name = j.contains("name") ? get_string(j["name"], "regime.name") : "inline";
  std::optional<GeneralizedMeasure> ref;
  if (j.contains("reference")) ref = parse_measure(sp, j["reference"], "regime.reference");
  if (!j.contains("securities")) {
    if (j.contains("prices") || j.contains("positive_index")) bad("regime.prices and positive_index need securities");
    return Regime(std::move(acc), SecuritySpace::cash(sp), PricingFunctional{{1.0}}, name, std::move(ref));
  }
  if (!j["securities"].is_array() || j["securities"].empty()) bad("regime.securities must be a nonempty array");
  if (!j.contains("prices")) bad("regime.prices is required with securities");
  std::vector<RandomVariable> basis;
  for (std::size_t i = 0; i < j["securities"].size(); ++i)
    basis.push_back(parse_variable(sp, j["securities"][i], "regime.securities[" + std::to_string(i) + "]"));
  const std::int64_t pos = j.contains("positive_index") ? get_integer(j["positive_index"], "regime.positive_index") : 0;
  if (pos < 0 || static_cast<std::size_t>(pos) >= basis.size()) bad("regime.positive_index out of range");
  return Regime(std::move(acc), SecuritySpace(std::move(basis), static_cast<std::size_t>(pos)),
                PricingFunctional{get_numbers(j["prices"], "regime.prices")}, name, std::move(ref));
}

// ---------------------------------------------------------------- config

InputSpec parse_input(const json& j, std::size_t i) {
  const std::string where = "inputs[" + std::to_string(i) + "]";
  check_keys(j, {"name", "values", "tail"}, where);
  InputSpec s;
  s.name = j.contains("name") ? get_string(j["name"], where + ".name") : "input" + std::to_string(i);
  if (!j.contains("values")) bad(where + ".values is required");
  s.values = get_numbers(j["values"], where + ".values");
  if (j.contains("tail")) s.tail = parse_tail(j["tail"], where + ".tail");
  return s;
}

std::vector<double> parse_grid(const json& j, const std::string& where) {
  std::vector<double> g = get_numbers(j, where);
  return g;
}

Overrides parse_overrides(const json& j) {
  check_keys(j, {"k_max", "tol", "gauge_level", "m_grid", "n_grid", "tail_grid", "k_grid", "eps_grid", "k_schedule",
                 "probes", "seed"},
             "overrides");
  Overrides o;
  if (j.contains("k_max")) o.k_max = get_integer(j["k_max"], "overrides.k_max");
  if (j.contains("tol")) o.tol = get_number(j["tol"], "overrides.tol");
  if (j.contains("gauge_level")) o.gauge_level = get_number(j["gauge_level"], "overrides.gauge_level");
  if (j.contains("m_grid")) o.m_grid = parse_grid(j["m_grid"], "overrides.m_grid");
  if (j.contains("n_grid")) o.n_grid = parse_grid(j["n_grid"], "overrides.n_grid");
  if (j.contains("tail_grid")) o.tail_grid = parse_grid(j["tail_grid"], "overrides.tail_grid");
  if (j.contains("k_grid")) o.k_grid = parse_grid(j["k_grid"], "overrides.k_grid");
  if (j.contains("eps_grid")) o.eps_grid = parse_grid(j["eps_grid"], "overrides.eps_grid");
  if (j.contains("k_schedule")) {
    if (!j["k_schedule"].is_array()) bad("overrides.k_schedule must be an array of integers");
    std::vector<std::int64_t> s;
    for (const auto& v : j["k_schedule"]) s.push_back(get_integer(v, "overrides.k_schedule"));
    o.k_schedule = std::move(s);
  }
  if (j.contains("probes")) {
    const std::int64_t p = get_integer(j["probes"], "overrides.probes");
    if (p < 1 || p > 100000) bad("overrides.probes must lie in [1, 100000]");
    o.probes = static_cast<std::size_t>(p);
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) bad("overrides.seed must be a nonnegative integer");
    o.seed = j["seed"].get<std::uint64_t>();
  }
  return o;
}

void check_grid(const std::optional<std::vector<double>>& g, const std::string& name, bool allow_zero) {
  if (!g) return;
  if (g->empty() || g->size() > 64) bad("overrides." + name + " must hold 1 to 64 values");
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double v = (*g)[i];
    if (!(allow_zero ? v >= 0.0 : v > 0.0)) bad("overrides." + name + " values must be positive");
    if (i > 0 && !(v > (*g)[i - 1])) bad("overrides." + name + " must be strictly increasing");
  }
}

}  // namespace

const std::vector<std::string>& known_tasks() {
  static const std::vector<std::string> t = {"risk",      "dual",    "norm",      "classify", "extend",
                                             "subgrad",   "reference", "diagnose", "examples"};
  return t;
}

void validate_config(const RunConfig& c) {
  if (c.schema_version != kSchemaVersion) bad("unsupported schema_version " + std::to_string(c.schema_version));
  if (c.task.empty()) bad("task is required");
  const auto& tasks = known_tasks();
  if (std::find(tasks.begin(), tasks.end(), c.task) == tasks.end()) bad("unknown task '" + c.task + "'");
  if (c.format != "table" && c.format != "csv") bad("format must be table or csv");
  if (c.builtin && c.regime) bad("give either builtin or regime, not both");
  if (c.builtin && !builtin_exists(*c.builtin)) bad("unknown builtin '" + *c.builtin + "'");
  if (c.task != "examples") {
    if (!c.builtin && !c.regime) bad("task '" + c.task + "' needs a builtin or an inline regime");
    const bool regime_level = c.task == "reference" || c.task == "diagnose";
    if (c.regime && c.inputs.empty() && !regime_level) bad("task '" + c.task + "' with an inline regime needs inputs");
  }
  if (c.tag && c.task != "examples") bad("tag only applies to the examples task");
  std::set<std::string> names;
  for (const auto& in : c.inputs) {
    if (in.name.empty()) bad("input names must be nonempty");
    if (!names.insert(in.name).second) bad("duplicate input name '" + in.name + "'");
  }
  const Overrides& o = c.overrides;
  if (o.k_max && (*o.k_max < 1 || *o.k_max > (1 << 20))) bad("overrides.k_max must lie in [1, 2^20]");
  if (o.tol && !(*o.tol > 0.0 && *o.tol <= 0.1)) bad("overrides.tol must lie in (0, 0.1]");
  if (o.gauge_level && !(*o.gauge_level > 0.0)) bad("overrides.gauge_level must be positive");
  check_grid(o.m_grid, "m_grid", true);
  check_grid(o.n_grid, "n_grid", true);
  check_grid(o.tail_grid, "tail_grid", false);
  check_grid(o.k_grid, "k_grid", false);
  check_grid(o.eps_grid, "eps_grid", false);
  if (o.k_schedule) {
    if (o.k_schedule->empty() || o.k_schedule->size() > 64) bad("overrides.k_schedule must hold 1 to 64 values");
    for (std::size_t i = 0; i < o.k_schedule->size(); ++i) {
      if ((*o.k_schedule)[i] < 1) bad("overrides.k_schedule values must be positive");
      if (i > 0 && (*o.k_schedule)[i] <= (*o.k_schedule)[i - 1]) bad("overrides.k_schedule must be strictly increasing");
    }
  }
  if (o.probes && (*o.probes < 1 || *o.probes > 100000)) bad("overrides.probes must lie in [1, 100000]");
}

RunConfig parse_config(const json& j) {
  check_keys(j, {"schema_version", "task", "builtin", "regime", "inputs", "overrides", "out", "format", "tag"}, "config");
  RunConfig c;
  if (!j.contains("schema_version")) bad("schema_version is required");
  c.schema_version = static_cast<int>(get_integer(j["schema_version"], "schema_version"));
  if (!j.contains("task")) bad("task is required");
  c.task = get_string(j["task"], "task");
  if (j.contains("builtin")) c.builtin = get_string(j["builtin"], "builtin");
  if (j.contains("regime")) {
    if (!j["regime"].is_object()) bad("regime must be an object");
    c.regime = j["regime"];
  }
  if (j.contains("inputs")) {
    if (!j["inputs"].is_array()) bad("inputs must be an array");
    for (std::size_t i = 0; i < j["inputs"].size(); ++i) c.inputs.push_back(parse_input(j["inputs"][i], i));
  }
  if (j.contains("overrides")) c.overrides = parse_overrides(j["overrides"]);
  if (j.contains("out")) c.out = get_string(j["out"], "out");
  if (j.contains("format")) c.format = get_string(j["format"], "format");
  if (j.contains("tag")) c.tag = get_string(j["tag"], "tag");
  validate_config(c);
  if (c.regime) parse_regime(*c.regime);  // surface regime errors at parse time
  return c;
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["task"] = c.task;
  if (c.builtin) j["builtin"] = *c.builtin;
  if (c.regime) j["regime"] = *c.regime;
  if (!c.inputs.empty()) {
    json arr = json::array();
    for (const auto& in : c.inputs) {
      json e{{"name", in.name}, {"values", in.values}};
      if (in.tail) e["tail"] = tail_json(*in.tail);
      arr.push_back(std::move(e));
    }
    j["inputs"] = std::move(arr);
  }
  json o = json::object();
  const Overrides& ov = c.overrides;
  if (ov.k_max) o["k_max"] = *ov.k_max;
  if (ov.tol) o["tol"] = *ov.tol;
  if (ov.gauge_level) o["gauge_level"] = *ov.gauge_level;
  if (ov.m_grid) o["m_grid"] = *ov.m_grid;
  if (ov.n_grid) o["n_grid"] = *ov.n_grid;
  if (ov.tail_grid) o["tail_grid"] = *ov.tail_grid;
  if (ov.k_grid) o["k_grid"] = *ov.k_grid;
  if (ov.eps_grid) o["eps_grid"] = *ov.eps_grid;
  if (ov.k_schedule) o["k_schedule"] = *ov.k_schedule;
  if (ov.probes) o["probes"] = *ov.probes;
  if (ov.seed) o["seed"] = *ov.seed;
  if (!o.empty()) j["overrides"] = std::move(o);
  if (c.out) j["out"] = *c.out;
  j["format"] = c.format;
  if (c.tag) j["tag"] = *c.tag;
  return j;
}

// ---------------------------------------------------------------- execution

namespace {

struct Plan {
  std::string label;
  BuiltinCase cas;
};

Plan make_plan(const RunConfig& c) {
  Plan p;
  if (c.builtin) {
    p.cas = make_builtin(*c.builtin, BuiltinOptions{c.overrides.k_max});
    p.label = *c.builtin;
  } else {
    Regime r = parse_regime(*c.regime);
    p.label = r.name;
    p.cas.name = r.name;
    p.cas.levels.push_back(std::move(r));
  }
  if (!c.inputs.empty()) {
    if (p.cas.levels.size() != 1) bad("inline inputs need a single-level regime; " + p.label + " is a refinement ladder");
    p.cas.inputs.clear();
    for (const auto& in : c.inputs) {
      RandomVariable x(p.cas.regime().space(), in.values, in.tail);
      p.cas.inputs.push_back({in.name, {x}});
    }
  }
  return p;
}

ExtensionGrids extension_grids(const Overrides& o) {
  ExtensionGrids g = ExtensionGrids::defaults();
  if (o.m_grid) g.m_grid = *o.m_grid;
  if (o.n_grid) g.n_grid = *o.n_grid;
  if (o.tail_grid) g.tail_grid = *o.tail_grid;
  if (o.tol) g.tol = *o.tol;
  return g;
}

MembershipGrids membership_grids(const Overrides& o) {
  MembershipGrids g = MembershipGrids::defaults();
  if (o.k_grid) g.k_grid = *o.k_grid;
  if (o.tail_grid) g.tail_grid = *o.tail_grid;
  if (o.eps_grid) g.eps_grid = *o.eps_grid;
  if (o.tol) g.tail_tol = *o.tol;
  return g;
}

std::string flag(bool b) { return b ? "true" : "false"; }

std::string risk_meta(const RiskReport& r) {
  std::string m;
  auto put = [&m](const std::string& s) { m += (m.empty() ? "" : ";") + s; };
  if (r.cutoff_limited) put("cutoff_limited");
  if (r.singular_limit) put("singular_limit");
  if (!r.note.empty()) put(r.note);
  if (r.cutoff_value) put("cutoff_value=" + format_number(*r.cutoff_value));
  if (r.oracle_value) put("oracle_value=" + format_number(*r.oracle_value));
  return m;
}

std::string maximizer_label(const RiskReport& r) {
  if (r.singular_limit) return "limit functional";
  if (r.scenario) return r.scenario->label.empty() ? r.scenario->measure.tag() : r.scenario->label;
  return "-";
}

void task_risk(const Plan& p, const BuiltinLadder& lad, Report& rep) {
  const Evaluator& ev = lad.evaluators.back();
  for (const auto& in : p.cas.inputs) {
    const RandomVariable& x = in.finest();
    try {
      RiskReport pr = ev.primal(x);
      rep.add("risk", p.label, in.name, "primal_risk", pr.value, pr.method);
    } catch (const Error& e) {
      if (e.numerical()) throw;
      rep.add_text("risk", p.label, in.name, "primal_risk", "n/a", e.what());
    }
    RiskReport dr = ev.risk(x);
    rep.add("risk", p.label, in.name, "rho_tilde", dr.value, risk_meta(dr));
  }
}

void task_dual(const Plan& p, const BuiltinLadder& lad, Report& rep) {
  const Evaluator& ev = lad.evaluators.back();
  for (const auto& in : p.cas.inputs) {
    RiskReport dr = ev.risk(in.finest());
    const std::string meta = risk_meta(dr);
    rep.add("dual", p.label, in.name, "dual_risk", dr.value, meta);
    rep.add_text("dual", p.label, in.name, "maximizer", maximizer_label(dr), meta);
    if (dr.scenario_index) rep.add("dual", p.label, in.name, "maximizer_index", static_cast<double>(*dr.scenario_index), meta);
    if (dr.scenario) rep.add("dual", p.label, in.name, "maximizer_penalty", dr.scenario->penalty, meta);
  }
}

void task_norm(const Plan& p, const BuiltinLadder& lad, const Overrides& o, Report& rep) {
  const Evaluator& ev = lad.evaluators.back();
  const double c = o.gauge_level.value_or(1.0);
  const std::string meta = "c=" + format_number(c);
  const auto [lo, hi] = norm_equivalence_constants(c);
  for (const auto& in : p.cas.inputs) {
    GaugeResult g = gauge_norm(ev, in.finest(), c);
    std::string gmeta = meta + ";evaluations=" + std::to_string(g.evaluations);
    if (g.cutoff_infinite) gmeta += ";cutoff_infinite";
    rep.add("norm", p.label, in.name, "gauge", g.value, gmeta);
    rep.add_text("norm", p.label, in.name, "certified_infinite", flag(g.certified_infinite), meta);
    rep.add("norm", p.label, in.name, "equivalence_lower", lo, meta);
    rep.add("norm", p.label, in.name, "equivalence_upper", hi, meta);
  }
}

void task_classify(const Plan& p, const BuiltinLadder& lad, const Overrides& o, Report& rep) {
  const MembershipGrids grids = membership_grids(o);
  for (const auto& in : p.cas.inputs) {
    MembershipReport m = classify(lad.ladder(in), grids);
    rep.add_text("classify", p.label, in.name, "in_L", tri_name(m.in_LR), m.cutoffs);
    rep.add_text("classify", p.label, in.name, "in_H", tri_name(m.in_HR), m.cutoffs);
    rep.add_text("classify", p.label, in.name, "in_M", tri_name(m.in_MR), m.cutoffs);
    rep.add_text("classify", p.label, in.name, "in_Gamma", tri_name(m.in_Gamma), m.cutoffs);
    rep.add_text("classify", p.label, in.name, "in_C", tri_name(m.in_CR), m.cutoffs);
    rep.add("classify", p.label, in.name, "gauge", m.gauge, m.cutoffs);
    rep.add("classify", p.label, in.name, "rho_tilde", m.rho_tilde, m.cutoffs);
    rep.add_text("classify", p.label, in.name, "chain_adjusted", flag(m.chain_adjusted), m.cutoffs);
  }
}

void task_extend(const Plan& p, const BuiltinLadder& lad, const Overrides& o, Report& rep) {
  const Evaluator& ev = lad.evaluators.back();
  const ExtensionGrids grids = extension_grids(o);
  for (const auto& in : p.cas.inputs) {
    ExtensionReport e = regularity_check(ev, in.finest(), grids);
    const std::string& meta = e.grids;
    rep.add("extend", p.label, in.name, "rho_tilde", e.rho_tilde, meta);
    rep.add("extend", p.label, in.name, "xi", e.xi.value, meta + (e.xi.cutoff_limited ? ";cutoff_limited" : ""));
    rep.add("extend", p.label, in.name, "eta", e.eta.value.value,
            meta + (e.eta.value.cutoff_limited ? ";cutoff_limited" : ""));
    rep.add("extend", p.label, in.name, "eta_grid_route", e.eta.grid_route,
            meta + (e.eta.grid_route_inadequate ? ";grid_route_inadequate" : ""));
    rep.add("extend", p.label, in.name, "gap", e.gap, meta);
    rep.add_text("extend", p.label, in.name, "chain_holds", flag(e.chain_holds), meta);
    rep.add_text("extend", p.label, in.name, "tail_condition", flag(e.tail_condition), meta);
    rep.add_text("extend", p.label, in.name, "verdict", regularity_name(e.verdict), meta);
  }
}

std::vector<std::int64_t> default_schedule(std::int64_t k_max) {
  std::vector<std::int64_t> s;
  for (std::int64_t k = 16; k < k_max; k *= 2) s.push_back(k);
  s.push_back(k_max);
  return s;
}

void task_subgrad(const Plan& p, const BuiltinLadder& lad, const Overrides& o, Report& rep) {
  const Evaluator& ev = lad.evaluators.back();
  const ExtensionGrids grids = extension_grids(o);
  SubgradientOptions opt;
  if (o.probes) opt.probes = *o.probes;
  if (o.seed) opt.seed = *o.seed;
  const std::string meta = "probes=" + std::to_string(opt.probes) + ";seed=" + std::to_string(opt.seed);
  for (const auto& in : p.cas.inputs) {
    const RandomVariable& x = in.finest();
    for (Extension which : {Extension::RhoTilde, Extension::Eta}) {
      const std::string w = extension_name(which);
      try {
        SubgradientReport s = subgradient(ev, x, which, opt, grids);
        rep.add("subgrad", p.label, in.name, w + ".value", s.value, meta);
        rep.add("subgrad", p.label, in.name, w + ".maximizers", static_cast<double>(s.maximizers.size()), meta);
        for (std::size_t i = 0; i < s.maximizers.size() && i < 8; ++i) {
          const Maximizer& m = s.maximizers[i];
          rep.add_text("subgrad", p.label, in.name, w + ".maximizer" + std::to_string(i),
                       m.label + (m.singular_limit ? " (singular limit)" : ""), "gap=" + format_number(m.gap));
        }
        rep.add("subgrad", p.label, in.name, w + ".probe_violations", static_cast<double>(s.probe_violations), meta);
        rep.add_text("subgrad", p.label, in.name, w + ".existence_guaranteed", flag(s.existence_guaranteed), s.note);
        RegularProjectionReport rp = regular_projection_check(ev, x, s, opt, grids);
        rep.add_text("subgrad", p.label, in.name, w + ".regular_projection", rp.verdict, meta);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoMaximizer) throw;
        rep.add_text("subgrad", p.label, in.name, w + ".maximizers", "none", e.what());
      }
      if (!ev.consistent().indexed.empty()) {
        const auto sched = o.k_schedule.value_or(default_schedule(ev.consistent().indexed.front().k_max));
        EscapeReport er = escape_diagnostic(ev, x, which, sched, grids);
        std::string arg;
        for (const auto& [k, a] : er.argmax) arg += (arg.empty() ? "" : " ") + std::to_string(k) + ":" + std::to_string(a);
        rep.add_text("subgrad", p.label, in.name, w + ".escape", er.verdict, "cutoff:argmax " + arg);
      }
    }
  }
}

void task_reference(const Plan& p, const BuiltinLadder& lad, Report& rep) {
  const Evaluator& ev = lad.evaluators.back();
  DiagnosticReport sens = sensitivity_check(ev);
  rep.add_text("reference", p.label, "-", "sensitivity", sens.label, sens.narrative);
  StrongReferenceReport s = strong_reference_check(ev);
  rep.add_text("reference", p.label, "-", "strong_reference", s.summary.label, s.summary.narrative);
  rep.add_text("reference", p.label, "-", "reference_set_nonempty", flag(s.reference_set_nonempty));
  rep.add_text("reference", p.label, "-", "coherent", flag(s.coherent));
  if (s.coherent_agrees) rep.add_text("reference", p.label, "-", "coherent_equivalence_holds", flag(*s.coherent_agrees));
  rep.add_text("reference", p.label, "-", "atom_test_passed", flag(s.atom_test_passed));
  rep.add("reference", p.label, "-", "zero_penalty_members", static_cast<double>(s.zero_penalty.size()));
  try {
    WeakReference w = weak_reference(ev.consistent(), &ev.regime().acceptance);
    rep.add("reference", p.label, "-", "weak_reference_scale", w.scale, w.note);
    rep.add("reference", p.label, "-", "weak_reference_penalty_bound", w.penalty_bound,
            w.penalty_verified ? "verified" : "unverified");
  } catch (const Error& e) {
    if (e.numerical()) throw;
    rep.add_text("reference", p.label, "-", "weak_reference", "n/a", e.what());
  }
}

void task_diagnose(const Plan& p, const BuiltinLadder& lad, Report& rep) {
  const Evaluator& ev = lad.evaluators.back();
  ValidationReport v = validate_regime(ev.regime());
  rep.add_text("diagnose", p.label, "-", "valid", flag(v.valid), v.narrative);
  DiagnosticReport c = continuity_above_diagnostic(ev.regime());
  rep.add_text("diagnose", p.label, "-", "continuity_above", c.label, c.narrative);
  for (const auto& var : p.cas.variants) {
    DiagnosticReport cv = continuity_above_diagnostic(var.regime);
    rep.add_text("diagnose", p.label + "/" + var.name, "-", "continuity_above", cv.label, cv.narrative);
  }
  DiagnosticReport s = sensitivity_check(ev);
  rep.add_text("diagnose", p.label, "-", "sensitivity", s.label, s.narrative);
  const ScenarioFamily& fam = ev.consistent();
  rep.add("diagnose", p.label, "-", "consistent_members", static_cast<double>(fam.members.size()));
  rep.add("diagnose", p.label, "-", "indexed_families", static_cast<double>(fam.indexed.size()));
  rep.add("diagnose", p.label, "-", "adaptive_families", static_cast<double>(fam.adaptive.size()));
}

void task_examples(const RunConfig& c, Report& rep) {
  for (const auto& row : builtin_catalog(c.tag.value_or(""))) {
    std::string tags;
    for (const auto& t : row.tags) tags += (tags.empty() ? "" : " ") + t;
    rep.add_text("examples", row.name, "-", "description", row.description, tags);
    rep.add_text("examples", row.name, "-", "anchor", row.anchor, tags);
  }
}

}  // namespace

RunResult execute(const RunConfig& c) {
  RunResult res;
  try {
    validate_config(c);
    if (c.task == "examples") {
      task_examples(c, res.report);
      return res;
    }
    Plan p = make_plan(c);
    const BuiltinLadder lad = build_ladder(p.cas);
    if (c.task == "risk") task_risk(p, lad, res.report);
    else if (c.task == "dual") task_dual(p, lad, res.report);
    else if (c.task == "norm") task_norm(p, lad, c.overrides, res.report);
    else if (c.task == "classify") task_classify(p, lad, c.overrides, res.report);
    else if (c.task == "extend") task_extend(p, lad, c.overrides, res.report);
    else if (c.task == "subgrad") task_subgrad(p, lad, c.overrides, res.report);
    else if (c.task == "reference") task_reference(p, lad, res.report);
    else task_diagnose(p, lad, res.report);
  } catch (const Error& e) {
    res.exit_code = e.numerical() ? 3 : 2;
    res.diagnostic = e.what();
    res.report = Report{};
  } catch (const std::exception& e) {
    res.exit_code = 2;
    res.diagnostic = std::string("error: ") + e.what();
    res.report = Report{};
  }
  return res;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  RunResult res = execute(c);
  if (res.exit_code != 0) {
    err << res.diagnostic << '\n';
    return res.exit_code;
  }
  out << (c.format == "csv" ? to_csv(res.report) : to_table(res.report));
  if (c.out) {
    std::ofstream f(*c.out, std::ios::binary);
    if (!f || !(f << to_csv(res.report))) {
      err << "ConfigError: cannot write " << *c.out << '\n';
      return 2;
    }
  }
  return 0;
}

}  // namespace mrisk
