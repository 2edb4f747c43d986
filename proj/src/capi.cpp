// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "mrisk/mrisk.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "mrisk/builtins.hpp"
#include "mrisk/runner.hpp"

struct mrisk_config {
  mrisk::RunConfig cfg;
};

struct mrisk_result {
  mrisk::RunResult res;
};

struct mrisk_evaluator {
  std::unique_ptr<mrisk::Evaluator> ev;
};

namespace {

thread_local std::string g_last_error;

mrisk_status set_error(mrisk_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
mrisk_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return MRISK_OK;
  } catch (const mrisk::Error& e) {
    return set_error(static_cast<mrisk_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(MRISK_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(MRISK_E_INTERNAL, e.what());
  } catch (...) {
    return set_error(MRISK_E_INTERNAL, "unknown failure");
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

}  // namespace

#define MRISK_REQUIRE_PTR(p)                                                \
  do {                                                                      \
    if (!(p)) return set_error(MRISK_E_NULL_POINTER, "null pointer: " #p); \
  } while (0)

extern "C" {

const char* mrisk_version(void) { return "0.1.0"; }
const char* mrisk_last_error(void) { return g_last_error.c_str(); }
void mrisk_string_free(char* s) { std::free(s); }

mrisk_status mrisk_config_parse(const char* json_text, mrisk_config** out) {
  MRISK_REQUIRE_PTR(json_text);
  MRISK_REQUIRE_PTR(out);
  *out = nullptr;
  return guarded([&] { *out = new mrisk_config{mrisk::parse_config_text(json_text)}; });
}

mrisk_status mrisk_config_new(const char* builtin, const char* task, mrisk_config** out) {
  MRISK_REQUIRE_PTR(out);
  *out = nullptr;
  return guarded([&] {
    auto c = std::make_unique<mrisk_config>();
    if (builtin) c->cfg.builtin = builtin;
    if (task) c->cfg.task = task;
    *out = c.release();
  });
}

void mrisk_config_free(mrisk_config* cfg) { delete cfg; }

mrisk_status mrisk_config_set_builtin(mrisk_config* cfg, const char* name) {
  MRISK_REQUIRE_PTR(cfg);
  MRISK_REQUIRE_PTR(name);
  return guarded([&] {
    cfg->cfg.builtin = name;
    cfg->cfg.regime.reset();
  });
}

mrisk_status mrisk_config_set_task(mrisk_config* cfg, const char* task) {
  MRISK_REQUIRE_PTR(cfg);
  MRISK_REQUIRE_PTR(task);
  return guarded([&] { cfg->cfg.task = task; });
}

mrisk_status mrisk_config_set_kmax(mrisk_config* cfg, int64_t k_max) {
  MRISK_REQUIRE_PTR(cfg);
  return guarded([&] { cfg->cfg.overrides.k_max = k_max; });
}

mrisk_status mrisk_config_set_tol(mrisk_config* cfg, double tol) {
  MRISK_REQUIRE_PTR(cfg);
  return guarded([&] { cfg->cfg.overrides.tol = tol; });
}

mrisk_status mrisk_config_set_out(mrisk_config* cfg, const char* path) {
  MRISK_REQUIRE_PTR(cfg);
  return guarded([&] {
    if (path)
      cfg->cfg.out = path;
    else
      cfg->cfg.out.reset();
  });
}

mrisk_status mrisk_config_set_format(mrisk_config* cfg, const char* format) {
  MRISK_REQUIRE_PTR(cfg);
  MRISK_REQUIRE_PTR(format);
  return guarded([&] { cfg->cfg.format = format; });
}

mrisk_status mrisk_config_set_tag(mrisk_config* cfg, const char* tag) {
  MRISK_REQUIRE_PTR(cfg);
  return guarded([&] {
    if (tag)
      cfg->cfg.tag = tag;
    else
      cfg->cfg.tag.reset();
  });
}

mrisk_status mrisk_config_validate(const mrisk_config* cfg) {
  MRISK_REQUIRE_PTR(cfg);
  return guarded([&] { mrisk::validate_config(cfg->cfg); });
}

mrisk_status mrisk_config_to_json(const mrisk_config* cfg, char** out) {
  MRISK_REQUIRE_PTR(cfg);
  MRISK_REQUIRE_PTR(out);
  *out = nullptr;
  return guarded([&] { *out = dup(mrisk::to_json(cfg->cfg).dump(2)); });
}

const char* mrisk_config_out(const mrisk_config* cfg) {
  return cfg && cfg->cfg.out ? cfg->cfg.out->c_str() : nullptr;
}

const char* mrisk_config_format(const mrisk_config* cfg) { return cfg ? cfg->cfg.format.c_str() : nullptr; }

mrisk_status mrisk_run(const mrisk_config* cfg, mrisk_result** out) {
  MRISK_REQUIRE_PTR(cfg);
  MRISK_REQUIRE_PTR(out);
  *out = nullptr;
  return guarded([&] { *out = new mrisk_result{mrisk::execute(cfg->cfg)}; });
}

void mrisk_result_free(mrisk_result* res) { delete res; }

int mrisk_result_exit_code(const mrisk_result* res) { return res ? res->res.exit_code : 2; }

const char* mrisk_result_diagnostic(const mrisk_result* res) { return res ? res->res.diagnostic.c_str() : ""; }

size_t mrisk_result_row_count(const mrisk_result* res) { return res ? res->res.report.rows().size() : 0; }

const char* mrisk_result_cell(const mrisk_result* res, size_t row, size_t column) {
  if (!res || row >= res->res.report.rows().size()) return nullptr;
  const mrisk::ReportRow& r = res->res.report.rows()[row];
  switch (column) {
    case 0: return r.task.c_str();
    case 1: return r.regime.c_str();
    case 2: return r.input.c_str();
    case 3: return r.quantity.c_str();
    case 4: return r.value.c_str();
    case 5: return r.cutoff_meta.c_str();
    default: return nullptr;
  }
}

mrisk_status mrisk_result_csv(const mrisk_result* res, char** out) {
  MRISK_REQUIRE_PTR(res);
  MRISK_REQUIRE_PTR(out);
  *out = nullptr;
  return guarded([&] { *out = dup(mrisk::to_csv(res->res.report)); });
}

mrisk_status mrisk_result_table(const mrisk_result* res, char** out) {
  MRISK_REQUIRE_PTR(res);
  MRISK_REQUIRE_PTR(out);
  *out = nullptr;
  return guarded([&] { *out = dup(mrisk::to_table(res->res.report)); });
}

mrisk_status mrisk_evaluator_builtin(const char* name, int64_t k_max, mrisk_evaluator** out) {
  MRISK_REQUIRE_PTR(name);
  MRISK_REQUIRE_PTR(out);
  *out = nullptr;
  return guarded([&] {
    mrisk::BuiltinOptions opt;
    if (k_max > 0) opt.k_max = k_max;
    mrisk::BuiltinCase c = mrisk::make_builtin(name, opt);
    *out = new mrisk_evaluator{std::make_unique<mrisk::Evaluator>(c.regime())};
  });
}

void mrisk_evaluator_free(mrisk_evaluator* ev) { delete ev; }

size_t mrisk_evaluator_atom_count(const mrisk_evaluator* ev) { return ev ? ev->ev->regime().space()->size() : 0; }

mrisk_status mrisk_evaluator_risk(const mrisk_evaluator* ev, const double* values, size_t n, double tail_upper,
                                  double tail_lower, double* out) {
  MRISK_REQUIRE_PTR(ev);
  MRISK_REQUIRE_PTR(out);
  if (n > 0) MRISK_REQUIRE_PTR(values);
  return guarded([&] {
    const auto& sp = ev->ev->regime().space();
    std::optional<mrisk::Tail> tail;
    if (sp->embedded()) tail = mrisk::Tail::limit2(tail_upper, tail_lower);
    mrisk::RandomVariable x(sp, std::vector<double>(values, values + n), tail);
    const mrisk::ExtReal v = ev->ev->value(x);
    *out = v.finite() ? v.value() : (v.is_pos_inf() ? HUGE_VAL : -HUGE_VAL);
  });
}

}  // extern "C"
