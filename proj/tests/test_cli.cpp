// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "mrisk/builtins.hpp"
#include "mrisk/mrisk.h"
#include "mrisk/runner.hpp"

using namespace mrisk;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  fs::path d = fs::temp_directory_path() / ("mrisk_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

int shell(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd = std::string("\"") + MRISK_CLI_PATH + "\" " + args + " > \"" + stdout_file.string() + "\" 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kFullConfig = R"({
  "schema_version": 1,
  "task": "extend",
  "regime": {
    "name": "two members",
    "space": {"kind": "naturals", "window": 6},
    "acceptance": {"kind": "linear", "members": [
      {"measure": [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.03125], "penalty": 0, "label": "geo"},
      {"measure": {"weights": [0, 0, 0, 0, 0, 0], "tail_upper": 1}, "penalty": 1, "label": "tail"}]}
  },
  "inputs": [
    {"name": "first", "values": [1, 0, 0, 0, 0, 0], "tail": 0},
    {"name": "ramp", "values": [1, 2, 3, 4, 5, 6], "tail": {"upper": {"kind": "pos_inf", "rate": 1}}}
  ],
  "overrides": {"k_max": 64, "tol": 1e-7, "m_grid": [1, 2, 4, 8], "n_grid": [1, 2, 4, 8], "probes": 12, "seed": 5},
  "format": "csv"
})";

}  // namespace

TEST_CASE("config: json round trip") {
  RunConfig a = parse_config_text(kFullConfig);
  RunConfig b = parse_config(to_json(a));
  CHECK(a == b);
  CHECK(to_json(a) == to_json(b));
  for (const char* name : {"example6.1", "example6.2", "example6.3", "example6.4", "example6.5"}) {
    std::ifstream in(fs::path(MRISK_CONFIG_DIR) / (std::string(name) + ".json"));
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    RunConfig c = parse_config_text(ss.str());
    CHECK(c.builtin == std::optional<std::string>(name));
    CHECK(parse_config(to_json(c)) == c);
    CHECK_NOTHROW(validate_config(c));
  }
}

TEST_CASE("config: unknown keys and bad values are rejected") {
  auto rejects = [](const std::string& text) {
    try {
      parse_config_text(text);
    } catch (const Error& e) {
      return e.code() == ErrorCode::ConfigError;
    }
    return false;
  };
  CHECK(rejects(R"({"schema_version": 1, "task": "risk", "builtin": "example6.1", "colour": 1})"));
  CHECK(rejects(R"({"schema_version": 1, "task": "risk", "builtin": "example6.1", "overrides": {"kmax": 3}})"));
  CHECK(rejects(R"({"schema_version": 1, "task": "risk", "regime": {"space": {"kind": "finite", "size": 2},
                   "acceptance": {"kind": "avar", "base": [0.5, 0.5], "level": 0.5}}})"));
  CHECK(rejects(R"({"schema_version": 2, "task": "risk", "builtin": "example6.1"})"));
  CHECK(rejects(R"({"schema_version": 1, "builtin": "example6.1"})"));
  CHECK(rejects("not json"));
  RunConfig c = parse_config_text(R"({"schema_version": 1, "task": "risk", "builtin": "example6.1"})");
  c.overrides.k_max = 0;
  CHECK_THROWS_AS(validate_config(c), Error);
  c.overrides.k_max.reset();
  c.task = "integrate";
  CHECK_THROWS_AS(validate_config(c), Error);
}

TEST_CASE("runner: deterministic output") {
  RunConfig c = parse_config_text(kFullConfig);
  RunResult a = execute(c), b = execute(c);
  CHECK(a.exit_code == 0);
  CHECK(a.report.rows() == b.report.rows());
  CHECK(to_csv(a.report) == to_csv(b.report));
  RunConfig s = parse_config_text(R"({"schema_version": 1, "task": "subgrad", "builtin": "example6.5"})");
  CHECK(to_csv(execute(s).report) == to_csv(execute(s).report));
}

TEST_CASE("runner: examples catalog and tag filter") {
  CHECK(builtin_catalog().size() == 5);
  RunConfig c = parse_config_text(R"({"schema_version": 1, "task": "examples"})");
  RunResult all = execute(c);
  std::set<std::string> regimes;
  for (const auto& r : all.report.rows()) regimes.insert(r.regime);
  CHECK(regimes.size() == 5);
  c.tag = "coherent";
  std::set<std::string> coherent;
  for (const auto& r : execute(c).report.rows()) coherent.insert(r.regime);
  CHECK(coherent == std::set<std::string>{"example6.2", "example6.5"});
}

TEST_CASE("cli: exit codes and output file") {
  const fs::path dir = scratch_dir();
  const fs::path log = dir / "stdout.txt";
  const fs::path csv = dir / "out.csv";

  CHECK(shell("--builtin example6.1 --task dual --format csv --out \"" + csv.string() + "\"", log) == 0);
  const std::string written = slurp(csv);
  CHECK(written.rfind("task,regime,input,quantity,value,cutoff_meta\n", 0) == 0);
  CHECK(written == slurp(log));
  CHECK(written.find("dual,example6.1,first_atom,dual_risk,0.5,") != std::string::npos);

  const fs::path bad = dir / "missing_task.json";
  std::ofstream(bad) << R"({"schema_version": 1, "builtin": "example6.1", "out": ")" << (dir / "never.csv").string() << "\"}";
  CHECK(shell("--config \"" + bad.string() + "\"", log) == 2);
  CHECK_FALSE(fs::exists(dir / "never.csv"));

  CHECK(shell("--builtin nowhere --task risk", log) == 2);
  CHECK(shell("--builtin example6.1 --task risk --kmax 0", log) == 2);
  CHECK(shell("--format xml", log) == 2);
  CHECK(shell("--no-such-flag", log) == 2);
  CHECK(shell("", log) == 0);
  CHECK(slurp(log).find("example6.4") != std::string::npos);

  CHECK(shell("--config \"" + std::string(MRISK_CONFIG_DIR) + "/inline_avar.json\"", log) == 0);
  CHECK(slurp(log).find("ladder,primal_risk,3.5") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("c interface") {
  mrisk_config* cfg = nullptr;
  REQUIRE(mrisk_config_new("example6.5", "risk", &cfg) == MRISK_OK);
  CHECK(mrisk_config_set_format(cfg, "csv") == MRISK_OK);
  CHECK(mrisk_config_validate(cfg) == MRISK_OK);
  mrisk_result* res = nullptr;
  REQUIRE(mrisk_run(cfg, &res) == MRISK_OK);
  CHECK(mrisk_result_exit_code(res) == 0);
  CHECK(mrisk_result_row_count(res) > 0);
  CHECK(std::string(mrisk_result_cell(res, 0, 0)) == "risk");
  CHECK(mrisk_result_cell(res, 0, 6) == nullptr);
  CHECK(mrisk_result_cell(res, 100000, 0) == nullptr);
  char* text = nullptr;
  REQUIRE(mrisk_result_csv(res, &text) == MRISK_OK);
  CHECK(std::string(text).rfind("task,regime", 0) == 0);
  mrisk_string_free(text);
  char* js = nullptr;
  REQUIRE(mrisk_config_to_json(cfg, &js) == MRISK_OK);
  mrisk_config* back = nullptr;
  CHECK(mrisk_config_parse(js, &back) == MRISK_OK);
  mrisk_string_free(js);
  mrisk_config_free(back);
  mrisk_result_free(res);

  CHECK(mrisk_config_set_kmax(cfg, -4) == MRISK_OK);
  CHECK(mrisk_config_validate(cfg) == MRISK_E_CONFIG);
  CHECK(std::string(mrisk_last_error()).find("k_max") != std::string::npos);
  mrisk_config_free(cfg);

  CHECK(mrisk_config_parse("{", &cfg) == MRISK_E_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(mrisk_run(nullptr, &res) == MRISK_E_NULL_POINTER);

  // the zero position carries zero risk in a normalized regime
  mrisk_evaluator* ev = nullptr;
  REQUIRE(mrisk_evaluator_builtin("example6.5", 0, &ev) == MRISK_OK);
  const std::size_t n = mrisk_evaluator_atom_count(ev);
  CHECK(n == 10);
  std::vector<double> zeros(n, 0.0);
  double v = 1.0;
  REQUIRE(mrisk_evaluator_risk(ev, zeros.data(), n, 0.0, 0.0, &v) == MRISK_OK);
  CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(mrisk_evaluator_risk(ev, zeros.data(), n - 1, 0.0, 0.0, &v) != MRISK_OK);
  mrisk_evaluator_free(ev);
  CHECK(mrisk_evaluator_builtin("nowhere", 0, &ev) == MRISK_E_CONFIG);
}
