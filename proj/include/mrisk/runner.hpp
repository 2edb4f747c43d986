// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mrisk/measure.hpp"
#include "mrisk/report.hpp"

namespace mrisk {

inline constexpr int kSchemaVersion = 1;

/// Inline position: values per atom plus an optional tail declaration.
struct InputSpec {
  std::string name;
  std::vector<double> values;
  std::optional<Tail> tail;

  friend bool operator==(const InputSpec&, const InputSpec&) = default;
};

struct Overrides {
  std::optional<std::int64_t> k_max;
  std::optional<double> tol;
  std::optional<double> gauge_level;
  std::optional<std::vector<double>> m_grid;
  std::optional<std::vector<double>> n_grid;
  std::optional<std::vector<double>> tail_grid;
  std::optional<std::vector<double>> k_grid;
  std::optional<std::vector<double>> eps_grid;
  std::optional<std::vector<std::int64_t>> k_schedule;
  std::optional<std::size_t> probes;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const Overrides&, const Overrides&) = default;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::string task;
  std::optional<std::string> builtin;
  std::optional<nlohmann::json> regime;  ///< inline regime block, kept verbatim
  std::vector<InputSpec> inputs;
  Overrides overrides;
  std::optional<std::string> out;
  std::string format = "table";
  std::optional<std::string> tag;  ///< row filter for the examples task

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

const std::vector<std::string>& known_tasks();

/// Throws Error(ConfigError) on malformed or out-of-range fields and unknown keys.
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(const std::string& text);
nlohmann::json to_json(const RunConfig& c);
/// Checks task-required fields and override ranges.
void validate_config(const RunConfig& c);

struct RunResult {
  int exit_code = 0;
  Report report;
  std::string diagnostic;  ///< one line, empty on success
};

/// Runs the task without touching the filesystem.
RunResult execute(const RunConfig& c);

/// Runs the task, prints the report to `out` in the configured format and
/// writes CSV to the configured path on success. Diagnostics go to `err`.
int run(const RunConfig& c, std::ostream& out, std::ostream& err);

}  // namespace mrisk
