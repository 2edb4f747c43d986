// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end over the C interface.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mrisk/mrisk.h"

namespace {

struct Owned {
  char* p = nullptr;
  ~Owned() { mrisk_string_free(p); }
};

int fail_status(const char* what) {
  std::cerr << what << ": " << mrisk_last_error() << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk measures over acceptance sets, security spaces and truncation extensions"};
  std::optional<std::string> config_path, builtin, task, out, format, tag;
  std::optional<long long> kmax;
  std::optional<double> tol;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--builtin", builtin, "builtin example name");
  app.add_option("--task", task, "risk, dual, norm, classify, extend, subgrad, reference, diagnose or examples");
  app.add_option("--kmax", kmax, "cutoff for indexed scenario families");
  app.add_option("--tol", tol, "extension and tail tolerance");
  app.add_option("--out", out, "CSV output path");
  app.add_option("--format", format, "standard output format")->check(CLI::IsMember({"table", "csv"}));
  app.add_option("--tag", tag, "filter for the examples task");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ConfigError: " << e.what() << '\n';
    return 2;
  }

  mrisk_config* cfg = nullptr;
  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) {
      std::cerr << "ConfigError: cannot read " << *config_path << '\n';
      return 2;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    if (mrisk_config_parse(ss.str().c_str(), &cfg) != MRISK_OK) return fail_status("config");
  } else {
    const bool bare = !builtin && !task;
    if (mrisk_config_new(nullptr, bare ? "examples" : nullptr, &cfg) != MRISK_OK) return fail_status("config");
  }
  std::unique_ptr<mrisk_config, void (*)(mrisk_config*)> guard(cfg, mrisk_config_free);

  if (builtin && mrisk_config_set_builtin(cfg, builtin->c_str()) != MRISK_OK) return fail_status("--builtin");
  if (task && mrisk_config_set_task(cfg, task->c_str()) != MRISK_OK) return fail_status("--task");
  if (kmax && mrisk_config_set_kmax(cfg, *kmax) != MRISK_OK) return fail_status("--kmax");
  if (tol && mrisk_config_set_tol(cfg, *tol) != MRISK_OK) return fail_status("--tol");
  if (out && mrisk_config_set_out(cfg, out->c_str()) != MRISK_OK) return fail_status("--out");
  if (format && mrisk_config_set_format(cfg, format->c_str()) != MRISK_OK) return fail_status("--format");
  if (tag && mrisk_config_set_tag(cfg, tag->c_str()) != MRISK_OK) return fail_status("--tag");
  if (mrisk_config_validate(cfg) != MRISK_OK) {
    std::cerr << mrisk_last_error() << '\n';
    return 2;
  }

  mrisk_result* res = nullptr;
  if (mrisk_run(cfg, &res) != MRISK_OK) return fail_status("run");
  std::unique_ptr<mrisk_result, void (*)(mrisk_result*)> rguard(res, mrisk_result_free);
  const int code = mrisk_result_exit_code(res);
  if (code != 0) {
    std::cerr << mrisk_result_diagnostic(res) << '\n';
    return code;
  }

  const std::string fmt = mrisk_config_format(cfg);
  Owned text;
  if ((fmt == "csv" ? mrisk_result_csv(res, &text.p) : mrisk_result_table(res, &text.p)) != MRISK_OK)
    return fail_status("output");
  std::cout << text.p;

  if (const char* path = mrisk_config_out(cfg)) {
    Owned csv;
    if (mrisk_result_csv(res, &csv.p) != MRISK_OK) return fail_status("output");
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << csv.p)) {
      std::cerr << "ConfigError: cannot write " << path << '\n';
      return 2;
    }
  }
  return 0;
}
