// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "mrisk/report.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace mrisk {

void Report::add(std::string task, std::string regime, std::string input, std::string quantity, const ExtReal& value,
                 std::string cutoff_meta) {
  rows_.push_back({std::move(task), std::move(regime), std::move(input), std::move(quantity), format_number(value),
                   std::move(cutoff_meta)});
}

void Report::add_text(std::string task, std::string regime, std::string input, std::string quantity, std::string value,
                      std::string cutoff_meta) {
  rows_.push_back({std::move(task), std::move(regime), std::move(input), std::move(quantity), std::move(value),
                   std::move(cutoff_meta)});
}

void Report::append(const Report& other) { rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end()); }

const ReportRow* Report::find(const std::string& input, const std::string& quantity) const {
  for (const auto& r : rows_)
    if (r.input == input && r.quantity == quantity) return &r;
  return nullptr;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

std::array<std::string, 6> fields(const ReportRow& r) {
  return {r.task, r.regime, r.input, r.quantity, r.value, r.cutoff_meta};
}

const std::array<std::string, 6> kHeader = {"task", "regime", "input", "quantity", "value", "cutoff_meta"};

}  // namespace

std::string to_csv(const Report& r) {
  std::ostringstream os;
  auto line = [&os](const std::array<std::string, 6>& f) {
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << csv_field(f[i]);
    os << '\n';
  };
  line(kHeader);
  for (const auto& row : r.rows()) line(fields(row));
  return os.str();
}

std::string to_table(const Report& r) {
  std::array<std::size_t, 6> width{};
  for (std::size_t i = 0; i < 6; ++i) width[i] = kHeader[i].size();
  for (const auto& row : r.rows()) {
    auto f = fields(row);
    for (std::size_t i = 0; i < 6; ++i) width[i] = std::max(width[i], f[i].size());
  }
  std::ostringstream os;
  auto line = [&](const std::array<std::string, 6>& f) {
    std::string s;
    for (std::size_t i = 0; i < 6; ++i) {
      s += f[i];
      if (i + 1 < 6) s += std::string(width[i] - f[i].size() + 2, ' ');
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    os << s << '\n';
  };
  line(kHeader);
  std::array<std::string, 6> rule;
  for (std::size_t i = 0; i < 6; ++i) rule[i] = std::string(width[i], '-');
  line(rule);
  for (const auto& row : r.rows()) line(fields(row));
  return os.str();
}

}  // namespace mrisk
