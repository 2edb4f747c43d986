// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "mrisk/ext_real.hpp"

namespace mrisk {

struct ReportRow {
  std::string task;
  std::string regime;
  std::string input;
  std::string quantity;
  std::string value;
  std::string cutoff_meta;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

class Report {
 public:
  void add(std::string task, std::string regime, std::string input, std::string quantity, const ExtReal& value,
           std::string cutoff_meta = {});
  void add_text(std::string task, std::string regime, std::string input, std::string quantity, std::string value,
                std::string cutoff_meta = {});
  void append(const Report& other);

  const std::vector<ReportRow>& rows() const { return rows_; }
  /// First row with the given input and quantity, or nullptr.
  const ReportRow* find(const std::string& input, const std::string& quantity) const;

 private:
  std::vector<ReportRow> rows_;
};

/// Header task,regime,input,quantity,value,cutoff_meta then one line per row (RFC 4180 quoting).
std::string to_csv(const Report& r);
/// Aligned columns for terminals.
std::string to_table(const Report& r);

std::string csv_field(const std::string& s);

}  // namespace mrisk
