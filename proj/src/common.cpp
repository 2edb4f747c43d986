// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdio>

#include "mrisk/error.hpp"
#include "mrisk/ext_real.hpp"

namespace mrisk {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::TailUndefined: return "TailUndefined";
    case ErrorCode::NegativeCoefficient: return "NegativeCoefficient";
    case ErrorCode::UnsupportedCombination: return "UnsupportedCombination";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::NotFinite: return "NotFinite";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::SingularMember: return "SingularMember";
    case ErrorCode::InconsistentRoutes: return "InconsistentRoutes";
    case ErrorCode::NoMaximizer: return "NoMaximizer";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

double ExtReal::value() const {
  if (!finite()) fail(ErrorCode::NotFinite, "value() on " + str());
  return value_;
}

double ExtReal::to_double() const {
  switch (kind_) {
    case Kind::PosInf: return HUGE_VAL;
    case Kind::NegInf: return -HUGE_VAL;
    default: return value_;
  }
}

ExtReal ExtReal::operator-() const {
  switch (kind_) {
    case Kind::PosInf: return neg_inf();
    case Kind::NegInf: return pos_inf();
    default: return ExtReal(-value_);
  }
}

ExtReal operator+(const ExtReal& a, const ExtReal& b) {
  if (a.finite() && b.finite()) return ExtReal(a.value_ + b.value_);
  if (a.finite()) return b;
  if (b.finite()) return a;
  if (a.kind_ != b.kind_) fail(ErrorCode::NotFinite, "inf - inf");
  return a;
}

ExtReal operator*(double c, const ExtReal& a) {
  if (a.finite()) return ExtReal(c * a.value_);
  if (c == 0.0) return ExtReal(0.0);
  return c > 0 ? a : -a;
}

bool operator<(const ExtReal& a, const ExtReal& b) {
  if (a.kind_ == b.kind_) return a.finite() && a.value_ < b.value_;
  if (a.is_neg_inf()) return true;
  if (b.is_pos_inf()) return true;
  return false;
}

bool operator==(const ExtReal& a, const ExtReal& b) {
  return a.kind_ == b.kind_ && (!a.finite() || a.value_ == b.value_);
}

std::string ExtReal::str() const { return format_number(*this); }

ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }
ExtReal min(const ExtReal& a, const ExtReal& b) { return b < a ? b : a; }

bool near(const ExtReal& a, const ExtReal& b, double tol) {
  if (a.finite() && b.finite()) return std::fabs(a.value() - b.value()) <= tol;
  return a.kind() == b.kind();
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_number(const ExtReal& v) { return format_number(v.to_double()); }

}  // namespace mrisk
