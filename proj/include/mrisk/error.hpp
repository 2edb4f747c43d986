// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace mrisk {

enum class ErrorCode {
  InvalidArgument = 1,
  SpaceMismatch,
  TailUndefined,
  NegativeCoefficient,
  UnsupportedCombination,
  Unsupported,
  NotFinite,
  NumericalBreakdown,
  BracketFailure,
  EmptyFamily,
  SingularMember,
  InconsistentRoutes,
  NoMaximizer,
  ConfigError,
};

const char* error_name(ErrorCode code);

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

  /// True for failures of the numerical machinery rather than of the input.
  bool numerical() const noexcept {
    return code_ == ErrorCode::NumericalBreakdown || code_ == ErrorCode::BracketFailure;
  }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace mrisk
