// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace mrisk {

enum class Sense { Minimize, Maximize };
enum class LPStatus { Optimal, Unbounded, Infeasible };

const char* status_name(LPStatus s);

/// optimize c.x  s.t.  G x <= h,  A x = b.
///
/// Variables are free unless listed in `nonnegative`.
struct LPProblem {
  std::vector<double> objective;
  std::vector<std::vector<double>> G;
  std::vector<double> h;
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  Sense sense = Sense::Minimize;
  std::vector<bool> nonnegative;

  std::size_t variables() const { return objective.size(); }
};

struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  double optimum = 0.0;
  std::vector<double> argument;
  /// Multipliers for the rows of G then A, oriented so that optimum = y.(h, b).
  std::vector<double> duals;
  std::size_t iterations = 0;
};

struct LPOptions {
  double pivot_tol = 1e-11;
  double feas_tol = 1e-9;
  std::size_t max_iterations = 200000;
};

/// Dense two-phase simplex with Bland's rule. Throws NumericalBreakdown
/// when the iteration cap is hit.
LPResult lp_solve(const LPProblem& p, const LPOptions& opt = {});

/// Largest violation of primal feasibility, dual sign and complementary
/// slackness for an Optimal result.
double lp_optimality_residual(const LPProblem& p, const LPResult& r);

}  // namespace mrisk
