// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrisk/family.hpp"
#include "mrisk/measure.hpp"
#include "mrisk/regime.hpp"

namespace mrisk {

struct SolverOptions {
  double tol_m = 1e-10;           ///< absolute tolerance on the security multiple
  double bracket_cap = 0x1p60;    ///< bracket expansion limit
  std::size_t direct_lp_rows = 64;  ///< above this many scenarios the LP is solved in transposed form
};

struct RiskReport {
  ExtReal value;
  /// Coefficients z of the optimal security Z = sum z_j B_j (primal route).
  std::optional<std::vector<double>> security;
  /// Maximizing scenario (dual route).
  std::optional<ScenarioMember> scenario;
  /// Index inside an indexed family, when the maximizer came from one.
  std::optional<std::int64_t> scenario_index;
  std::string method;
  bool cutoff_limited = false;
  /// The value is the limit functional's, not attained below the cutoff.
  bool singular_limit = false;
  std::optional<ExtReal> cutoff_value;
  std::optional<ExtReal> oracle_value;
  std::string note;
};

RiskReport primal_risk(const Regime& r, const RandomVariable& x, const SolverOptions& opt = {});

/// Support function of the acceptance set at mu.
ExtReal sigma_A(const AcceptanceSpec& a, const GeneralizedMeasure& mu);

RiskReport dual_risk(const Regime& r, const RandomVariable& x, const ScenarioFamily& consistent,
                     double tol_sg = 1e-8);

/// Tail mean at level alpha: sup of E_Q[X] over dQ/dP <= 1/(1-alpha).
ExtReal avar_eval(const GeneralizedMeasure& p, double alpha, const RandomVariable& x);
/// (1/beta) log E_P[exp(beta X)].
ExtReal entropic_eval(const GeneralizedMeasure& p, double beta, const RandomVariable& x);

/// Maximizing Q of the tail mean (density capped at 1/(1-alpha)).
GeneralizedMeasure avar_worst_case(const GeneralizedMeasure& p, double alpha, const RandomVariable& x);
/// Q with dQ/dP proportional to exp(beta X).
GeneralizedMeasure gibbs_measure(const GeneralizedMeasure& p, double beta, const RandomVariable& x);
/// H(Q|P) for probabilities; +inf unless Q << P.
ExtReal relative_entropy(const GeneralizedMeasure& q, const GeneralizedMeasure& p);

/// Smallest m with g(X - mU) <= 0 for a functional acceptance set, g being
/// the tail mean or the entropic functional.
ExtReal functional_root(const AcceptanceSpec& a, const RandomVariable& x, const RandomVariable& u,
                        const SolverOptions& opt = {});

/// Argmax maps over the pricing-consistent scenarios of functional acceptance sets.
AdaptiveMembers entropic_scenarios(const Entropic& e, const RandomVariable& u, double unit_price);
AdaptiveMembers avar_scenarios(const AVaR& a, const RandomVariable& u, double unit_price);

}  // namespace mrisk
