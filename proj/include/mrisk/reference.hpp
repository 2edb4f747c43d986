// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrisk/family.hpp"
#include "mrisk/regime.hpp"
#include "mrisk/solver.hpp"

namespace mrisk {

/// Scenario generators read off the acceptance specification, before
/// matching them against the prices.
ScenarioFamily raw_family(const Regime& r);

struct ConsistencyOptions {
  double residual_tol = 1e-9;
  std::size_t max_subsets = 200000;
};

/// Members of the conic hull of `raw` that reproduce the prices on S.
/// Finite members are combined through the vertices of
/// {t >= 0 : sum t_i (integral of B_j against mu_i) = p_j}. Penalties are the
/// smaller of sum t_i alpha_i and the support function, when the latter is
/// available.
ScenarioFamily pricing_consistent(const ScenarioFamily& raw, const SecuritySpace& s, const PricingFunctional& p,
                                  const AcceptanceSpec* acceptance = nullptr, const ConsistencyOptions& opt = {});

/// A regime bundled with its pricing-consistent family.
class Evaluator {
 public:
  explicit Evaluator(Regime r, SolverOptions opt = {});

  const Regime& regime() const { return regime_; }
  const ScenarioFamily& consistent() const { return consistent_; }
  const SolverOptions& options() const { return opt_; }

  /// Dual route with tail-capable integration.
  RiskReport risk(const RandomVariable& x) const;
  ExtReal value(const RandomVariable& x) const { return risk(x).value; }
  RiskReport primal(const RandomVariable& x) const { return primal_risk(regime_, x, opt_); }

 private:
  Regime regime_;
  SolverOptions opt_;
  ScenarioFamily consistent_;
};

enum class Verdict { Holds, Fails, Inconclusive };
const char* verdict_name(Verdict v);

struct Witness {
  std::string item;
  ExtReal value;
};

struct DiagnosticReport {
  std::string check;
  Verdict verdict = Verdict::Inconclusive;
  std::string label;
  std::vector<Witness> witnesses;
  bool vacuous = false;
  std::string narrative;
};

struct WeakReference {
  GeneralizedMeasure probability;
  double scale = 0.0;  ///< c with penalty(c P) finite
  ExtReal penalty_bound;
  bool penalty_verified = false;
  std::string note;
};

/// Normalized 2^{-l} mixture of the members.
WeakReference weak_reference(const ScenarioFamily& family, const AcceptanceSpec* acceptance = nullptr);

/// Every atom of the reference support must be charged by some consistent
/// member (dual charging criterion).
DiagnosticReport sensitivity_check(const Evaluator& ev);

struct StrongReferenceOptions {
  double zero_tol = 1e-10;
  double risk_tol = 1e-12;
  int max_exponent = 30;  ///< k runs over 1, 2, 4, ..., 2^max_exponent
};

struct StrongReferenceReport {
  DiagnosticReport summary;
  std::vector<std::string> zero_penalty;  ///< labels of the zero-penalty members
  bool reference_set_nonempty = false;    ///< some zero-penalty scenario is equivalent to the reference
  bool coherent = false;
  std::optional<bool> coherent_agrees;  ///< coherent case: nonempty iff sensitive
  bool atom_test_passed = false;        ///< rho(-k 1_a) < 0 for some k at every atom
  std::vector<Witness> atom_evidence;   ///< smallest successful k per atom, or the failing atom
};

StrongReferenceReport strong_reference_check(const Evaluator& ev, const StrongReferenceOptions& opt = {});

DiagnosticReport continuity_above_diagnostic(const Regime& r);

/// Atoms the regime is judged on: the declared reference support, or every atom.
std::vector<std::size_t> reference_atoms(const Regime& r);

}  // namespace mrisk
