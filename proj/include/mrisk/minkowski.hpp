// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mrisk/reference.hpp"

namespace mrisk {

/// rho(|X| / lambda) on the dual route.
ExtReal rho_abs(const Evaluator& ev, const RandomVariable& x, double lambda = 1.0);

struct GaugeOptions {
  double rel_tol = 1e-9;
  int max_doublings = 200;
};

struct GaugeResult {
  ExtReal value;
  bool certified_infinite = false;  ///< some dual member integrates |X| to +inf
  bool cutoff_infinite = false;     ///< only "above c at every probed lambda"
  int evaluations = 0;
};

/// inf{lambda > 0 : rho(|X| / lambda) <= c}.
GaugeResult gauge_norm(const Evaluator& ev, const RandomVariable& x, double c = 1.0, const GaugeOptions& opt = {});

/// (A_c, B_c) with A_c ||X||_c <= ||X||_1 <= B_c ||X||_c.
std::pair<double, double> norm_equivalence_constants(double c);

/// The same position represented on successively finer discretizations.
struct Ladder {
  std::vector<const Evaluator*> levels;
  std::vector<RandomVariable> inputs;

  static Ladder single(const Evaluator& ev, const RandomVariable& x) { return {{&ev}, {x}}; }
  const Evaluator& finest() const { return *levels.back(); }
  const RandomVariable& finest_input() const { return inputs.back(); }
};

struct LadderValue {
  std::vector<ExtReal> values;  ///< one per level, coarse to fine
  bool certified_infinite = false;
  bool diverging = false;  ///< growth across the last two refinements does not settle
  bool finite() const { return !certified_infinite && !diverging; }
  ExtReal last() const { return values.back(); }
};

/// Divergence rule on three successive values v1, v2, v3:
/// d2 > 1e-6 (1 + |v3|) and d2 >= d1 / 2, with d1 = v2 - v1, d2 = v3 - v2.
bool refinement_diverges(const std::vector<ExtReal>& values);

LadderValue ladder_value(const Ladder& ladder, const std::function<RandomVariable(const RandomVariable&)>& transform);

/// rho(t |X|) across the ladder.
LadderValue scan_scaled_risk(const Ladder& ladder, double t);

enum class Tri { No, Inconclusive, Yes };
const char* tri_name(Tri t);

struct MembershipGrids {
  std::vector<double> k_grid;
  std::vector<double> tail_grid;
  std::vector<double> eps_grid;
  double tail_tol = 1e-6;

  static MembershipGrids defaults();
};

struct Evidence {
  std::string parameter;
  ExtReal value;
};

struct MembershipReport {
  Tri in_LR = Tri::Inconclusive;
  Tri in_HR = Tri::Inconclusive;
  Tri in_MR = Tri::Inconclusive;
  Tri in_Gamma = Tri::Inconclusive;
  Tri in_CR = Tri::Inconclusive;
  ExtReal gauge;
  ExtReal rho_tilde;
  std::vector<Evidence> evidence;
  std::string cutoffs;
  bool chain_adjusted = false;
};

MembershipReport classify(const Ladder& ladder, const MembershipGrids& grids = MembershipGrids::defaults());

inline MembershipReport classify(const Evaluator& ev, const RandomVariable& x,
                                 const MembershipGrids& grids = MembershipGrids::defaults()) {
  return classify(Ladder::single(ev, x), grids);
}

}  // namespace mrisk
