// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mrisk/extend.hpp"

namespace mrisk {

/// Affine minorant Y -> l(Y) - penalty touching f at X.
struct Maximizer {
  std::string label;
  std::optional<std::int64_t> index;
  std::optional<GeneralizedMeasure> measure;  ///< absent for limit functionals
  double penalty = 0.0;
  ExtReal gap;                ///< f(X) - (l(X) - penalty)
  bool singular_limit = false;
  std::function<ExtReal(const RandomVariable&)> affine;  ///< Y -> l(Y) - penalty
  std::function<ExtReal(const RandomVariable&)> regular;  ///< countably additive part, same penalty
};

struct SubgradientOptions {
  double tol_sg = 1e-8;
  double probe_tol = 1e-7;
  std::size_t probes = 120;
  std::uint64_t seed = 20260101;
};

struct SubgradientReport {
  Extension which = Extension::RhoTilde;
  ExtReal value;
  std::vector<Maximizer> maximizers;
  std::size_t probes = 0;
  std::size_t probe_violations = 0;
  double worst_violation = 0.0;
  bool existence_guaranteed = false;
  std::string note;
};

SubgradientReport subgradient(const Evaluator& ev, const RandomVariable& x, Extension which,
                              const SubgradientOptions& opt = {}, const ExtensionGrids& grids = ExtensionGrids::defaults());

/// Probe positions around X: coordinate bumps, scaled copies, truncations and tail stresses.
std::vector<RandomVariable> subgradient_probes(const Evaluator& ev, const RandomVariable& x, std::size_t count,
                                               std::uint64_t seed);

/// Number of probes Y with f(Y) < affine(Y) beyond tolerance, and the worst shortfall.
std::pair<std::size_t, double> probe_violations(Extension which, const Evaluator& ev,
                                                const std::function<ExtReal(const RandomVariable&)>& affine,
                                                const std::vector<RandomVariable>& probes, double tol,
                                                const ExtensionGrids& grids = ExtensionGrids::defaults());

struct RegularProjectionReport {
  bool singular_present = false;
  bool tail_condition = false;   ///< f tail continuous at X along s X+ for some probed s
  std::optional<double> tail_scale;
  bool regular_part_attains = false;
  bool regular_part_is_subgradient = false;
  std::size_t regular_probe_violations = 0;
  ExtReal regular_gap;
  ExtReal singular_on_negative_part;  ///< singular action on X-, zero when a subgradient
  std::string verdict;
};

RegularProjectionReport regular_projection_check(const Evaluator& ev, const RandomVariable& x,
                                                 const SubgradientReport& report, const SubgradientOptions& opt = {},
                                                 const ExtensionGrids& grids = ExtensionGrids::defaults());

struct EscapeReport {
  std::vector<std::pair<std::int64_t, std::int64_t>> argmax;  ///< (cutoff, argmax index)
  std::string verdict;  ///< "escapes", "stabilizes" or "inconclusive"
};

/// Argmax index of the indexed family at the objective position as the cutoff grows.
/// Under eta the objective is (-n) v X with n the first entry of the n grid.
EscapeReport escape_diagnostic(const Evaluator& ev, const RandomVariable& x, Extension which,
                               const std::vector<std::int64_t>& k_schedule,
                               const ExtensionGrids& grids = ExtensionGrids::defaults());

}  // namespace mrisk
