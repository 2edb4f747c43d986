// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrisk/minkowski.hpp"
#include "mrisk/regime.hpp"

namespace mrisk {

/// A named position, given once per refinement level (coarse to fine).
struct BuiltinInput {
  std::string name;
  std::vector<RandomVariable> levels;
  const RandomVariable& finest() const { return levels.back(); }
};

/// Alternative regime on the same space, e.g. a smaller security space.
struct BuiltinVariant {
  std::string name;
  Regime regime;
};

struct BuiltinCase {
  std::string name;
  std::string description;
  std::string anchor;
  std::vector<std::string> tags;
  std::vector<Regime> levels;  ///< refinement ladder, coarse to fine; usually one level
  std::vector<BuiltinInput> inputs;
  std::vector<BuiltinVariant> variants;

  const Regime& regime() const { return levels.back(); }
};

struct BuiltinInfo {
  std::string name;
  std::string description;
  std::string anchor;
  std::vector<std::string> tags;
};

struct BuiltinOptions {
  std::optional<std::int64_t> k_max;  ///< cutoff for indexed families
};

/// The five listed examples, in order.
std::vector<BuiltinInfo> builtin_catalog();
/// Catalog rows carrying the tag; all rows when the tag is empty.
std::vector<BuiltinInfo> builtin_catalog(const std::string& tag);
bool builtin_exists(const std::string& name);
/// Accepts the catalog names plus "counterexample".
BuiltinCase make_builtin(const std::string& name, const BuiltinOptions& opt = {});

/// Evaluators and a ladder over a case's levels for one of its inputs.
struct BuiltinLadder {
  std::vector<Evaluator> evaluators;
  Ladder ladder(const BuiltinInput& input) const;
};
BuiltinLadder build_ladder(const BuiltinCase& c, const SolverOptions& opt = {});

// ---------------------------------------------------------------- building blocks

/// Weights proportional to 2^-k on the embedded atoms, optionally normalized.
GeneralizedMeasure geometric_weights(const SpacePtr& space, bool normalize, std::string tag = {});

/// Window {1..n}: zeta = 2^-k density and a tail-mass functional nu with
/// penalty 1. With `indicator_hedge` the securities are span(1_{1}, 1) priced by zeta.
Regime tail_mass_regime(std::int64_t window, bool indicator_hedge);

/// Q_k = (1 - 1/k) delta_0 + (delta_k + delta_-k) / 2k on the integer atoms of the space.
IndexedDual symmetric_spread_family(const SpacePtr& space, std::int64_t k_max, bool with_oracle);
/// Cash regime over Q_k with penalty 0 on the window {-n..n}.
Regime symmetric_spread_regime(std::int64_t window, std::int64_t k_max, bool with_oracle = true);

/// Integers -n..n plus exponential cells up to `top` carrying the density exp(-u).
struct MixedSpace {
  SpacePtr space;
  std::vector<std::size_t> cells;  ///< atom index of each exponential cell
  std::vector<double> points;      ///< representative u of each cell
  GeneralizedMeasure exponential;  ///< the discretized exp(-u) law on the cells
  GeneralizedMeasure spread;       ///< sum 2^-k Q_k on the integer atoms, normalized
};
MixedSpace mixed_space(std::int64_t window, double top);
/// Max of the spread family and the entropic measure on the exponential cells.
Regime mixed_regime(const MixedSpace& ms, std::int64_t k_max);

/// Entropic regime with geometric base on {1..n}.
Regime entropic_geometric_regime(std::int64_t window, double beta);

/// AVaR acceptance with uniform base on {1..n} and U = 2 - 1/k priced at 1.
Regime avar_regime(std::int64_t window, double alpha);

/// Three atoms, members beta Q + (1 - beta) P with penalty (1 - beta)^2 on a beta grid,
/// Q missing the last atom and P uniform.
Regime mixture_counterexample(std::size_t grid_points = 1001);

}  // namespace mrisk
