// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mrisk/measure.hpp"

namespace mrisk {

/// A dual scenario with its penalty.
struct ScenarioMember {
  GeneralizedMeasure measure;
  double penalty = 0.0;
  std::string label;
};

/// Closed-form limit of an indexed family as the index grows.
struct AsymptoticOracle {
  /// lim_k (integral of Y against mu_k minus alpha_k); empty when undecidable for Y.
  std::function<std::optional<ExtReal>(const RandomVariable&)> limit;
  /// Pointwise limit of the atom weights (the regular part of the limit functional).
  std::optional<GeneralizedMeasure> regular_limit;
};

using MemberGenerator = std::function<std::optional<ScenarioMember>(std::int64_t)>;

/// Members mu_k for k = 1..k_max, produced on demand.
struct IndexedMembers {
  MemberGenerator generator;
  std::int64_t k_max = 0;
  std::shared_ptr<const AsymptoticOracle> oracle;
  std::string label;
};

/// Result of a closed-form maximization over a continuum of scenarios.
struct AdaptiveResult {
  ExtReal value;
  std::optional<ScenarioMember> member;
};

/// Continuum of scenarios represented by its argmax map.
struct AdaptiveMembers {
  std::string label;
  std::function<AdaptiveResult(const RandomVariable&)> maximize;
  bool zero_penalty = false;  ///< every member it can return has penalty 0
};

enum class FamilySource { Raw, PricingConsistent };

struct ScenarioFamily {
  std::vector<ScenarioMember> members;
  std::vector<IndexedMembers> indexed;
  std::vector<AdaptiveMembers> adaptive;
  FamilySource source = FamilySource::Raw;

  bool empty() const { return members.empty() && indexed.empty() && adaptive.empty(); }
  /// Calls f on every explicit and generated member, with its index (0 for explicit ones).
  void for_each(const std::function<void(const ScenarioMember&, std::int64_t)>& f) const;
  void append(const ScenarioFamily& other);
  /// All members materialized (indexed families expanded up to their cutoff).
  std::vector<ScenarioMember> materialize() const;
};

}  // namespace mrisk
