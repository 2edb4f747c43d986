// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "mrisk/family.hpp"

namespace mrisk {

void ScenarioFamily::for_each(const std::function<void(const ScenarioMember&, std::int64_t)>& f) const {
  for (const auto& m : members) f(m, 0);
  for (const auto& ix : indexed)
    for (std::int64_t k = 1; k <= ix.k_max; ++k)
      if (auto m = ix.generator(k)) f(*m, k);
}

void ScenarioFamily::append(const ScenarioFamily& other) {
  members.insert(members.end(), other.members.begin(), other.members.end());
  indexed.insert(indexed.end(), other.indexed.begin(), other.indexed.end());
  adaptive.insert(adaptive.end(), other.adaptive.begin(), other.adaptive.end());
}

std::vector<ScenarioMember> ScenarioFamily::materialize() const {
  std::vector<ScenarioMember> out;
  for_each([&](const ScenarioMember& m, std::int64_t) { out.push_back(m); });
  return out;
}

}  // namespace mrisk
