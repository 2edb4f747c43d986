// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mrisk/family.hpp"
#include "mrisk/measure.hpp"

namespace mrisk {

/// A = {Y : integral of Y against mu_i <= alpha_i for all i}.
struct LinearDual {
  std::vector<ScenarioMember> family;
};

/// Countable dual family with a cutoff and an optional limit oracle.
struct IndexedDual {
  MemberGenerator generator;
  std::int64_t k_max = 0;
  std::shared_ptr<const AsymptoticOracle> oracle;
  std::string description;
};

/// A = {Y : E[exp(beta Y)] <= 1}.
struct Entropic {
  GeneralizedMeasure base;
  double beta = 1.0;
};

/// A = {Y : AVaR_alpha(Y) <= 0}.
struct AVaR {
  GeneralizedMeasure base;
  double alpha = 0.5;
};

struct AcceptanceSpec;

struct Intersection {
  std::vector<AcceptanceSpec> members;
};

struct AcceptanceSpec {
  std::variant<LinearDual, IndexedDual, Entropic, AVaR, Intersection> spec;

  AcceptanceSpec(LinearDual a);
  AcceptanceSpec(IndexedDual a);
  AcceptanceSpec(Entropic a);
  AcceptanceSpec(AVaR a);
  AcceptanceSpec(Intersection a);

  const char* kind_name() const;
  bool linear() const;     // LinearDual, or an intersection of those
  bool nonlinear() const;  // contains Entropic or AVaR somewhere
  SpacePtr space() const;
};

/// Intersection of LinearDual members as one LinearDual; empty otherwise.
std::optional<LinearDual> flatten_linear(const AcceptanceSpec& a);

/// Finite-dimensional security space S with a designated U >= 0.
struct SecuritySpace {
  std::vector<RandomVariable> basis;
  std::size_t positive_index = 0;

  SecuritySpace(std::vector<RandomVariable> basis, std::size_t positive_index = 0);
  /// S = R * 1.
  static SecuritySpace cash(SpacePtr space);

  std::size_t dimension() const { return basis.size(); }
  const RandomVariable& unit() const { return basis[positive_index]; }
  RandomVariable combine(const std::vector<double>& z) const;
};

struct PricingFunctional {
  std::vector<double> prices;
  double operator()(const std::vector<double>& z) const;
};

struct Regime {
  AcceptanceSpec acceptance;
  SecuritySpace securities;
  PricingFunctional pricing;
  std::string name;
  /// Declared reference probability; sensitivity is judged against its support.
  std::optional<GeneralizedMeasure> reference;

  Regime(AcceptanceSpec a, SecuritySpace s, PricingFunctional p, std::string name = {},
         std::optional<GeneralizedMeasure> reference = std::nullopt);

  const SpacePtr& space() const { return securities.basis.front().space(); }
  double unit_price() const { return pricing.prices[securities.positive_index]; }
};

/// S = R * 1, p(m) = m.
Regime cash_regime(AcceptanceSpec a, std::string name = {}, std::optional<GeneralizedMeasure> reference = std::nullopt);

/// True when no z gives sum z_j B_j >= 0, nonzero, with p(z) <= 0.
bool pricing_strictly_positive(const SecuritySpace& s, const PricingFunctional& p);

struct ValidationReport {
  bool valid = false;
  std::string check;
  std::string narrative;
};

ValidationReport validate_regime(const Regime& r);

/// Translates the acceptance set along U so that rho(0) = 0.
Regime normalize_regime(const Regime& r);

}  // namespace mrisk
