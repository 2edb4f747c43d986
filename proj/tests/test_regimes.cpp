// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "mrisk/builtins.hpp"
#include "mrisk/regime.hpp"
#include "mrisk/solver.hpp"
#include "support.hpp"

using namespace mrisk;

TEST_CASE("regimes: the tail-mass market on the naturals is valid") {
  ValidationReport v = validate_regime(tail_mass_regime(30, true));
  CHECK(v.valid);
  CHECK(validate_regime(tail_mass_regime(30, false)).valid);
}

TEST_CASE("regimes: nonlinear acceptance with a two-dimensional market is rejected") {
  auto sp = SampleSpace::finite(3);
  GeneralizedMeasure p(sp, {0.2, 0.3, 0.5});
  SecuritySpace s({RandomVariable::constant(sp, 1.0), RandomVariable(sp, {1.0, 2.0, 3.0})}, 0);
  Regime r(Entropic{p, 1.0}, s, PricingFunctional{{1.0, 2.3}});
  try {
    (void)validate_regime(r);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedCombination);
  }
  CHECK_THROWS_AS((void)primal_risk(r, RandomVariable(sp, {0.0, 1.0, 2.0})), Error);
}

TEST_CASE("regimes: pricing must be strictly positive on positive securities") {
  auto sp = SampleSpace::finite(2);
  SecuritySpace s({RandomVariable::constant(sp, 1.0), RandomVariable(sp, {1.0, 0.0})}, 0);
  CHECK(pricing_strictly_positive(s, PricingFunctional{{1.0, 0.4}}));
  CHECK_FALSE(pricing_strictly_positive(s, PricingFunctional{{1.0, 0.0}}));
  CHECK_FALSE(pricing_strictly_positive(s, PricingFunctional{{1.0, 1.2}}));
  GeneralizedMeasure q(sp, {0.5, 0.5});
  CHECK_THROWS_AS(Regime(LinearDual{{{q, 0.0, "q"}}}, s, PricingFunctional{{1.0, 0.0}}), Error);
}

TEST_CASE("regimes: negative penalties and mismatched prices are rejected") {
  auto sp = SampleSpace::finite(2);
  GeneralizedMeasure q(sp, {0.5, 0.5});
  CHECK_THROWS_AS(AcceptanceSpec(LinearDual{{{q, -1.0, "q"}}}), Error);
  CHECK_THROWS_AS(Regime(LinearDual{{{q, 0.0, "q"}}}, SecuritySpace::cash(sp), PricingFunctional{{1.0, 2.0}}), Error);
  CHECK_THROWS_AS(AcceptanceSpec(Entropic{GeneralizedMeasure(sp, {0.5, 0.6}), 1.0}), Error);
}

TEST_CASE("regimes: intersections flatten into one linear constraint list") {
  auto sp = SampleSpace::finite(2);
  GeneralizedMeasure a(sp, {1.0, 0.0}), b(sp, {0.0, 1.0});
  Intersection both;
  both.members.emplace_back(LinearDual{{{a, 0.0, "a"}}});
  both.members.emplace_back(LinearDual{{{b, 1.0, "b"}}});
  auto flat = flatten_linear(AcceptanceSpec(both));
  REQUIRE(flat.has_value());
  CHECK(flat->family.size() == 2);
  AcceptanceSpec mixed(Intersection{{AcceptanceSpec(LinearDual{{{a, 0.0, "a"}}}), AcceptanceSpec(Entropic{GeneralizedMeasure(sp, {0.5, 0.5}), 1.0})}});
  CHECK_FALSE(flatten_linear(mixed).has_value());
  CHECK(mixed.nonlinear());
}

TEST_CASE("regimes: normalization removes rho(0)") {
  oracle::Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(2, 8));
    auto sp = SampleSpace::finite(n);
    LinearDual acc;
    for (int i = 0; i < 3; ++i) acc.family.push_back({GeneralizedMeasure(sp, rng.simplex(n)), rng.uniform(0.1, 2.0), ""});
    Regime r = cash_regime(acc);
    const RandomVariable zero = RandomVariable::constant(sp, 0.0);
    CHECK(primal_risk(r, zero).value.value() < 0.0);
    Regime nr = normalize_regime(r);
    CHECK(std::fabs(primal_risk(nr, zero).value.value()) <= 1e-9);
  }
}

TEST_CASE("regimes: normalization of a non-constant hedge shifts along U") {
  auto sp = SampleSpace::finite(3);
  GeneralizedMeasure q(sp, {0.2, 0.3, 0.5});
  RandomVariable u(sp, {1.0, 2.0, 4.0});
  const double price = 0.2 + 0.6 + 2.0;  // integral of U against q
  Regime r(LinearDual{{{q, 1.5, "q"}}}, SecuritySpace({u}, 0), PricingFunctional{{price}});
  const RandomVariable zero = RandomVariable::constant(sp, 0.0);
  CHECK(primal_risk(r, zero).value.value() == doctest::Approx(-1.5));
  CHECK(std::fabs(primal_risk(normalize_regime(r), zero).value.value()) <= 1e-9);
}
