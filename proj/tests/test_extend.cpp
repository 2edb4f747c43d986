// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "mrisk/builtins.hpp"
#include "mrisk/extend.hpp"
#include "support.hpp"

using namespace mrisk;

namespace {

RandomVariable identity_on(const SpacePtr& sp) {
  return RandomVariable::from_key(sp, [](std::int64_t k) { return double(k); }, Tail::identity());
}

}  // namespace

TEST_CASE("extensions: symmetric spread identity has a gap of one half") {
  Evaluator ev(symmetric_spread_regime(4096, 4096, true));
  RandomVariable id = identity_on(ev.regime().space());
  // oracle: sup_k E_{Q_k}[(-n) v X] = sup_k (k - min(k, n)) / 2k -> 1/2 for every n
  double sup_n4 = 0.0;
  for (std::int64_t k = 1; k <= 1 << 20; k *= 2) sup_n4 = std::max(sup_n4, (k - std::min<double>(k, 4)) / (2.0 * k));
  CHECK(sup_n4 == doctest::Approx(0.5).epsilon(1e-5));
  ExtensionReport rep = regularity_check(ev, id);
  CHECK(rep.rho_tilde == ExtReal(0.0));
  CHECK(rep.xi.value.value() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rep.eta.value.value.value() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rep.gap.value() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rep.chain_holds);
  CHECK_FALSE(rep.tail_condition);
  CHECK(rep.verdict == RegularityVerdict::ConditionNotDetected);
  CHECK(extension_value(Extension::Eta, ev, id).value() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(extension_value(Extension::RhoTilde, ev, id) == ExtReal(0.0));
}

TEST_CASE("extensions: spread values along the truncation grid follow the case split") {
  Evaluator ev(symmetric_spread_regime(1024, 1024, false));
  RandomVariable id = identity_on(ev.regime().space());
  for (double m : {2.0, 8.0, 32.0})
    for (double n : {4.0, 64.0, 256.0}) {
      if (n <= m) continue;
      double best = -HUGE_VAL;
      for (std::int64_t k = 1; k <= 1024; ++k) best = std::max(best, oracle::spread_case_split(k, m, n));
      CHECK(ev.value(truncate(id, Truncation(n, m))).value() == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("extensions: entropic regime with linear growth matches the series") {
  BuiltinCase c = make_builtin("example6.4");
  Evaluator ev(c.regime());
  const auto& ent = std::get<Entropic>(ev.regime().acceptance.spec);
  for (const auto& in : c.inputs) {
    const RandomVariable& x = in.finest();
    const double expected = oracle::entropic(ent.base.dense(), ent.beta, x.values());
    ExtensionReport rep = regularity_check(ev, x);
    CHECK(rep.rho_tilde.value() == doctest::Approx(expected).epsilon(1e-9));
    CHECK(rep.xi.value.value() == doctest::Approx(expected).epsilon(1e-6));
    CHECK(rep.eta.value.value.value() == doctest::Approx(expected).epsilon(1e-6));
    CHECK(rep.chain_holds);
    CHECK(rep.verdict == RegularityVerdict::Regular);
  }
}

TEST_CASE("extensions: chain and equality on random bounded positions") {
  oracle::Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(2, 8));
    auto sp = SampleSpace::finite(n);
    GeneralizedMeasure p(sp, rng.simplex(n));
    Regime r = trial % 3 == 0   ? cash_regime(Entropic{p, rng.uniform(0.3, 2.0)})
               : trial % 3 == 1 ? cash_regime(AVaR{p, rng.uniform(0.05, 0.9)})
                                : cash_regime(LinearDual{{{p, rng.uniform(0.0, 1.0), "p"},
                                                          {GeneralizedMeasure(sp, rng.simplex(n)), 0.0, "q"}}});
    Evaluator ev(r);
    RandomVariable x(sp, rng.vec(n, -10.0, 10.0));
    ExtensionReport rep = regularity_check(ev, x);
    CHECK(rep.chain_holds);
    CHECK(rep.xi.value.value() == doctest::Approx(rep.rho_tilde.value()).epsilon(1e-9));
    CHECK(rep.eta.value.value.value() == doctest::Approx(rep.rho_tilde.value()).epsilon(1e-9));
    CHECK(rep.verdict == RegularityVerdict::Regular);
  }
}

TEST_CASE("extensions: tail continuity") {
  BuiltinCase c = make_builtin("example6.4");
  Evaluator ent(c.regime());
  const RandomVariable& x = c.inputs.front().finest();
  const RandomVariable& y = c.inputs[1].finest();
  TailContinuityReport good = tail_continuity_test(Extension::RhoTilde, ent, x, y, {4, 16, 64, 128, 256});
  CHECK(good.converges);

  Evaluator spread(symmetric_spread_regime(1024, 1024, true));
  auto sp = spread.regime().space();
  RandomVariable zero = RandomVariable::constant(sp, 0.0).with_tail(Tail::limit(0.0));
  RandomVariable up = positive_part(identity_on(sp));
  // eta(Y 1_{Y >= r}) = 1/2 for every r while eta(0) = 0
  TailContinuityReport bad = tail_continuity_test(Extension::Eta, spread, zero, up, {4, 16, 64, 256});
  CHECK_FALSE(bad.converges);
  for (const auto& [r, v] : bad.sequence) CHECK(v.value() == doctest::Approx(0.5).epsilon(1e-9));
}
