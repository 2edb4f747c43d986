// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"
#include "mrisk/measure.hpp"
#include "support.hpp"

using namespace mrisk;

TEST_CASE("extended reals: arithmetic and ordering") {
  const ExtReal inf = ExtReal::pos_inf();
  CHECK((inf + ExtReal(3.0)).is_pos_inf());
  CHECK((-inf).is_neg_inf());
  CHECK((0.0 * inf) == ExtReal(0.0));
  CHECK((-2.0 * inf).is_neg_inf());
  CHECK(ExtReal::neg_inf() < ExtReal(-1e300));
  CHECK(ExtReal(1e300) < inf);
  CHECK(max(ExtReal(1.0), inf).is_pos_inf());
  CHECK(min(ExtReal(1.0), ExtReal::neg_inf()).is_neg_inf());
  try {
    (void)(inf - inf);
    FAIL("inf - inf must throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotFinite);
  }
  CHECK_THROWS_AS((void)inf.value(), Error);
  CHECK(ExtReal::from_double(-HUGE_VAL).is_neg_inf());
}

TEST_CASE("extended reals: formatting uses 17 digits and inf literals") {
  CHECK(format_number(ExtReal::pos_inf()) == "inf");
  CHECK(format_number(ExtReal::neg_inf()) == "-inf");
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("sample spaces: windows and embeddings") {
  auto n = SampleSpace::naturals(5);
  CHECK(n->size() == 5);
  CHECK(n->embedded());
  CHECK_FALSE(n->two_sided());
  CHECK(n->index_of(3) == std::optional<std::size_t>(2));
  CHECK_FALSE(n->index_of(6).has_value());
  auto z = SampleSpace::integers(3);
  CHECK(z->size() == 7);
  CHECK(z->two_sided());
  CHECK(z->side(*z->index_of(-2)) == -1);
  auto f = SampleSpace::finite(4);
  CHECK_FALSE(f->embedded());
  CHECK_THROWS_AS(SampleSpace({"a", "a"}), Error);
  CHECK_THROWS_AS(SampleSpace({"a", "b"}, {1, 1}), Error);
  CHECK_THROWS_AS(SampleSpace({"a"}, {5}, 3), Error);
}

TEST_CASE("random variables: tails survive truncation and clamping") {
  auto z = SampleSpace::integers(10);
  RandomVariable id = RandomVariable::from_key(z, [](std::int64_t k) { return double(k); }, Tail::identity());
  RandomVariable t = truncate(id, Truncation(3, 2));
  CHECK(t[*z->index_of(7)] == 2.0);
  CHECK(t[*z->index_of(-7)] == -3.0);
  CHECK(t.tail()->upper == TailEnd::at(2.0));
  CHECK(t.tail()->lower == TailEnd::at(-3.0));
  RandomVariable c = clamp_below(id, 4);
  CHECK(c.tail()->upper.kind == TailEnd::Kind::PosInf);
  CHECK(c.tail()->lower == TailEnd::at(-4.0));
  RandomVariable a = abs(id);
  CHECK(a.tail()->lower.kind == TailEnd::Kind::PosInf);
  RandomVariable k = keep_above(id, 5);
  CHECK(k[*z->index_of(4)] == 0.0);
  CHECK(k[*z->index_of(5)] == 5.0);
  CHECK(k.tail()->lower == TailEnd::at(0.0));
  CHECK(tail_approach_consistent(id));
  RandomVariable wrong = RandomVariable::from_key(z, [](std::int64_t k) { return -double(k); }, Tail::identity());
  CHECK_FALSE(tail_approach_consistent(wrong));
  CHECK_THROWS_AS(RandomVariable(SampleSpace::finite(2), {1.0, 2.0}, Tail::limit(0.0)), Error);
  CHECK_THROWS_AS(RandomVariable(SampleSpace::finite(2), {1.0}), Error);
}

TEST_CASE("generalized measures: integration against atoms and tails") {
  auto n = SampleSpace::naturals(30);
  std::vector<double> w(30);
  for (int k = 1; k <= 30; ++k) w[k - 1] = std::ldexp(1.0, -k);
  GeneralizedMeasure zeta(n, w);
  RandomVariable first = RandomVariable::indicator(n, {0}).with_tail(Tail::limit(0.0));
  // direct summation: only the atom 1 contributes 2^-1
  CHECK(integrate(zeta, first).value() == doctest::Approx(0.5).epsilon(1e-15));

  GeneralizedMeasure nu = GeneralizedMeasure::tail_only(n, 1.0);
  RandomVariable x = RandomVariable::from_key(n, [](std::int64_t k) { return 1.0 / double(k); }, Tail::limit(0.0));
  CHECK(integrate(nu, x).value() == 0.0);
  CHECK(integrate(nu, x.with_tail(Tail::limit(3.0))).value() == 3.0);
  CHECK_THROWS_AS((void)integrate(nu, RandomVariable(n, std::vector<double>(30, 1.0))), Error);
  RandomVariable up = RandomVariable::from_key(n, [](std::int64_t k) { return double(k); }, Tail{TailEnd::pos_inf(1.0), {}});
  CHECK(integrate(nu, up).is_pos_inf());
}

TEST_CASE("generalized measures: validation, mixing and relations") {
  auto f = SampleSpace::finite(3);
  CHECK_THROWS_AS(GeneralizedMeasure(f, {1.0, -0.1, 0.0}), Error);
  CHECK_THROWS_AS(GeneralizedMeasure(f, {1.0, 0.0}), Error);
  GeneralizedMeasure a(f, {0.5, 0.5, 0.0});
  GeneralizedMeasure b(f, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  try {
    (void)mix({-1.0, 1.0}, {a, b});
    FAIL("negative coefficient accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeCoefficient);
  }
  GeneralizedMeasure m = mix({0.5, 0.5}, {a, b});
  CHECK(m.weight(2) == doctest::Approx(1.0 / 6));
  Relations r = measure_relations(a, b);
  CHECK(r.a_ll_b);
  CHECK_FALSE(r.b_ll_a);
  CHECK_FALSE(r.equivalent);
  try {
    (void)integrate(a, RandomVariable::constant(SampleSpace::finite(4), 1.0));
    FAIL("space mismatch accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SpaceMismatch);
  }
}

TEST_CASE("generalized measures: random integrals match plain dot products") {
  oracle::Rng rng(11);
  auto f = SampleSpace::finite(8);
  for (int trial = 0; trial < 100; ++trial) {
    auto w = rng.vec(8, 0.0, 2.0);
    auto x = rng.vec(8, -5.0, 5.0);
    CHECK(integrate(GeneralizedMeasure(f, w), RandomVariable(f, x)).value() ==
          doctest::Approx(oracle::dot(w, x)).epsilon(1e-13));
  }
}
