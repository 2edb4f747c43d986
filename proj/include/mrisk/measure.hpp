// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mrisk/error.hpp"
#include "mrisk/ext_real.hpp"

namespace mrisk {

/// Finite list of atoms, optionally embedded into the integers.
///
/// An embedded space is read as the window |k| <= N of N or Z. Atoms without
/// an embedding value are interior atoms that play no role in tail behaviour.
class SampleSpace {
 public:
  SampleSpace(std::vector<std::string> labels,
              std::vector<std::optional<std::int64_t>> embedding = {},
              std::optional<std::int64_t> truncation_index = std::nullopt);

  /// Plain finite space with labels "0".."n-1".
  static std::shared_ptr<const SampleSpace> finite(std::size_t n);
  /// Window {1..N} of the naturals.
  static std::shared_ptr<const SampleSpace> naturals(std::int64_t n);
  /// Window {-N..N} of the integers.
  static std::shared_ptr<const SampleSpace> integers(std::int64_t n);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  std::optional<std::int64_t> embedding(std::size_t i) const { return embedding_.at(i); }
  std::optional<std::int64_t> truncation_index() const { return truncation_; }

  bool embedded() const { return embedded_; }
  bool two_sided() const { return two_sided_; }
  /// +1 for positively embedded atoms, -1 for negatively embedded, 0 otherwise.
  int side(std::size_t i) const;

  std::optional<std::size_t> index_of(std::int64_t k) const;
  std::optional<std::size_t> index_of_label(const std::string& label) const;

  bool same_as(const SampleSpace& other) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::optional<std::int64_t>> embedding_;
  std::optional<std::int64_t> truncation_;
  bool embedded_ = false;
  bool two_sided_ = false;
  std::unordered_map<std::int64_t, std::size_t> by_key_;
  std::unordered_map<std::string, std::size_t> by_label_;
};

using SpacePtr = std::shared_ptr<const SampleSpace>;

/// Behaviour of a random variable beyond one end of the window.
struct TailEnd {
  enum class Kind { Finite, PosInf, NegInf };
  Kind kind = Kind::Finite;
  double limit = 0.0;
  /// For divergent ends: lim X(k)/|k|, when known.
  std::optional<double> rate;

  static TailEnd at(double l) { return {Kind::Finite, l, std::nullopt}; }
  static TailEnd pos_inf(std::optional<double> rate = std::nullopt) { return {Kind::PosInf, 0.0, rate}; }
  static TailEnd neg_inf(std::optional<double> rate = std::nullopt) { return {Kind::NegInf, 0.0, rate}; }

  bool finite() const { return kind == Kind::Finite; }
  /// Value seen by a tail mass: the limit, or a signed infinity.
  ExtReal action() const;
  /// lim X(k)/|k|: zero for finite ends, the rate otherwise.
  std::optional<double> growth() const;

  friend bool operator==(const TailEnd&, const TailEnd&) = default;
};

/// Declared limits at both ends. One-sided spaces only use `upper`.
struct Tail {
  TailEnd upper;
  TailEnd lower;

  static Tail limit(double l) { return {TailEnd::at(l), TailEnd::at(l)}; }
  static Tail limit2(double up, double lo) { return {TailEnd::at(up), TailEnd::at(lo)}; }
  /// The identity on the embedding: +inf above, -inf below, unit rates.
  static Tail identity() { return {TailEnd::pos_inf(1.0), TailEnd::neg_inf(-1.0)}; }

  friend bool operator==(const Tail&, const Tail&) = default;
};

/// Values per atom plus an optional tail declaration.
class RandomVariable {
 public:
  RandomVariable(SpacePtr space, std::vector<double> values, std::optional<Tail> tail = std::nullopt);

  static RandomVariable constant(SpacePtr space, double c);
  static RandomVariable indicator(SpacePtr space, const std::vector<std::size_t>& atoms);
  /// Values from the embedding key (0 for interior atoms).
  static RandomVariable from_key(SpacePtr space, const std::function<double(std::int64_t)>& f,
                                 std::optional<Tail> tail);

  const SpacePtr& space() const { return space_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  const std::optional<Tail>& tail() const { return tail_; }

  RandomVariable with_tail(std::optional<Tail> tail) const;
  double sup_abs_window() const;
  bool bounded() const;

  friend bool operator==(const RandomVariable& a, const RandomVariable& b);

 private:
  SpacePtr space_;
  std::vector<double> values_;
  std::optional<Tail> tail_;
};

/// Clamp (-n) v X ^ m.
struct Truncation {
  double lower = 0.0;
  double upper = 0.0;
  Truncation(double n, double m);
};

RandomVariable truncate(const RandomVariable& x, const Truncation& t);
RandomVariable clamp_below(const RandomVariable& x, double n);
RandomVariable clamp_above(const RandomVariable& x, double m);
RandomVariable abs(const RandomVariable& x);
RandomVariable positive_part(const RandomVariable& x);
RandomVariable negative_part(const RandomVariable& x);
RandomVariable scale(double c, const RandomVariable& x);
RandomVariable add(const RandomVariable& x, const RandomVariable& y);
RandomVariable subtract(const RandomVariable& x, const RandomVariable& y);
/// x * 1{x >= t}, or x * 1{x > t} when strict.
RandomVariable keep_above(const RandomVariable& x, double t, bool strict = false);
/// x * 1{y >= t}.
RandomVariable restrict_to(const RandomVariable& x, const RandomVariable& y, double t);

/// Checks monotone approach to the declared tails on the last `depth`
/// embedded atoms of each side.
bool tail_approach_consistent(const RandomVariable& x, std::size_t depth = 4);

/// Nonnegative finitely additive set function: atom weights plus tail mass
/// acting on declared limits. Stored sparsely.
class GeneralizedMeasure {
 public:
  using Entry = std::pair<std::size_t, double>;

  GeneralizedMeasure(SpacePtr space, const std::vector<double>& weights, double tail_upper = 0.0,
                     double tail_lower = 0.0, std::string tag = {});
  static GeneralizedMeasure sparse(SpacePtr space, std::vector<Entry> entries, double tail_upper = 0.0,
                                   double tail_lower = 0.0, std::string tag = {});
  static GeneralizedMeasure zero(SpacePtr space, std::string tag = {});
  static GeneralizedMeasure dirac(SpacePtr space, std::size_t atom, std::string tag = {});
  /// Mass sitting at the end of the window only: a limit functional.
  static GeneralizedMeasure tail_only(SpacePtr space, double upper, double lower = 0.0, std::string tag = {});

  const SpacePtr& space() const { return space_; }
  const std::vector<Entry>& entries() const { return entries_; }
  double weight(std::size_t atom) const;
  std::vector<double> dense() const;
  double tail_upper() const { return tail_upper_; }
  double tail_lower() const { return tail_lower_; }
  bool has_tail_mass() const { return tail_upper_ > 0.0 || tail_lower_ > 0.0; }
  double atom_mass() const;
  double total_mass() const { return atom_mass() + tail_upper_ + tail_lower_; }
  const std::string& tag() const { return tag_; }

  GeneralizedMeasure scaled(double c) const;
  GeneralizedMeasure retagged(std::string tag) const;
  /// Same atom weights, tail mass dropped.
  GeneralizedMeasure regular_part() const;

 private:
  GeneralizedMeasure() = default;
  void check() const;

  SpacePtr space_;
  std::vector<Entry> entries_;
  double tail_upper_ = 0.0;
  double tail_lower_ = 0.0;
  std::string tag_;
};

void require_same_space(const SpacePtr& a, const SpacePtr& b);

/// Sum of weight * value plus tail masses acting on the declared limits.
ExtReal integrate(const GeneralizedMeasure& mu, const RandomVariable& x);

struct Relations {
  bool a_ll_b = false;
  bool b_ll_a = false;
  bool equivalent = false;
};

Relations measure_relations(const GeneralizedMeasure& a, const GeneralizedMeasure& b);

GeneralizedMeasure mix(const std::vector<double>& coeffs, const std::vector<GeneralizedMeasure>& measures,
                       std::string tag = {});

}  // namespace mrisk
