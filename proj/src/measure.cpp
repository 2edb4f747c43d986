// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "mrisk/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mrisk {

// ---------------------------------------------------------------- SampleSpace

SampleSpace::SampleSpace(std::vector<std::string> labels, std::vector<std::optional<std::int64_t>> embedding,
                         std::optional<std::int64_t> truncation_index)
    : labels_(std::move(labels)), embedding_(std::move(embedding)), truncation_(truncation_index) {
  if (embedding_.empty()) embedding_.assign(labels_.size(), std::nullopt);
  require(embedding_.size() == labels_.size(), ErrorCode::InvalidArgument, "embedding length differs from atom count");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    require(by_label_.emplace(labels_[i], i).second, ErrorCode::InvalidArgument, "duplicate atom label " + labels_[i]);
    if (!embedding_[i]) continue;
    const std::int64_t k = *embedding_[i];
    require(by_key_.emplace(k, i).second, ErrorCode::InvalidArgument, "embedding is not injective");
    embedded_ = true;
    if (k < 0) two_sided_ = true;
  }
  if (truncation_) {
    require(*truncation_ > 0, ErrorCode::InvalidArgument, "truncation index must be positive");
    require(embedded_, ErrorCode::InvalidArgument, "truncation index without embedding");
    for (const auto& e : embedding_)
      if (e) require(std::llabs(*e) <= *truncation_, ErrorCode::InvalidArgument, "embedding outside window");
  }
}

std::shared_ptr<const SampleSpace> SampleSpace::finite(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  return std::make_shared<const SampleSpace>(std::move(labels));
}

std::shared_ptr<const SampleSpace> SampleSpace::naturals(std::int64_t n) {
  require(n > 0, ErrorCode::InvalidArgument, "window must be positive");
  std::vector<std::string> labels;
  std::vector<std::optional<std::int64_t>> emb;
  for (std::int64_t k = 1; k <= n; ++k) {
    labels.push_back(std::to_string(k));
    emb.emplace_back(k);
  }
  return std::make_shared<const SampleSpace>(std::move(labels), std::move(emb), n);
}

std::shared_ptr<const SampleSpace> SampleSpace::integers(std::int64_t n) {
  require(n > 0, ErrorCode::InvalidArgument, "window must be positive");
  std::vector<std::string> labels;
  std::vector<std::optional<std::int64_t>> emb;
  for (std::int64_t k = -n; k <= n; ++k) {
    labels.push_back(std::to_string(k));
    emb.emplace_back(k);
  }
  return std::make_shared<const SampleSpace>(std::move(labels), std::move(emb), n);
}

int SampleSpace::side(std::size_t i) const {
  const auto& e = embedding_[i];
  if (!e || *e == 0) return 0;
  return *e > 0 ? 1 : -1;
}

std::optional<std::size_t> SampleSpace::index_of(std::int64_t k) const {
  auto it = by_key_.find(k);
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> SampleSpace::index_of_label(const std::string& label) const {
  auto it = by_label_.find(label);
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

bool SampleSpace::same_as(const SampleSpace& other) const {
  if (this == &other) return true;
  return labels_ == other.labels_ && embedding_ == other.embedding_ && truncation_ == other.truncation_;
}

void require_same_space(const SpacePtr& a, const SpacePtr& b) {
  require(a && b && a->same_as(*b), ErrorCode::SpaceMismatch, "operands live on different sample spaces");
}

// ---------------------------------------------------------------- tails

ExtReal TailEnd::action() const {
  switch (kind) {
    case Kind::PosInf: return ExtReal::pos_inf();
    case Kind::NegInf: return ExtReal::neg_inf();
    default: return limit;
  }
}

std::optional<double> TailEnd::growth() const {
  if (finite()) return 0.0;
  return rate;
}

namespace {

std::optional<Tail> map_tail(const std::optional<Tail>& t, const std::function<std::optional<TailEnd>(const TailEnd&)>& f) {
  if (!t) return std::nullopt;
  auto up = f(t->upper);
  auto lo = f(t->lower);
  if (!up || !lo) return std::nullopt;
  return Tail{*up, *lo};
}

TailEnd scale_end(double c, const TailEnd& e) {
  if (e.finite()) return TailEnd::at(c * e.limit);
  if (c == 0.0) return TailEnd::at(0.0);
  std::optional<double> rate;
  if (e.rate) rate = c * *e.rate;
  const bool up = (e.kind == TailEnd::Kind::PosInf) == (c > 0);
  return up ? TailEnd::pos_inf(rate) : TailEnd::neg_inf(rate);
}

std::optional<TailEnd> add_end(const TailEnd& a, const TailEnd& b) {
  if (a.finite() && b.finite()) return TailEnd::at(a.limit + b.limit);
  if (a.finite()) return b;
  if (b.finite()) return a;
  std::optional<double> rate;
  if (a.rate && b.rate) rate = *a.rate + *b.rate;
  if (a.kind == b.kind) return a.kind == TailEnd::Kind::PosInf ? TailEnd::pos_inf(rate) : TailEnd::neg_inf(rate);
  // Opposite divergences resolve only through known, non-cancelling rates.
  if (!rate || *rate == 0.0) return std::nullopt;
  return *rate > 0 ? TailEnd::pos_inf(rate) : TailEnd::neg_inf(rate);
}

RandomVariable pointwise(const RandomVariable& x, const std::function<double(double)>& f,
                         const std::function<std::optional<TailEnd>(const TailEnd&)>& g) {
  std::vector<double> v(x.values().size());
  std::transform(x.values().begin(), x.values().end(), v.begin(), f);
  return RandomVariable(x.space(), std::move(v), map_tail(x.tail(), g));
}

}  // namespace

// ---------------------------------------------------------------- RandomVariable

RandomVariable::RandomVariable(SpacePtr space, std::vector<double> values, std::optional<Tail> tail)
    : space_(std::move(space)), values_(std::move(values)), tail_(std::move(tail)) {
  require(space_ != nullptr, ErrorCode::InvalidArgument, "random variable without space");
  require(values_.size() == space_->size(), ErrorCode::InvalidArgument, "values length differs from atom count");
  for (double v : values_) require(std::isfinite(v), ErrorCode::InvalidArgument, "non-finite atom value");
  if (tail_) {
    require(space_->embedded(), ErrorCode::InvalidArgument, "tail declared on a space without embedding");
    for (const TailEnd* e : {&tail_->upper, &tail_->lower})
      require(!e->finite() || std::isfinite(e->limit), ErrorCode::InvalidArgument, "non-finite tail limit");
  }
}

RandomVariable RandomVariable::constant(SpacePtr space, double c) {
  const bool emb = space->embedded();
  std::vector<double> v(space->size(), c);
  return RandomVariable(std::move(space), std::move(v), emb ? std::optional<Tail>(Tail::limit(c)) : std::nullopt);
}

RandomVariable RandomVariable::indicator(SpacePtr space, const std::vector<std::size_t>& atoms) {
  std::vector<double> v(space->size(), 0.0);
  for (std::size_t a : atoms) v.at(a) = 1.0;
  const bool emb = space->embedded();
  return RandomVariable(std::move(space), std::move(v), emb ? std::optional<Tail>(Tail::limit(0.0)) : std::nullopt);
}

RandomVariable RandomVariable::from_key(SpacePtr space, const std::function<double(std::int64_t)>& f,
                                        std::optional<Tail> tail) {
  std::vector<double> v(space->size(), 0.0);
  for (std::size_t i = 0; i < space->size(); ++i)
    if (auto k = space->embedding(i)) v[i] = f(*k);
  return RandomVariable(std::move(space), std::move(v), std::move(tail));
}

RandomVariable RandomVariable::with_tail(std::optional<Tail> tail) const {
  return RandomVariable(space_, values_, std::move(tail));
}

double RandomVariable::sup_abs_window() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::fabs(v));
  if (tail_) {
    if (tail_->upper.finite()) s = std::max(s, std::fabs(tail_->upper.limit));
    if (tail_->lower.finite() && space_->two_sided()) s = std::max(s, std::fabs(tail_->lower.limit));
  }
  return s;
}

bool RandomVariable::bounded() const {
  if (!tail_) return true;
  if (!tail_->upper.finite()) return false;
  return !space_->two_sided() || tail_->lower.finite();
}

bool operator==(const RandomVariable& a, const RandomVariable& b) {
  return a.space_->same_as(*b.space_) && a.values_ == b.values_ && a.tail_ == b.tail_;
}

Truncation::Truncation(double n, double m) : lower(n), upper(m) {
  require(n >= 0.0 && m >= 0.0, ErrorCode::InvalidArgument, "truncation levels must be nonnegative");
}

RandomVariable clamp_below(const RandomVariable& x, double n) {
  return pointwise(
      x, [n](double v) { return std::max(v, -n); },
      [n](const TailEnd& e) -> std::optional<TailEnd> {
        if (e.finite()) return TailEnd::at(std::max(e.limit, -n));
        if (e.kind == TailEnd::Kind::NegInf) return TailEnd::at(-n);
        return e;
      });
}

RandomVariable clamp_above(const RandomVariable& x, double m) {
  return pointwise(
      x, [m](double v) { return std::min(v, m); },
      [m](const TailEnd& e) -> std::optional<TailEnd> {
        if (e.finite()) return TailEnd::at(std::min(e.limit, m));
        if (e.kind == TailEnd::Kind::PosInf) return TailEnd::at(m);
        return e;
      });
}

RandomVariable truncate(const RandomVariable& x, const Truncation& t) {
  return clamp_above(clamp_below(x, t.lower), t.upper);
}

RandomVariable abs(const RandomVariable& x) {
  return pointwise(
      x, [](double v) { return std::fabs(v); },
      [](const TailEnd& e) -> std::optional<TailEnd> {
        if (e.finite()) return TailEnd::at(std::fabs(e.limit));
        std::optional<double> r;
        if (e.rate) r = std::fabs(*e.rate);
        return TailEnd::pos_inf(r);
      });
}

RandomVariable positive_part(const RandomVariable& x) { return clamp_below(x, 0.0); }

RandomVariable negative_part(const RandomVariable& x) { return clamp_below(scale(-1.0, x), 0.0); }

RandomVariable scale(double c, const RandomVariable& x) {
  return pointwise(
      x, [c](double v) { return c * v; }, [c](const TailEnd& e) -> std::optional<TailEnd> { return scale_end(c, e); });
}

RandomVariable add(const RandomVariable& x, const RandomVariable& y) {
  require_same_space(x.space(), y.space());
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = x[i] + y[i];
  std::optional<Tail> tail;
  if (x.tail() && y.tail()) {
    auto up = add_end(x.tail()->upper, y.tail()->upper);
    auto lo = add_end(x.tail()->lower, y.tail()->lower);
    if (up && lo) tail = Tail{*up, *lo};
  }
  return RandomVariable(x.space(), std::move(v), tail);
}

RandomVariable subtract(const RandomVariable& x, const RandomVariable& y) { return add(x, scale(-1.0, y)); }

RandomVariable keep_above(const RandomVariable& x, double t, bool strict) {
  auto keep = [t, strict](double v) { return strict ? v > t : v >= t; };
  return pointwise(
      x, [keep](double v) { return keep(v) ? v : 0.0; },
      [keep](const TailEnd& e) -> std::optional<TailEnd> {
        if (e.finite()) return TailEnd::at(keep(e.limit) ? e.limit : 0.0);
        if (e.kind == TailEnd::Kind::NegInf) return TailEnd::at(0.0);
        return e;
      });
}

RandomVariable restrict_to(const RandomVariable& x, const RandomVariable& y, double t) {
  require_same_space(x.space(), y.space());
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = y[i] >= t ? x[i] : 0.0;
  std::optional<Tail> tail;
  if (x.tail() && y.tail()) {
    auto pick = [t](const TailEnd& xe, const TailEnd& ye) {
      const bool kept = ye.kind == TailEnd::Kind::PosInf || (ye.finite() && ye.limit >= t);
      return kept ? xe : TailEnd::at(0.0);
    };
    tail = Tail{pick(x.tail()->upper, y.tail()->upper), pick(x.tail()->lower, y.tail()->lower)};
  }
  return RandomVariable(x.space(), std::move(v), tail);
}

bool tail_approach_consistent(const RandomVariable& x, std::size_t depth) {
  if (!x.tail()) return true;
  const auto& sp = *x.space();
  auto trn = sp.truncation_index();
  if (!trn) return true;
  auto check_side = [&](int sign, const TailEnd& e) {
    std::vector<double> seq;
    for (std::int64_t k = *trn - static_cast<std::int64_t>(depth) + 1; k <= *trn; ++k) {
      if (k <= 0) continue;
      if (auto i = sp.index_of(sign * k)) seq.push_back(x[*i]);
    }
    for (std::size_t j = 1; j < seq.size(); ++j) {
      if (e.finite()) {
        if (std::fabs(seq[j] - e.limit) > std::fabs(seq[j - 1] - e.limit) + 1e-12) return false;
      } else if (e.kind == TailEnd::Kind::PosInf) {
        if (seq[j] < seq[j - 1]) return false;
      } else if (seq[j] > seq[j - 1]) {
        return false;
      }
    }
    return true;
  };
  bool ok = check_side(1, x.tail()->upper);
  if (sp.two_sided()) ok = ok && check_side(-1, x.tail()->lower);
  return ok;
}

// ---------------------------------------------------------------- GeneralizedMeasure

GeneralizedMeasure::GeneralizedMeasure(SpacePtr space, const std::vector<double>& weights, double tail_upper,
                                       double tail_lower, std::string tag)
    : space_(std::move(space)), tail_upper_(tail_upper), tail_lower_(tail_lower), tag_(std::move(tag)) {
  require(space_ != nullptr, ErrorCode::InvalidArgument, "measure without space");
  require(weights.size() == space_->size(), ErrorCode::InvalidArgument, "weights length differs from atom count");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    require(weights[i] >= 0.0 && std::isfinite(weights[i]), ErrorCode::InvalidArgument, "weights must be finite and >= 0");
    if (weights[i] > 0.0) entries_.emplace_back(i, weights[i]);
  }
  check();
}

GeneralizedMeasure GeneralizedMeasure::sparse(SpacePtr space, std::vector<Entry> entries, double tail_upper,
                                              double tail_lower, std::string tag) {
  GeneralizedMeasure m;
  m.space_ = std::move(space);
  require(m.space_ != nullptr, ErrorCode::InvalidArgument, "measure without space");
  std::sort(entries.begin(), entries.end());
  for (const auto& [i, w] : entries) {
    require(i < m.space_->size(), ErrorCode::InvalidArgument, "atom index out of range");
    require(w >= 0.0 && std::isfinite(w), ErrorCode::InvalidArgument, "weights must be finite and >= 0");
    if (w == 0.0) continue;
    if (!m.entries_.empty() && m.entries_.back().first == i)
      m.entries_.back().second += w;
    else
      m.entries_.emplace_back(i, w);
  }
  m.tail_upper_ = tail_upper;
  m.tail_lower_ = tail_lower;
  m.tag_ = std::move(tag);
  m.check();
  return m;
}

GeneralizedMeasure GeneralizedMeasure::zero(SpacePtr space, std::string tag) {
  return sparse(std::move(space), {}, 0.0, 0.0, std::move(tag));
}

GeneralizedMeasure GeneralizedMeasure::dirac(SpacePtr space, std::size_t atom, std::string tag) {
  return sparse(std::move(space), {{atom, 1.0}}, 0.0, 0.0, std::move(tag));
}

GeneralizedMeasure GeneralizedMeasure::tail_only(SpacePtr space, double upper, double lower, std::string tag) {
  return sparse(std::move(space), {}, upper, lower, std::move(tag));
}

void GeneralizedMeasure::check() const {
  require(tail_upper_ >= 0.0 && tail_lower_ >= 0.0 && std::isfinite(tail_upper_) && std::isfinite(tail_lower_),
          ErrorCode::InvalidArgument, "tail mass must be finite and >= 0");
  if (has_tail_mass()) require(space_->embedded(), ErrorCode::InvalidArgument, "tail mass on a space without embedding");
  if (tail_lower_ > 0.0)
    require(space_->two_sided(), ErrorCode::InvalidArgument, "lower tail mass on a one-sided space");
}

double GeneralizedMeasure::weight(std::size_t atom) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{atom, 0.0},
                             [](const Entry& a, const Entry& b) { return a.first < b.first; });
  return (it != entries_.end() && it->first == atom) ? it->second : 0.0;
}

std::vector<double> GeneralizedMeasure::dense() const {
  std::vector<double> w(space_->size(), 0.0);
  for (const auto& [i, v] : entries_) w[i] = v;
  return w;
}

double GeneralizedMeasure::atom_mass() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.second;
  return s;
}

GeneralizedMeasure GeneralizedMeasure::scaled(double c) const {
  require(c >= 0.0, ErrorCode::NegativeCoefficient, "negative scaling of a measure");
  GeneralizedMeasure m = *this;
  if (c == 0.0) {
    m.entries_.clear();
    m.tail_upper_ = m.tail_lower_ = 0.0;
    return m;
  }
  for (auto& e : m.entries_) e.second *= c;
  m.tail_upper_ *= c;
  m.tail_lower_ *= c;
  return m;
}

GeneralizedMeasure GeneralizedMeasure::retagged(std::string tag) const {
  GeneralizedMeasure m = *this;
  m.tag_ = std::move(tag);
  return m;
}

GeneralizedMeasure GeneralizedMeasure::regular_part() const {
  GeneralizedMeasure m = *this;
  m.tail_upper_ = m.tail_lower_ = 0.0;
  return m;
}

ExtReal integrate(const GeneralizedMeasure& mu, const RandomVariable& x) {
  require_same_space(mu.space(), x.space());
  double s = 0.0;
  for (const auto& [i, w] : mu.entries()) s += w * x[i];
  if (!mu.has_tail_mass()) return s;
  require(x.tail().has_value(), ErrorCode::TailUndefined, "tail mass acting on a variable without tail declaration");
  ExtReal up = mu.tail_upper() * x.tail()->upper.action();
  ExtReal lo = mu.tail_lower() * x.tail()->lower.action();
  if (!up.finite() && !lo.finite() && up.kind() != lo.kind())
    fail(ErrorCode::TailUndefined, "opposite divergent tails under positive tail mass");
  return ExtReal(s) + up + lo;
}

Relations measure_relations(const GeneralizedMeasure& a, const GeneralizedMeasure& b) {
  require_same_space(a.space(), b.space());
  auto covered = [](const GeneralizedMeasure& x, const GeneralizedMeasure& y) {
    for (const auto& [i, w] : x.entries())
      if (y.weight(i) <= 0.0) return false;
    if (x.tail_upper() > 0.0 && y.tail_upper() <= 0.0) return false;
    if (x.tail_lower() > 0.0 && y.tail_lower() <= 0.0) return false;
    return true;
  };
  Relations r;
  r.a_ll_b = covered(a, b);
  r.b_ll_a = covered(b, a);
  r.equivalent = r.a_ll_b && r.b_ll_a;
  return r;
}

GeneralizedMeasure mix(const std::vector<double>& coeffs, const std::vector<GeneralizedMeasure>& measures,
                       std::string tag) {
  require(coeffs.size() == measures.size(), ErrorCode::InvalidArgument, "coefficient count differs from measure count");
  require(!measures.empty(), ErrorCode::InvalidArgument, "mix of an empty list");
  const SpacePtr& sp = measures.front().space();
  std::vector<double> w(sp->size(), 0.0);
  double up = 0.0, lo = 0.0;
  for (std::size_t l = 0; l < measures.size(); ++l) {
    require(coeffs[l] >= 0.0, ErrorCode::NegativeCoefficient, "mix coefficient must be >= 0");
    require_same_space(sp, measures[l].space());
    if (coeffs[l] == 0.0) continue;
    for (const auto& [i, v] : measures[l].entries()) w[i] += coeffs[l] * v;
    up += coeffs[l] * measures[l].tail_upper();
    lo += coeffs[l] * measures[l].tail_lower();
  }
  return GeneralizedMeasure(sp, w, up, lo, std::move(tag));
}

}  // namespace mrisk
