// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "mrisk/builtins.hpp"

#include <algorithm>
#include <cmath>

#include "mrisk/solver.hpp"

namespace mrisk {

namespace {

constexpr std::int64_t kSpreadWindow = 4096;
constexpr std::int64_t kMixedWindow = 2048;
constexpr std::int64_t kLinearWindow = 30;
constexpr std::int64_t kEntropicWindow = 200;
constexpr std::int64_t kAvarWindow = 10;
constexpr double kAvarLevel = 0.05;
constexpr double kExponentialRate = 2.0;

const std::vector<BuiltinInfo>& catalog() {
  static const std::vector<BuiltinInfo> rows = {
      {"example6.1", "tail-mass scenario removed by a two-security market on the naturals",
       "E_p intersected with B(A) is {zeta}, so rho(X) = integral of X against zeta",
       {"linear", "singular", "continuity"}},
      {"example6.2", "symmetric spread family Q_k on the integers with penalty 0",
       "rho_tilde(X) = 0 < 1/2 <= eta(X) for the identity",
       {"coherent", "indexed", "gap"}},
      {"example6.3", "maximum of the spread family and an entropic measure on exponential cells",
       "identity in H minus M; exponential loss in C",
       {"intersection", "classification", "refinement"}},
      {"example6.4", "entropic risk with geometric base on the naturals",
       "rho_tilde(X) = (1/beta) log E[exp(beta X)], tail continuous",
       {"entropic", "tail-continuous"}},
      {"example6.5", "average value at risk with a positive non-constant hedge",
       "L = H = M and the truncation extensions agree",
       {"coherent", "avar"}},
  };
  return rows;
}

RandomVariable from_key_tail(const SpacePtr& sp, const std::function<double(std::int64_t)>& f, Tail tail) {
  return RandomVariable::from_key(sp, f, tail);
}

}  // namespace

std::vector<BuiltinInfo> builtin_catalog() { return catalog(); }

std::vector<BuiltinInfo> builtin_catalog(const std::string& tag) {
  std::vector<BuiltinInfo> out;
  for (const auto& row : catalog())
    if (tag.empty() || std::find(row.tags.begin(), row.tags.end(), tag) != row.tags.end()) out.push_back(row);
  return out;
}

bool builtin_exists(const std::string& name) {
  if (name == "counterexample") return true;
  return std::any_of(catalog().begin(), catalog().end(), [&](const auto& r) { return r.name == name; });
}

GeneralizedMeasure geometric_weights(const SpacePtr& space, bool normalize, std::string tag) {
  std::vector<double> w(space->size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < space->size(); ++i) {
    if (auto k = space->embedding(i); k && *k > 0) {
      w[i] = std::ldexp(1.0, -static_cast<int>(std::min<std::int64_t>(*k, 2000)));
      total += w[i];
    }
  }
  if (normalize)
    for (double& v : w) v /= total;
  return GeneralizedMeasure(space, w, 0.0, 0.0, std::move(tag));
}

Regime tail_mass_regime(std::int64_t window, bool indicator_hedge) {
  SpacePtr sp = SampleSpace::naturals(window);
  GeneralizedMeasure zeta = geometric_weights(sp, false, "zeta");
  GeneralizedMeasure nu = GeneralizedMeasure::tail_only(sp, 1.0, 0.0, "nu");
  LinearDual acc{{{zeta, 0.0, "zeta"}, {nu, 1.0, "nu"}}};
  std::optional<GeneralizedMeasure> ref = geometric_weights(sp, true, "reference");
  if (!indicator_hedge) return cash_regime(std::move(acc), "tail-mass/cash", std::move(ref));

  RandomVariable one = RandomVariable::constant(sp, 1.0).with_tail(Tail::limit(1.0));
  RandomVariable first = RandomVariable::indicator(sp, {*sp->index_of(1)}).with_tail(Tail::limit(0.0));
  PricingFunctional p{{integrate(zeta, first).value(), integrate(zeta, one).value()}};
  return Regime(std::move(acc), SecuritySpace({first, one}, 1), std::move(p), "tail-mass/indicator", std::move(ref));
}

IndexedDual symmetric_spread_family(const SpacePtr& space, std::int64_t k_max, bool with_oracle) {
  require(k_max > 0, ErrorCode::InvalidArgument, "k_max must be positive");
  const auto zero = space->index_of(0);
  require(zero.has_value(), ErrorCode::InvalidArgument, "spread family needs the atom 0");
  IndexedDual fam;
  fam.k_max = k_max;
  fam.description = "Q_k";
  fam.generator = [space, z = *zero](std::int64_t k) -> std::optional<ScenarioMember> {
    auto up = space->index_of(k);
    auto lo = space->index_of(-k);
    if (!up || !lo) return std::nullopt;
    const double kd = static_cast<double>(k);
    std::vector<GeneralizedMeasure::Entry> e;
    if (k > 1) e.emplace_back(z, 1.0 - 1.0 / kd);
    e.emplace_back(*up, 0.5 / kd);
    e.emplace_back(*lo, 0.5 / kd);
    std::string tag = "Q_" + std::to_string(k);
    return ScenarioMember{GeneralizedMeasure::sparse(space, std::move(e), 0.0, 0.0, tag), 0.0, tag};
  };
  if (with_oracle) {
    auto oracle = std::make_shared<AsymptoticOracle>();
    oracle->limit = [space, z = *zero](const RandomVariable& y) -> std::optional<ExtReal> {
      if (!y.tail()) return std::nullopt;
      auto growth = [](const TailEnd& e) {
        if (auto g = e.growth()) return ExtReal(*g);
        return e.kind == TailEnd::Kind::PosInf ? ExtReal::pos_inf() : ExtReal::neg_inf();
      };
      const ExtReal up = growth(y.tail()->upper);
      const ExtReal lo = space->two_sided() ? growth(y.tail()->lower) : ExtReal(0.0);
      if ((up.is_pos_inf() && lo.is_neg_inf()) || (up.is_neg_inf() && lo.is_pos_inf())) return std::nullopt;
      return ExtReal(y[z]) + 0.5 * (up + lo);
    };
    oracle->regular_limit = GeneralizedMeasure::dirac(space, *zero, "delta_0");
    fam.oracle = std::move(oracle);
  }
  return fam;
}

namespace {

// sum c_k Q_k with c_k proportional to 1/(k(k+1)), restricted to the integer atoms.
GeneralizedMeasure spread_reference(const SpacePtr& sp, std::int64_t window) {
  std::vector<double> w(sp->size(), 0.0);
  const std::size_t z = *sp->index_of(0);
  double total = 0.0;
  for (std::int64_t k = 1; k <= window; ++k) {
    const double kd = static_cast<double>(k);
    const double c = 1.0 / (kd * (kd + 1.0));
    total += c;
    w[z] += c * (1.0 - 1.0 / kd);
    w[*sp->index_of(k)] += c * 0.5 / kd;
    w[*sp->index_of(-k)] += c * 0.5 / kd;
  }
  for (double& v : w) v /= total;
  return GeneralizedMeasure(sp, w, 0.0, 0.0, "spread reference");
}

}  // namespace

Regime symmetric_spread_regime(std::int64_t window, std::int64_t k_max, bool with_oracle) {
  SpacePtr sp = SampleSpace::integers(window);
  return cash_regime(symmetric_spread_family(sp, k_max, with_oracle), "spread", spread_reference(sp, window));
}

MixedSpace mixed_space(std::int64_t window, double top) {
  require(window > 0 && top > 8.0, ErrorCode::InvalidArgument, "mixed space needs a positive window and top > 8");
  std::vector<std::string> labels;
  std::vector<std::optional<std::int64_t>> emb;
  for (std::int64_t k = -window; k <= window; ++k) {
    labels.push_back(std::to_string(k));
    emb.emplace_back(k);
  }
  std::vector<std::pair<double, double>> cells;
  for (int j = 0; j < 128; ++j) cells.emplace_back(j / 16.0, (j + 1) / 16.0);
  const double ratio = std::exp2(1.0 / 16.0);
  for (double a = 8.0; a < top;) {
    const double b = std::min(a * ratio, top);
    cells.emplace_back(a, b);
    a = b;
  }
  for (std::size_t j = 0; j < cells.size(); ++j) {
    labels.push_back("cell" + std::to_string(j));
    emb.emplace_back(std::nullopt);
  }
  SpacePtr sp = std::make_shared<const SampleSpace>(std::move(labels), std::move(emb), window);
  std::vector<std::size_t> idx;
  std::vector<double> points, w(sp->size(), 0.0);
  const double mass = -std::expm1(-top);
  const std::size_t first = static_cast<std::size_t>(2 * window + 1);
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const auto [a, b] = cells[j];
    idx.push_back(first + j);
    points.push_back(0.5 * (a + b));
    w[first + j] = std::exp(-a) * -std::expm1(a - b) / mass;
  }
  GeneralizedMeasure expo(sp, w, 0.0, 0.0, "exponential");
  GeneralizedMeasure spread = spread_reference(sp, window);
  MixedSpace ms{sp, std::move(idx), std::move(points), std::move(expo), std::move(spread)};
  return ms;
}

Regime mixed_regime(const MixedSpace& ms, std::int64_t k_max) {
  Intersection both;
  both.members.emplace_back(symmetric_spread_family(ms.space, k_max, true));
  both.members.emplace_back(Entropic{ms.exponential, 1.0});
  GeneralizedMeasure ref = mix({0.5, 0.5}, {ms.spread, ms.exponential}, "mixed reference");
  return cash_regime(std::move(both), "spread and entropic", std::move(ref));
}

Regime entropic_geometric_regime(std::int64_t window, double beta) {
  SpacePtr sp = SampleSpace::naturals(window);
  GeneralizedMeasure base = geometric_weights(sp, true, "geometric");
  return cash_regime(Entropic{base, beta}, "entropic", base);
}

Regime avar_regime(std::int64_t window, double alpha) {
  SpacePtr sp = SampleSpace::naturals(window);
  GeneralizedMeasure base(sp, std::vector<double>(sp->size(), 1.0 / static_cast<double>(sp->size())), 0.0, 0.0,
                          "uniform");
  RandomVariable u = from_key_tail(sp, [](std::int64_t k) { return 2.0 - 1.0 / static_cast<double>(k); }, Tail::limit(2.0));
  return Regime(AVaR{base, alpha}, SecuritySpace({u}, 0), PricingFunctional{{1.0}}, "avar", base);
}

Regime mixture_counterexample(std::size_t grid_points) {
  require(grid_points >= 2, ErrorCode::InvalidArgument, "grid needs at least two points");
  SpacePtr sp = SampleSpace::finite(3);
  GeneralizedMeasure q(sp, {0.5, 0.5, 0.0}, 0.0, 0.0, "Q");
  GeneralizedMeasure p(sp, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 0.0, 0.0, "P");
  LinearDual acc;
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double b = static_cast<double>(i) / static_cast<double>(grid_points - 1);
    std::string tag = "mix" + std::to_string(i);
    acc.family.push_back({mix({b, 1.0 - b}, {q, p}, tag), (1.0 - b) * (1.0 - b), tag});
  }
  return cash_regime(std::move(acc), "mixture", p);
}

namespace {

std::vector<BuiltinInput> single_level(std::vector<std::pair<std::string, RandomVariable>> xs) {
  std::vector<BuiltinInput> out;
  for (auto& [n, x] : xs) out.push_back({n, {x}});
  return out;
}

BuiltinCase with_info(const std::string& name) {
  BuiltinCase c;
  c.name = name;
  for (const auto& row : catalog()) {
    if (row.name != name) continue;
    c.description = row.description;
    c.anchor = row.anchor;
    c.tags = row.tags;
  }
  return c;
}

}  // namespace

BuiltinCase make_builtin(const std::string& name, const BuiltinOptions& opt) {
  require(builtin_exists(name), ErrorCode::ConfigError, "unknown builtin " + name);
  if (opt.k_max) require(*opt.k_max > 0 && *opt.k_max <= (1 << 20), ErrorCode::ConfigError, "k_max must lie in [1, 2^20]");
  BuiltinCase c = with_info(name);

  if (name == "example6.1") {
    c.levels.push_back(tail_mass_regime(kLinearWindow, true));
    c.variants.push_back({"cash", tail_mass_regime(kLinearWindow, false)});
    const SpacePtr& sp = c.regime().space();
    c.inputs = single_level({
        {"first_atom", RandomVariable::indicator(sp, {*sp->index_of(1)}).with_tail(Tail::limit(0.0))},
        {"reciprocal", from_key_tail(sp, [](std::int64_t k) { return 1.0 / static_cast<double>(k); }, Tail::limit(0.0))},
        {"approach_one", from_key_tail(sp, [](std::int64_t k) { return 1.0 - 1.0 / static_cast<double>(k); },
                                       Tail::limit(1.0))},
    });
  } else if (name == "example6.2") {
    const std::int64_t k_max = opt.k_max.value_or(kSpreadWindow);
    c.levels.push_back(symmetric_spread_regime(std::max(kSpreadWindow, k_max), k_max, true));
    const SpacePtr& sp = c.regime().space();
    c.inputs = single_level({
        {"identity", from_key_tail(sp, [](std::int64_t k) { return static_cast<double>(k); }, Tail::identity())},
        {"identity_capped_8", from_key_tail(sp, [](std::int64_t k) { return std::min<double>(static_cast<double>(k), 8.0); },
                                            Tail{TailEnd::at(8.0), TailEnd::neg_inf(-1.0)})},
    });
  } else if (name == "example6.3") {
    const std::int64_t k_max = opt.k_max.value_or(kMixedWindow);
    const std::int64_t window = std::max(kMixedWindow, k_max);
    BuiltinInput id{"integer_identity", {}}, ex{"exponential", {}};
    for (double top : {128.0, 256.0, 512.0}) {
      MixedSpace ms = mixed_space(window, top);
      c.levels.push_back(mixed_regime(ms, k_max));
      id.levels.push_back(from_key_tail(ms.space, [](std::int64_t k) { return static_cast<double>(k); }, Tail::identity()));
      std::vector<double> v(ms.space->size(), 0.0);
      for (std::size_t j = 0; j < ms.cells.size(); ++j) v[ms.cells[j]] = ms.points[j] / kExponentialRate;
      ex.levels.emplace_back(ms.space, std::move(v), Tail::limit(0.0));
    }
    c.inputs = {id, ex};
  } else if (name == "example6.4") {
    c.levels.push_back(entropic_geometric_regime(kEntropicWindow, 1.0));
    const SpacePtr& sp = c.regime().space();
    c.inputs = single_level({
        {"half_linear", from_key_tail(sp, [](std::int64_t k) { return 0.5 * static_cast<double>(k); }, Tail{TailEnd::pos_inf(0.5), {}})},
        {"quarter_linear", from_key_tail(sp, [](std::int64_t k) { return 0.25 * static_cast<double>(k); },
                                         Tail{TailEnd::pos_inf(0.25), {}})},
        {"logarithmic", from_key_tail(sp, [](std::int64_t k) { return std::log(static_cast<double>(k)); },
                                      Tail{TailEnd::pos_inf(0.0), {}})},
    });
  } else if (name == "example6.5") {
    c.levels.push_back(avar_regime(kAvarWindow, kAvarLevel));
    const SpacePtr& sp = c.regime().space();
    c.inputs = single_level({
        {"ramp", from_key_tail(sp, [](std::int64_t k) { return static_cast<double>(k); }, Tail{TailEnd::pos_inf(1.0), {}})},
        {"alternating", from_key_tail(sp, [](std::int64_t k) { return (k % 2 ? -1.0 : 1.0) / static_cast<double>(k); },
                                      Tail::limit(0.0))},
        {"negative_ramp", from_key_tail(sp, [](std::int64_t k) { return -static_cast<double>(k); },
                                        Tail{TailEnd::neg_inf(-1.0), {}})},
    });
  } else {
    c.description = "mixtures of Q and P whose only zero-penalty member misses an atom";
    c.anchor = "zero-penalty set {Q} while the reference set is empty";
    c.tags = {"counterexample"};
    c.levels.push_back(mixture_counterexample());
    const SpacePtr& sp = c.regime().space();
    c.inputs = single_level({
        {"first_atom", RandomVariable::indicator(sp, {0})},
        {"last_atom", RandomVariable::indicator(sp, {2})},
    });
  }
  return c;
}

Ladder BuiltinLadder::ladder(const BuiltinInput& input) const {
  require(input.levels.size() == evaluators.size(), ErrorCode::InvalidArgument, "input levels differ from ladder levels");
  Ladder l;
  for (const auto& e : evaluators) l.levels.push_back(&e);
  l.inputs = input.levels;
  return l;
}

BuiltinLadder build_ladder(const BuiltinCase& c, const SolverOptions& opt) {
  BuiltinLadder out;
  out.evaluators.reserve(c.levels.size());
  for (const auto& r : c.levels) out.evaluators.emplace_back(r, opt);
  return out;
}

}  // namespace mrisk
