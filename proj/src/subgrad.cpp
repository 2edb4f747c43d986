// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "mrisk/subgrad.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mrisk {

namespace {

using Affine = std::function<ExtReal(const RandomVariable&)>;

Maximizer measure_maximizer(const ScenarioMember& m, std::optional<std::int64_t> index, const ExtReal& f_at_x,
                            const RandomVariable& x) {
  Maximizer out;
  out.label = m.label;
  out.index = index;
  out.measure = m.measure;
  out.penalty = m.penalty;
  const GeneralizedMeasure mu = m.measure;
  const GeneralizedMeasure reg = m.measure.regular_part();
  const double pen = m.penalty;
  out.affine = [mu, pen](const RandomVariable& y) { return integrate(mu, y) - ExtReal(pen); };
  out.regular = [reg, pen](const RandomVariable& y) { return integrate(reg, y) - ExtReal(pen); };
  out.gap = f_at_x - out.affine(x);
  return out;
}

ExtReal oracle_at(const AsymptoticOracle& o, const RandomVariable& y) {
  auto v = o.limit(y);
  return v ? *v : ExtReal::neg_inf();  // undefined limit: no constraint
}

// Limit functional of an indexed family. Under eta the singular part only sees {X >= 0}.
Maximizer limit_maximizer(const IndexedMembers& ix, Extension which, const ExtReal& f_at_x, const RandomVariable& x) {
  Maximizer out;
  out.label = ix.label.empty() ? "limit functional" : ix.label + " limit";
  out.singular_limit = true;
  auto oracle = ix.oracle;
  const SpacePtr sp = x.space();
  const ExtReal at_zero = oracle_at(*oracle, RandomVariable::constant(sp, 0.0));
  out.penalty = at_zero.finite() ? -at_zero.value() : 0.0;
  std::optional<GeneralizedMeasure> reg = oracle->regular_limit;
  if (reg) {
    const GeneralizedMeasure nu = *reg;
    out.regular = [nu, at_zero](const RandomVariable& y) { return integrate(nu, y) + at_zero; };
    if (which == Extension::Eta) {
      const RandomVariable pos = x;
      out.affine = [nu, oracle, pos](const RandomVariable& y) {
        const RandomVariable cut = restrict_to(y, pos, 0.0);
        return integrate(nu, y) + (oracle_at(*oracle, cut) - integrate(nu, cut));
      };
    } else {
      out.affine = [oracle](const RandomVariable& y) { return oracle_at(*oracle, y); };
    }
  } else {
    out.regular = [at_zero](const RandomVariable&) { return at_zero; };
    out.affine = [oracle](const RandomVariable& y) { return oracle_at(*oracle, y); };
  }
  out.gap = f_at_x - out.affine(x);
  return out;
}

bool in_gamma(const Evaluator& ev, const RandomVariable& x) {
  for (int i = 1; i <= 20; ++i)
    if (ev.value(scale(1.0 + std::ldexp(1.0, -i), positive_part(x))).finite()) return true;
  return false;
}

std::vector<std::size_t> charged_atoms(const Evaluator& ev) {
  std::vector<char> mark(ev.regime().space()->size(), 0);
  ev.consistent().for_each([&](const ScenarioMember& m, std::int64_t) {
    for (const auto& [i, w] : m.measure.entries())
      if (w > 0.0) mark[i] = 1;
  });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mark.size(); ++i)
    if (mark[i]) out.push_back(i);
  if (out.empty())
    for (std::size_t i = 0; i < mark.size(); ++i) out.push_back(i);
  return out;
}

}  // namespace

std::vector<RandomVariable> subgradient_probes(const Evaluator& ev, const RandomVariable& x, std::size_t count,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(0, 6);
  const std::vector<std::size_t> atoms = charged_atoms(ev);
  std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
  const SpacePtr& sp = x.space();
  std::vector<RandomVariable> out;
  out.reserve(count);
  for (std::size_t i = 0; out.size() < count; ++i) {
    switch (i % 6) {
      case 0: out.push_back(add(x, scale(2.0 * unit(rng), RandomVariable::indicator(sp, {atoms[pick(rng)]})))); break;
      case 1: out.push_back(scale(1.0 + unit(rng), x)); break;
      case 2: out.push_back(truncate(x, Truncation(std::ldexp(1.0, expo(rng)), std::ldexp(1.0, expo(rng))))); break;
      case 3: out.push_back(add(x, keep_above(abs(x), std::ldexp(1.0, expo(rng))))); break;
      case 4: {
        std::vector<double> bump(sp->size(), 0.0);
        for (int j = 0; j < 8; ++j) bump[atoms[pick(rng)]] += unit(rng);
        out.push_back(add(x, RandomVariable(sp, bump, sp->embedded() ? std::optional<Tail>(Tail::limit(0.0)) : std::nullopt)));
        break;
      }
      default: out.push_back(add(x, RandomVariable::constant(sp, 2.0 * unit(rng)))); break;
    }
  }
  return out;
}

std::pair<std::size_t, double> probe_violations(Extension which, const Evaluator& ev, const Affine& affine,
                                                const std::vector<RandomVariable>& probes, double tol,
                                                const ExtensionGrids& grids) {
  std::size_t bad = 0;
  double worst = 0.0;
  for (const auto& y : probes) {
    ExtReal f, a;
    try {
      f = extension_value(which, ev, y, grids);
      a = affine(y);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::TailUndefined || e.code() == ErrorCode::NotFinite) continue;
      throw;
    }
    if (f.is_pos_inf() || a.is_neg_inf()) continue;
    if (a.is_pos_inf() || f.is_neg_inf()) {
      ++bad;
      worst = HUGE_VAL;
      continue;
    }
    const double shortfall = a.value() - f.value();
    if (shortfall > tol * (1.0 + std::fabs(f.value()))) ++bad;
    worst = std::max(worst, shortfall);
  }
  return {bad, worst};
}

SubgradientReport subgradient(const Evaluator& ev, const RandomVariable& x, Extension which,
                              const SubgradientOptions& opt, const ExtensionGrids& grids) {
  SubgradientReport rep;
  rep.which = which;
  rep.existence_guaranteed = in_gamma(ev, x);
  if (!rep.existence_guaranteed) rep.note = "existence not guaranteed";
  rep.value = extension_value(which, ev, x, grids);
  if (!rep.value.finite()) {
    rep.note = "value not finite: no subgradient";
    return rep;
  }
  const RandomVariable target = which == Extension::RhoTilde ? x : clamp_below(x, grids.n_grid.back());
  const RiskReport rr = ev.risk(target);
  const ScenarioFamily& fam = ev.consistent();

  auto consider = [&](const ScenarioMember& m, std::optional<std::int64_t> index) {
    if (rep.maximizers.size() >= 16) return;
    if (integrate(m.measure, target) - ExtReal(m.penalty) < rr.value - ExtReal(opt.tol_sg)) return;
    Maximizer mx = measure_maximizer(m, index, rep.value, x);
    if (mx.gap <= ExtReal(opt.tol_sg)) rep.maximizers.push_back(std::move(mx));
  };
  for (const auto& m : fam.members) consider(m, std::nullopt);
  std::optional<std::int64_t> best_index;
  for (const auto& ix : fam.indexed) {
    for (std::int64_t k = 1; k <= ix.k_max; ++k)
      if (auto m = ix.generator(k)) consider(*m, k);
    if (ix.oracle && ix.oracle->limit) {
      Maximizer mx = limit_maximizer(ix, which, rep.value, x);
      if (mx.gap <= ExtReal(opt.tol_sg) && mx.gap >= -ExtReal(opt.tol_sg)) rep.maximizers.push_back(std::move(mx));
    }
  }
  if (rr.scenario && !rr.scenario_index && rr.scenario->label != "" &&
      std::none_of(rep.maximizers.begin(), rep.maximizers.end(),
                   [&](const Maximizer& m) { return !m.index && m.label == rr.scenario->label; })) {
    Maximizer mx = measure_maximizer(*rr.scenario, std::nullopt, rep.value, x);
    if (mx.gap <= ExtReal(opt.tol_sg)) rep.maximizers.push_back(std::move(mx));
  }
  best_index = rr.scenario_index;
  if (rep.maximizers.empty()) {
    fail(ErrorCode::NoMaximizer, "supremum not attained below the cutoff" +
                                     (best_index ? ", best index " + std::to_string(*best_index) : std::string()));
  }
  if (rr.cutoff_limited && best_index) {
    for (const auto& ix : fam.indexed)
      if (!ix.oracle && *best_index == ix.k_max)
        fail(ErrorCode::NoMaximizer, "maximizer sits at the cutoff, best index " + std::to_string(*best_index));
  }

  const std::vector<RandomVariable> probes = subgradient_probes(ev, x, opt.probes, opt.seed);
  rep.probes = probes.size();
  for (const auto& m : rep.maximizers) {
    auto [bad, worst] = probe_violations(which, ev, m.affine, probes, opt.probe_tol, grids);
    rep.probe_violations += bad;
    rep.worst_violation = std::max(rep.worst_violation, worst);
  }
  return rep;
}

RegularProjectionReport regular_projection_check(const Evaluator& ev, const RandomVariable& x,
                                                 const SubgradientReport& report, const SubgradientOptions& opt,
                                                 const ExtensionGrids& grids) {
  RegularProjectionReport rep;
  require(!report.maximizers.empty(), ErrorCode::NoMaximizer, "report carries no maximizer");
  const Maximizer* chosen = &report.maximizers.front();
  for (const auto& m : report.maximizers) {
    if (m.singular_limit || (m.measure && m.measure->has_tail_mass())) {
      chosen = &m;
      rep.singular_present = true;
      break;
    }
  }
  const ExtReal f = report.value;
  const RandomVariable neg = negative_part(x);
  rep.singular_on_negative_part = chosen->affine(neg) - chosen->regular(neg);
  rep.regular_gap = f - chosen->regular(x);
  if (!rep.singular_present) {
    rep.tail_condition = true;
    rep.regular_part_attains = true;
    rep.regular_part_is_subgradient = report.probe_violations == 0;
    rep.verdict = "trivially regular";
    return rep;
  }

  std::vector<double> r_grid;
  for (std::size_t i = 4; i < grids.tail_grid.size(); i += 5) r_grid.push_back(grids.tail_grid[i]);
  if (r_grid.empty() || r_grid.back() != grids.tail_grid.back()) r_grid.push_back(grids.tail_grid.back());
  for (int i = 0; i <= 6 && !rep.tail_condition; ++i) {
    const double s = std::ldexp(1.0, -i);
    if (tail_continuity_test(report.which, ev, x, scale(s, positive_part(x)), r_grid, grids).converges) {
      rep.tail_condition = true;
      rep.tail_scale = s;
    }
  }

  rep.regular_part_attains = rep.regular_gap.finite() && std::fabs(rep.regular_gap.value()) <= opt.probe_tol;
  const auto probes = subgradient_probes(ev, x, opt.probes, opt.seed + 1);
  rep.regular_probe_violations = probe_violations(report.which, ev, chosen->regular, probes, opt.probe_tol, grids).first;
  rep.regular_part_is_subgradient = rep.regular_part_attains && rep.regular_probe_violations == 0;
  if (rep.regular_part_is_subgradient)
    rep.verdict = "regular part is a subgradient";
  else if (rep.tail_condition)
    rep.verdict = "regular part fails despite tail continuity";
  else
    rep.verdict = "regular part fails: singular mass required";
  return rep;
}

EscapeReport escape_diagnostic(const Evaluator& ev, const RandomVariable& x, Extension which,
                               const std::vector<std::int64_t>& k_schedule, const ExtensionGrids& grids) {
  EscapeReport rep;
  const ScenarioFamily& fam = ev.consistent();
  if (fam.indexed.empty()) {
    rep.verdict = "stabilizes";
    return rep;
  }
  require(!k_schedule.empty() && std::is_sorted(k_schedule.begin(), k_schedule.end()), ErrorCode::InvalidArgument,
          "cutoff schedule must be nonempty and increasing");
  const RandomVariable target = which == Extension::Eta ? clamp_below(x, grids.n_grid.front()) : x;
  const IndexedMembers& ix = fam.indexed.front();
  ExtReal best = ExtReal::neg_inf();
  std::int64_t arg = 0, k = 0;
  for (std::int64_t cutoff : k_schedule) {
    const std::int64_t top = std::min(cutoff, ix.k_max);
    for (++k; k <= top; ++k) {
      auto m = ix.generator(k);
      if (!m) continue;
      ExtReal v = integrate(m->measure, target) - ExtReal(m->penalty);
      if (arg == 0 || v > best) {
        best = v;
        arg = k;
      }
    }
    --k;
    rep.argmax.emplace_back(top, arg);
  }
  const bool escapes = std::all_of(rep.argmax.begin(), rep.argmax.end(), [](const auto& p) { return p.second == p.first; });
  const std::size_t n = rep.argmax.size();
  if (escapes && n >= 2)
    rep.verdict = "escapes";
  else if (n >= 2 && rep.argmax[n - 1].second == rep.argmax[n - 2].second && rep.argmax[n - 1].second < rep.argmax[n - 1].first)
    rep.verdict = "stabilizes";
  else
    rep.verdict = "inconclusive";
  return rep;
}

}  // namespace mrisk
