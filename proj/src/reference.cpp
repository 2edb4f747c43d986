// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "mrisk/reference.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "mrisk/lp.hpp"

namespace mrisk {

namespace {

std::vector<double> price_column(const GeneralizedMeasure& mu, const SecuritySpace& s) {
  std::vector<double> c(s.dimension());
  for (std::size_t j = 0; j < s.dimension(); ++j) {
    ExtReal v = integrate(mu, s.basis[j]);
    require(v.finite(), ErrorCode::NotFinite, "security integral is infinite");
    c[j] = v.value();
  }
  return c;
}

bool matches_prices(const std::vector<double>& col, const std::vector<double>& p, double tol) {
  for (std::size_t j = 0; j < p.size(); ++j)
    if (std::fabs(col[j] - p[j]) > tol * (1.0 + std::fabs(p[j]))) return false;
  return true;
}

std::string scaled_label(const std::string& label, double t) {
  if (t == 1.0) return label;
  return format_number(t) + "*" + label;
}

double binomial_sum(std::size_t n, std::size_t kmax, double cap) {
  double total = 0.0, c = 1.0;
  for (std::size_t k = 1; k <= kmax && k <= n; ++k) {
    c = c * static_cast<double>(n - k + 1) / static_cast<double>(k);
    total += c;
    if (total > cap) return total;
  }
  return total;
}

struct VertexBuilder {
  const std::vector<ScenarioMember>& fam;
  const std::vector<std::vector<double>>& cols;
  const std::vector<double>& p;
  const AcceptanceSpec* acceptance;
  const ConsistencyOptions& opt;
  std::vector<ScenarioMember> out;

  void try_subset(const std::vector<std::size_t>& idx) {
    const auto d = static_cast<Eigen::Index>(p.size());
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd M(d, k);
    Eigen::VectorXd rhs(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      rhs(j) = p[static_cast<std::size_t>(j)];
      for (Eigen::Index i = 0; i < k; ++i) M(j, i) = cols[idx[static_cast<std::size_t>(i)]][static_cast<std::size_t>(j)];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    qr.setThreshold(1e-10);
    if (qr.rank() != k) return;
    Eigen::VectorXd t = qr.solve(rhs);
    if ((M * t - rhs).norm() > opt.residual_tol * (1.0 + rhs.norm())) return;
    for (Eigen::Index i = 0; i < k; ++i)
      if (!(t(i) > 1e-13)) return;
    add(idx, std::vector<double>(t.data(), t.data() + k));
  }

  void add(const std::vector<std::size_t>& idx, const std::vector<double>& t) {
    std::vector<GeneralizedMeasure> ms;
    double penalty = 0.0;
    std::string label;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      ms.push_back(fam[idx[i]].measure);
      penalty += t[i] * fam[idx[i]].penalty;
      label += (i ? "+" : "") + scaled_label(fam[idx[i]].label, t[i]);
    }
    GeneralizedMeasure mu = idx.size() == 1 ? fam[idx[0]].measure.scaled(t[0]) : mix(t, ms);
    if (acceptance && acceptance->linear() && (idx.size() > 1 || fam.size() <= 64) && penalty > 0.0) {
      ExtReal s = sigma_A(*acceptance, mu);
      if (s.finite()) penalty = std::min(penalty, s.value());
    }
    out.push_back({mu.retagged(label), penalty, label});
  }
};

std::vector<ScenarioMember> consistent_members(const std::vector<ScenarioMember>& fam, const SecuritySpace& s,
                                               const PricingFunctional& p, const AcceptanceSpec* acceptance,
                                               const ConsistencyOptions& opt) {
  std::vector<std::vector<double>> cols;
  cols.reserve(fam.size());
  for (const auto& m : fam) cols.push_back(price_column(m.measure, s));
  VertexBuilder vb{fam, cols, p.prices, acceptance, opt, {}};
  const std::size_t d = s.dimension();
  const std::size_t kmax = std::min(d, fam.size());
  if (binomial_sum(fam.size(), kmax, static_cast<double>(opt.max_subsets)) <= static_cast<double>(opt.max_subsets)) {
    std::vector<std::size_t> idx;
    // Increasing index subsets of size 1..kmax.
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
      if (!idx.empty()) vb.try_subset(idx);
      if (idx.size() == kmax) return;
      for (std::size_t i = start; i < fam.size(); ++i) {
        idx.push_back(i);
        rec(i + 1);
        idx.pop_back();
      }
    };
    rec(0);
    return std::move(vb.out);
  }
  // Too many subsets: individually rescaled members plus the least-penalty vertex.
  for (std::size_t i = 0; i < fam.size(); ++i) vb.try_subset({i});
  LPProblem lp;
  lp.A.assign(d, std::vector<double>(fam.size()));
  lp.b = p.prices;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    lp.objective.push_back(fam[i].penalty);
    lp.nonnegative.push_back(true);
    for (std::size_t j = 0; j < d; ++j) lp.A[j][i] = cols[i][j];
  }
  LPResult res = lp_solve(lp);
  if (res.status == LPStatus::Optimal) {
    std::vector<std::size_t> idx;
    std::vector<double> t;
    for (std::size_t i = 0; i < fam.size(); ++i)
      if (res.argument[i] > 1e-13) {
        idx.push_back(i);
        t.push_back(res.argument[i]);
      }
    if (idx.size() > 1) vb.add(idx, t);
  }
  return std::move(vb.out);
}

IndexedMembers consistent_indexed(const IndexedMembers& ix, const SecuritySpace& s, const PricingFunctional& p,
                                  double tol) {
  IndexedMembers out = ix;
  auto gen = ix.generator;
  out.generator = [gen, s, p, tol](std::int64_t k) -> std::optional<ScenarioMember> {
    auto m = gen(k);
    if (!m) return std::nullopt;
    std::vector<double> col = price_column(m->measure, s);
    if (s.dimension() == 1) {
      if (!(col[0] > 0.0) || !(p.prices[0] > 0.0)) return std::nullopt;
      const double t = p.prices[0] / col[0];
      if (std::fabs(t - 1.0) > 1e-15) {
        m->measure = m->measure.scaled(t);
        m->penalty *= t;
        m->label = scaled_label(m->label, t);
      }
      return m;
    }
    if (!matches_prices(col, p.prices, tol)) return std::nullopt;
    return m;
  };
  return out;
}

void add_raw(const AcceptanceSpec& a, const Regime& r, ScenarioFamily& fam) {
  if (const auto* l = std::get_if<LinearDual>(&a.spec)) {
    fam.members.insert(fam.members.end(), l->family.begin(), l->family.end());
  } else if (const auto* ix = std::get_if<IndexedDual>(&a.spec)) {
    fam.indexed.push_back({ix->generator, ix->k_max, ix->oracle, ix->description});
  } else if (const auto* e = std::get_if<Entropic>(&a.spec)) {
    fam.members.push_back({e->base, 0.0, "base"});
    if (r.securities.dimension() == 1) fam.adaptive.push_back(entropic_scenarios(*e, r.securities.unit(), r.unit_price()));
  } else if (const auto* v = std::get_if<AVaR>(&a.spec)) {
    fam.members.push_back({v->base, 0.0, "base"});
    if (r.securities.dimension() == 1) fam.adaptive.push_back(avar_scenarios(*v, r.securities.unit(), r.unit_price()));
  } else {
    for (const auto& m : std::get<Intersection>(a.spec).members) add_raw(m, r, fam);
  }
}

bool charges(const GeneralizedMeasure& m, std::size_t atom) { return m.weight(atom) > 0.0; }

}  // namespace

ScenarioFamily raw_family(const Regime& r) {
  ScenarioFamily fam;
  add_raw(r.acceptance, r, fam);
  return fam;
}

ScenarioFamily pricing_consistent(const ScenarioFamily& raw, const SecuritySpace& s, const PricingFunctional& p,
                                  const AcceptanceSpec* acceptance, const ConsistencyOptions& opt) {
  ScenarioFamily out;
  out.source = FamilySource::PricingConsistent;
  out.members = consistent_members(raw.members, s, p, acceptance, opt);
  for (const auto& ix : raw.indexed) out.indexed.push_back(consistent_indexed(ix, s, p, opt.residual_tol));
  out.adaptive = raw.adaptive;
  require(!out.empty(), ErrorCode::EmptyFamily, "no scenario combination reproduces the prices");
  return out;
}

Evaluator::Evaluator(Regime r, SolverOptions opt)
    : regime_(std::move(r)), opt_(opt), consistent_(pricing_consistent(raw_family(regime_), regime_.securities,
                                                                       regime_.pricing, &regime_.acceptance)) {}

RiskReport Evaluator::risk(const RandomVariable& x) const { return dual_risk(regime_, x, consistent_); }

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    default: return "inconclusive";
  }
}

std::vector<std::size_t> reference_atoms(const Regime& r) {
  std::vector<std::size_t> out;
  if (r.reference) {
    for (const auto& [i, w] : r.reference->entries())
      if (w > 0.0) out.push_back(i);
    return out;
  }
  out.resize(r.space()->size());
  std::iota(out.begin(), out.end(), 0);
  return out;
}

WeakReference weak_reference(const ScenarioFamily& family, const AcceptanceSpec* acceptance) {
  std::vector<ScenarioMember> members = family.materialize();
  require(!members.empty(), ErrorCode::EmptyFamily, "weak reference of an empty family");
  std::vector<double> coef(members.size());
  std::vector<GeneralizedMeasure> ms;
  double total = 0.0;
  for (std::size_t l = 0; l < members.size(); ++l) {
    require(!members[l].measure.has_tail_mass(), ErrorCode::SingularMember,
            "member " + members[l].label + " carries tail mass");
    const double mass = members[l].measure.total_mass();
    const auto lv = static_cast<double>(l + 1);
    // 2^-l, with a polynomial tail once 2^-l would underflow.
    const double base = std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(l + 1, 900)));
    coef[l] = mass > 0.0 ? base / std::max(1.0, (lv - 900.0) * (lv - 900.0)) / mass : 0.0;
    total += coef[l] * mass;
    ms.push_back(members[l].measure);
  }
  require(total > 0.0, ErrorCode::EmptyFamily, "every member is the zero measure");
  for (double& c : coef) c /= total;
  WeakReference out{mix(coef, ms, "nu"), 0.0, 0.0, false, {}};
  double bound = 0.0;
  for (std::size_t l = 0; l < members.size(); ++l) bound += coef[l] * members[l].penalty;
  out.scale = out.probability.total_mass();
  out.penalty_bound = bound;
  out.probability = out.probability.scaled(1.0 / out.scale).retagged("weak reference");
  if (acceptance) {
    try {
      ExtReal s = sigma_A(*acceptance, out.probability.scaled(out.scale));
      out.penalty_verified = s.finite() && s.value() <= bound + 1e-9 * (1.0 + bound);
      out.note = "support function " + format_number(s);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Unsupported) throw;
      out.note = "penalty unverified";
    }
  } else {
    out.note = "penalty unverified";
  }
  return out;
}

DiagnosticReport sensitivity_check(const Evaluator& ev) {
  const Regime& r = ev.regime();
  std::vector<char> charged(r.space()->size(), 0);
  ev.consistent().for_each([&](const ScenarioMember& m, std::int64_t) {
    for (const auto& [i, w] : m.measure.entries())
      if (w > 0.0) charged[i] = 1;
  });
  DiagnosticReport rep;
  rep.check = "sensitivity";
  rep.narrative = "via dual charging criterion";
  std::size_t missing = 0;
  const auto atoms = reference_atoms(r);
  for (std::size_t a : atoms) {
    if (charged[a]) continue;
    if (++missing <= 16) rep.witnesses.push_back({"uncharged atom " + r.space()->label(a), 0.0});
  }
  rep.verdict = missing == 0 ? Verdict::Holds : Verdict::Fails;
  rep.label = missing == 0 ? "sensitive" : "not sensitive";
  if (missing == 0) rep.witnesses.push_back({"charged atoms", static_cast<double>(atoms.size())});
  if (missing > 16) rep.witnesses.push_back({"uncharged atoms total", static_cast<double>(missing)});
  return rep;
}

StrongReferenceReport strong_reference_check(const Evaluator& ev, const StrongReferenceOptions& opt) {
  const Regime& r = ev.regime();
  const ScenarioFamily& fam = ev.consistent();
  const std::vector<ScenarioMember> members = fam.materialize();
  const std::vector<std::size_t> atoms = reference_atoms(r);
  StrongReferenceReport rep;
  rep.summary.check = "strong reference";

  std::vector<char> in_ref(r.space()->size(), 0), e0_cover(r.space()->size(), 0);
  for (std::size_t a : atoms) in_ref[a] = 1;
  bool e0_outside = false;
  for (const auto& m : members) {
    if (m.penalty > opt.zero_tol) continue;
    rep.zero_penalty.push_back(m.label);
    if (m.measure.has_tail_mass()) continue;
    for (const auto& [i, w] : m.measure.entries()) {
      if (w <= 0.0) continue;
      e0_cover[i] = 1;
      e0_outside = e0_outside || !in_ref[i];
    }
  }
  rep.reference_set_nonempty = !e0_outside && !rep.zero_penalty.empty() &&
                               std::all_of(atoms.begin(), atoms.end(), [&](std::size_t a) { return e0_cover[a] != 0; });

  rep.coherent = std::all_of(members.begin(), members.end(), [&](const auto& m) { return m.penalty <= opt.zero_tol; }) &&
                 std::all_of(fam.adaptive.begin(), fam.adaptive.end(), [](const auto& a) { return a.zero_penalty; });
  if (rep.coherent) rep.coherent_agrees = rep.reference_set_nonempty == (sensitivity_check(ev).verdict == Verdict::Holds);

  // rho(-k 1_a) is nonincreasing in k, so success anywhere implies success at the cap.
  const int top = opt.max_exponent;
  std::function<ExtReal(std::size_t, double)> rho_at;
  std::vector<std::vector<std::pair<double, double>>> by_atom;  // (weight, penalty) of charging members
  std::vector<std::size_t> order;
  if (fam.adaptive.empty()) {
    by_atom.resize(r.space()->size());
    for (const auto& m : members)
      for (const auto& [i, w] : m.measure.entries())
        if (w > 0.0) by_atom[i].emplace_back(w, m.penalty);
    order.resize(members.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return members[a].penalty < members[b].penalty; });
    std::vector<ExtReal> oracle_zero;
    for (const auto& ix : fam.indexed)
      oracle_zero.push_back(ix.oracle && ix.oracle->limit ? ix.oracle->limit(RandomVariable::constant(r.space(), 0.0))
                                                              .value_or(ExtReal::neg_inf())
                                                          : ExtReal::neg_inf());
    rho_at = [&, oracle_zero](std::size_t a, double k) -> ExtReal {
      ExtReal best = ExtReal::neg_inf();
      for (std::size_t i : order) {
        if (!charges(members[i].measure, a)) {
          best = -ExtReal(members[i].penalty);
          break;
        }
      }
      for (const auto& [w, pen] : by_atom[a]) best = max(best, ExtReal(-k * w - pen));
      for (std::size_t j = 0; j < fam.indexed.size(); ++j) {
        const auto& ix = fam.indexed[j];
        if (!ix.oracle || !ix.oracle->limit) continue;
        if (ix.oracle->regular_limit) {
          best = max(best, oracle_zero[j] - ExtReal(k * ix.oracle->regular_limit->weight(a)));
        } else if (auto v = ix.oracle->limit(scale(-k, RandomVariable::indicator(r.space(), {a})))) {
          best = max(best, *v);
        }
      }
      return best;
    };
  } else {
    rho_at = [&](std::size_t a, double k) { return ev.value(scale(-k, RandomVariable::indicator(r.space(), {a}))); };
  }

  rep.atom_test_passed = true;
  for (std::size_t a : atoms) {
    auto ok = [&](int e) { return rho_at(a, std::ldexp(1.0, e)) < ExtReal(-opt.risk_tol); };
    if (!ok(top)) {
      rep.atom_test_passed = false;
      rep.atom_evidence.push_back({"atom " + r.space()->label(a) + " never negative up to k", std::ldexp(1.0, top)});
      continue;
    }
    int lo = -1, hi = top;  // ok(hi), !ok(lo) with lo = -1 meaning "none tried"
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      (ok(mid) ? hi : lo) = mid;
    }
    if (rep.atom_evidence.size() < 16)
      rep.atom_evidence.push_back({"atom " + r.space()->label(a) + " smallest k", std::ldexp(1.0, hi)});
  }

  auto& s = rep.summary;
  s.verdict = rep.reference_set_nonempty ? Verdict::Holds : Verdict::Fails;
  if (!rep.reference_set_nonempty)
    s.label = "reference set empty";
  else
    s.label = rep.atom_test_passed ? "zero-penalty set equals reference set" : "reference set nonempty";
  for (std::size_t i = 0; i < rep.zero_penalty.size() && i < 16; ++i) s.witnesses.push_back({"zero penalty " + rep.zero_penalty[i], 0.0});
  if (rep.zero_penalty.empty()) s.vacuous = true;
  s.narrative = rep.coherent ? "coherent family" : "convex family";
  return rep;
}

DiagnosticReport continuity_above_diagnostic(const Regime& r) {
  DiagnosticReport rep;
  rep.check = "continuity from above";
  const ScenarioFamily raw = raw_family(r);
  std::vector<Witness> singular;
  raw.for_each([&](const ScenarioMember& m, std::int64_t) {
    if (m.measure.has_tail_mass() && singular.size() < 16)
      singular.push_back({"singular generator " + m.label, m.measure.tail_upper() + m.measure.tail_lower()});
  });
  if (singular.empty()) {
    rep.verdict = Verdict::Holds;
    rep.label = "continuous from above";
    rep.vacuous = true;
    rep.narrative = "every generator is countably additive";
    return rep;
  }
  if (r.securities.dimension() == 1) {
    rep.verdict = Verdict::Fails;
    rep.label = "not continuous from above";
    rep.witnesses = singular;
    rep.narrative = "singular generator with a one-dimensional security space";
    return rep;
  }
  const ScenarioFamily cons = pricing_consistent(raw, r.securities, r.pricing, &r.acceptance);
  std::vector<Witness> survivors, singular_survivors;
  cons.for_each([&](const ScenarioMember& m, std::int64_t) {
    const double tail = m.measure.tail_upper() + m.measure.tail_lower();
    if (survivors.size() < 16) survivors.push_back({"consistent " + m.label, tail});
    if (tail > 0.0 && singular_survivors.size() < 16) singular_survivors.push_back({"singular consistent " + m.label, tail});
  });
  if (singular_survivors.empty()) {
    rep.verdict = Verdict::Holds;
    rep.label = "continuous from above";
    rep.witnesses = survivors;
    rep.narrative = "no price-consistent combination carries tail mass";
  } else {
    rep.verdict = Verdict::Fails;
    rep.label = "not continuous from above";
    rep.witnesses = singular_survivors;
    rep.narrative = "a price-consistent combination carries tail mass";
  }
  return rep;
}

}  // namespace mrisk
