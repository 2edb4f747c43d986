// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "mrisk/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mrisk/lp.hpp"

namespace mrisk {

namespace {

constexpr std::size_t kTailUp = static_cast<std::size_t>(-1);
constexpr std::size_t kTailLo = static_cast<std::size_t>(-2);

// Base measure charged coordinates with the values of X there. Tail masses
// become pseudo-atoms carrying the declared limits.
struct Charged {
  std::vector<std::size_t> slot;
  std::vector<double> w;
  std::vector<ExtReal> x;
};

ExtReal value_at(const RandomVariable& x, std::size_t slot) {
  if (slot == kTailUp || slot == kTailLo) {
    require(x.tail().has_value(), ErrorCode::TailUndefined, "tail mass acting on a variable without tail declaration");
    return slot == kTailUp ? x.tail()->upper.action() : x.tail()->lower.action();
  }
  return x[slot];
}

Charged charged(const GeneralizedMeasure& p, const RandomVariable& x) {
  require_same_space(p.space(), x.space());
  Charged c;
  for (const auto& [i, w] : p.entries()) {
    c.slot.push_back(i);
    c.w.push_back(w);
    c.x.emplace_back(x[i]);
  }
  for (auto [slot, mass] : {std::pair{kTailUp, p.tail_upper()}, std::pair{kTailLo, p.tail_lower()}}) {
    if (mass <= 0.0) continue;
    c.slot.push_back(slot);
    c.w.push_back(mass);
    c.x.push_back(value_at(x, slot));
  }
  return c;
}

GeneralizedMeasure measure_on(const SpacePtr& sp, const std::vector<std::size_t>& slot, const std::vector<double>& q,
                              std::string tag) {
  std::vector<GeneralizedMeasure::Entry> e;
  double up = 0.0, lo = 0.0;
  for (std::size_t k = 0; k < slot.size(); ++k) {
    if (q[k] <= 0.0) continue;
    if (slot[k] == kTailUp)
      up += q[k];
    else if (slot[k] == kTailLo)
      lo += q[k];
    else
      e.emplace_back(slot[k], q[k]);
  }
  return GeneralizedMeasure::sparse(sp, std::move(e), up, lo, std::move(tag));
}

ExtReal lse(const std::vector<double>& w, const std::vector<ExtReal>& x, double beta) {
  double mx = -HUGE_VAL;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] <= 0.0) continue;
    if (x[k].is_pos_inf()) return ExtReal::pos_inf();
    if (x[k].finite()) mx = std::max(mx, beta * x[k].value());
  }
  if (mx == -HUGE_VAL) return ExtReal::neg_inf();
  double s = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w[k] > 0.0 && x[k].finite()) s += w[k] * std::exp(beta * x[k].value() - mx);
  return (mx + std::log(s)) / beta;
}

// Greedy fill of the capped density in decreasing order of loss.
std::vector<double> tail_weights(const std::vector<double>& w, const std::vector<ExtReal>& x, double alpha) {
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
  const double cap = 1.0 / (1.0 - alpha);
  std::vector<double> q(w.size(), 0.0);
  double remaining = 1.0;
  for (std::size_t k : order) {
    if (remaining <= 0.0) break;
    const double take = std::min(w[k] * cap, remaining);
    q[k] = take;
    remaining -= take;
  }
  return q;
}

ExtReal weighted_sum(const std::vector<double>& q, const std::vector<ExtReal>& x) {
  ExtReal acc = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k)
    if (q[k] > 0.0) acc = acc + q[k] * x[k];
  return acc;
}

ExtReal tail_mean(const std::vector<double>& w, const std::vector<ExtReal>& x, double alpha) {
  return weighted_sum(tail_weights(w, x, alpha), x);
}

const GeneralizedMeasure& functional_base(const AcceptanceSpec& a) {
  if (const auto* e = std::get_if<Entropic>(&a.spec)) return e->base;
  if (const auto* v = std::get_if<AVaR>(&a.spec)) return v->base;
  fail(ErrorCode::InvalidArgument, "not a functional acceptance set");
}

// g(X - mU) on the charged coordinates.
ExtReal functional_value(const AcceptanceSpec& a, const Charged& cx, const std::vector<double>& u, double m) {
  std::vector<ExtReal> y(cx.x.size());
  for (std::size_t k = 0; k < y.size(); ++k) y[k] = cx.x[k] - ExtReal(m * u[k]);
  if (const auto* e = std::get_if<Entropic>(&a.spec)) return lse(cx.w, y, e->beta);
  return tail_mean(cx.w, y, std::get<AVaR>(a.spec).alpha);
}

std::vector<double> unit_values(const Charged& c, const RandomVariable& u) {
  std::vector<double> out(c.slot.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = value_at(u, c.slot[k]).value();
  return out;
}

double security_integral(const GeneralizedMeasure& mu, const RandomVariable& b) {
  ExtReal v = integrate(mu, b);
  require(v.finite(), ErrorCode::NotFinite, "security integral is infinite");
  return v.value();
}

RiskReport linear_primal(const std::vector<ScenarioMember>& fam, const SecuritySpace& s, const PricingFunctional& p,
                         const RandomVariable& x, const SolverOptions& opt) {
  RiskReport rep;
  const std::size_t d = s.dimension();
  std::vector<std::vector<double>> cols;
  std::vector<double> rhs;  // alpha_i - integral of X
  for (const auto& m : fam) {
    ExtReal v = integrate(m.measure, x);
    if (v.is_neg_inf()) continue;  // constraint never binds
    if (v.is_pos_inf()) {
      rep.value = ExtReal::pos_inf();
      rep.method = "lp";
      rep.note = "infeasible: scenario " + m.label + " integrates X to +inf";
      return rep;
    }
    std::vector<double> c(d);
    for (std::size_t j = 0; j < d; ++j) c[j] = security_integral(m.measure, s.basis[j]);
    cols.push_back(std::move(c));
    rhs.push_back(m.penalty - v.value());
  }
  require(!cols.empty(), ErrorCode::NotFinite, "no binding constraint: risk is -inf");

  if (cols.size() <= opt.direct_lp_rows) {
    LPProblem lp;
    lp.objective = p.prices;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      std::vector<double> row(d);
      for (std::size_t j = 0; j < d; ++j) row[j] = -cols[i][j];
      lp.G.push_back(std::move(row));
      lp.h.push_back(rhs[i]);
    }
    LPResult res = lp_solve(lp);
    rep.method = "lp";
    if (res.status == LPStatus::Infeasible) {
      rep.value = ExtReal::pos_inf();
      rep.note = "infeasible: no security makes X acceptable";
      return rep;
    }
    require(res.status == LPStatus::Optimal, ErrorCode::NotFinite, "primal LP unbounded: risk is -inf");
    rep.value = res.optimum;
    rep.security = res.argument;
    return rep;
  }

  // Transposed form: max sum t_i (v_i - alpha_i) s.t. sum t_i M_i = p, t >= 0.
  LPProblem lp;
  lp.sense = Sense::Maximize;
  lp.A.assign(d, std::vector<double>(cols.size()));
  lp.b = p.prices;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    lp.objective.push_back(-rhs[i]);
    lp.nonnegative.push_back(true);
    for (std::size_t j = 0; j < d; ++j) lp.A[j][i] = cols[i][j];
  }
  LPResult res = lp_solve(lp);
  rep.method = "lp-transposed";
  if (res.status == LPStatus::Unbounded) {
    rep.value = ExtReal::pos_inf();
    rep.note = "infeasible: no security makes X acceptable";
    return rep;
  }
  require(res.status == LPStatus::Optimal, ErrorCode::NotFinite, "no consistent scenario combination: risk is -inf");
  rep.value = res.optimum;
  rep.security = res.duals;
  return rep;
}

RiskReport primal_spec(const AcceptanceSpec& a, const SecuritySpace& s, const PricingFunctional& p,
                       const RandomVariable& x, const SolverOptions& opt) {
  if (auto lin = flatten_linear(a)) return linear_primal(lin->family, s, p, x, opt);
  if (const auto* ix = std::get_if<IndexedDual>(&a.spec)) {
    std::vector<ScenarioMember> fam;
    for (std::int64_t k = 1; k <= ix->k_max; ++k)
      if (auto m = ix->generator(k)) fam.push_back(std::move(*m));
    RiskReport rep = linear_primal(fam, s, p, x, opt);
    rep.cutoff_limited = true;
    rep.note = "cutoff k_max = " + std::to_string(ix->k_max);
    return rep;
  }
  require(s.dimension() == 1, ErrorCode::UnsupportedCombination,
          "functional acceptance sets need a one-dimensional security space");
  if (const auto* in = std::get_if<Intersection>(&a.spec)) {
    RiskReport best;
    best.value = ExtReal::neg_inf();
    for (const auto& m : in->members) {
      RiskReport sub = primal_spec(m, s, p, x, opt);
      if (sub.value > best.value) best = sub;
    }
    best.method = "max-of-members(" + best.method + ")";
    return best;
  }
  ExtReal m = functional_root(a, x, s.unit(), opt);
  RiskReport rep;
  rep.method = "root";
  rep.value = p.prices[0] * m;
  if (m.finite()) rep.security = std::vector<double>{m.value()};
  return rep;
}

}  // namespace

// ---------------------------------------------------------------- evaluators

ExtReal avar_eval(const GeneralizedMeasure& p, double alpha, const RandomVariable& x) {
  require(alpha > 0.0 && alpha < 1.0, ErrorCode::InvalidArgument, "alpha must lie in (0,1)");
  Charged c = charged(p, x);
  return tail_mean(c.w, c.x, alpha);
}

ExtReal entropic_eval(const GeneralizedMeasure& p, double beta, const RandomVariable& x) {
  require(beta > 0.0, ErrorCode::InvalidArgument, "beta must be positive");
  Charged c = charged(p, x);
  return lse(c.w, c.x, beta);
}

GeneralizedMeasure avar_worst_case(const GeneralizedMeasure& p, double alpha, const RandomVariable& x) {
  Charged c = charged(p, x);
  return measure_on(p.space(), c.slot, tail_weights(c.w, c.x, alpha), "tail-mean maximizer");
}

GeneralizedMeasure gibbs_measure(const GeneralizedMeasure& p, double beta, const RandomVariable& x) {
  Charged c = charged(p, x);
  double mx = -HUGE_VAL;
  for (std::size_t k = 0; k < c.w.size(); ++k) {
    require(!c.x[k].is_pos_inf(), ErrorCode::NotFinite, "Gibbs measure of a variable with infinite exponential moment");
    if (c.x[k].finite()) mx = std::max(mx, beta * c.x[k].value());
  }
  require(mx > -HUGE_VAL, ErrorCode::NotFinite, "Gibbs measure of a variable equal to -inf");
  std::vector<double> q(c.w.size(), 0.0);
  double s = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (c.x[k].finite()) q[k] = c.w[k] * std::exp(beta * c.x[k].value() - mx);
    s += q[k];
  }
  for (double& v : q) v /= s;
  return measure_on(p.space(), c.slot, q, "gibbs");
}

ExtReal relative_entropy(const GeneralizedMeasure& q, const GeneralizedMeasure& p) {
  require_same_space(q.space(), p.space());
  double h = 0.0;
  auto term = [&](double qv, double pv) -> bool {
    if (qv <= 0.0) return true;
    if (pv <= 0.0) return false;
    h += qv * std::log(qv / pv);
    return true;
  };
  for (const auto& [i, w] : q.entries())
    if (!term(w, p.weight(i))) return ExtReal::pos_inf();
  if (!term(q.tail_upper(), p.tail_upper()) || !term(q.tail_lower(), p.tail_lower())) return ExtReal::pos_inf();
  return std::max(h, 0.0);
}

ExtReal functional_root(const AcceptanceSpec& a, const RandomVariable& x, const RandomVariable& u,
                        const SolverOptions& opt) {
  const GeneralizedMeasure& base = functional_base(a);
  Charged c = charged(base, x);
  std::vector<double> uv = unit_values(c, u);
  for (double v : uv) require(v > 0.0, ErrorCode::InvalidArgument, "U must be positive on every charged atom");
  const bool cash = std::all_of(uv.begin(), uv.end(), [](double v) { return v == 1.0; });
  if (cash) return functional_value(a, c, uv, 0.0);  // g(X - m) = g(X) - m
  auto phi = [&](double m) { return functional_value(a, c, uv, m); };
  if (phi(opt.bracket_cap).is_pos_inf()) return ExtReal::pos_inf();
  double lo = -1.0, hi = 1.0;
  while (phi(hi) > ExtReal(0.0)) {
    hi *= 2.0;
    if (hi > opt.bracket_cap) fail(ErrorCode::BracketFailure, "no acceptable multiple of U below the expansion cap");
  }
  while (phi(lo) <= ExtReal(0.0)) {
    lo *= 2.0;
    if (-lo > opt.bracket_cap) fail(ErrorCode::BracketFailure, "acceptable for every multiple of U: risk is -inf");
  }
  for (int it = 0; it < 400 && hi - lo > opt.tol_m; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (phi(mid) <= ExtReal(0.0) ? hi : lo) = mid;
  }
  return hi;
}

AdaptiveMembers entropic_scenarios(const Entropic& e, const RandomVariable& u, double unit_price) {
  AdaptiveMembers out;
  out.label = "gibbs";
  out.maximize = [e, u, unit_price](const RandomVariable& x) -> AdaptiveResult {
    ExtReal m = functional_root(AcceptanceSpec(e), x, u);
    if (!m.finite()) return {unit_price * m, std::nullopt};
    RandomVariable shifted = subtract(x, scale(m.value(), u));
    GeneralizedMeasure q = gibbs_measure(e.base, e.beta, shifted);
    const double eu = security_integral(q, u);
    const double t = unit_price / eu;
    ScenarioMember mem{q.scaled(t).retagged("gibbs"), t * relative_entropy(q, e.base).value() / e.beta, "gibbs"};
    ExtReal v = integrate(mem.measure, x) - ExtReal(mem.penalty);
    return {v, mem};
  };
  return out;
}

AdaptiveMembers avar_scenarios(const AVaR& a, const RandomVariable& u, double unit_price) {
  AdaptiveMembers out;
  out.label = "tail-mean";
  out.zero_penalty = true;
  out.maximize = [a, u, unit_price](const RandomVariable& x) -> AdaptiveResult {
    ExtReal m = functional_root(AcceptanceSpec(a), x, u);
    if (!m.finite()) return {unit_price * m, std::nullopt};
    RandomVariable shifted = subtract(x, scale(m.value(), u));
    GeneralizedMeasure q = avar_worst_case(a.base, a.alpha, shifted);
    const double t = unit_price / security_integral(q, u);
    ScenarioMember mem{q.scaled(t).retagged("tail-mean"), 0.0, "tail-mean"};
    return {integrate(mem.measure, x), mem};
  };
  return out;
}

// ---------------------------------------------------------------- support function

ExtReal sigma_A(const AcceptanceSpec& a, const GeneralizedMeasure& mu) {
  if (auto lin = flatten_linear(a)) {
    for (const auto& m : lin->family) require_same_space(m.measure.space(), mu.space());
    // Coordinates touched by mu or any member.
    std::vector<std::size_t> coords;
    for (const auto& [i, w] : mu.entries()) coords.push_back(i);
    for (const auto& m : lin->family)
      for (const auto& [i, w] : m.measure.entries()) coords.push_back(i);
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    const std::size_t K = lin->family.size();
    if (K == 0) return mu.total_mass() == 0.0 ? ExtReal(0.0) : ExtReal::pos_inf();
    LPProblem lp;
    for (const auto& m : lin->family) {
      lp.objective.push_back(m.penalty);
      lp.nonnegative.push_back(true);
    }
    auto add_row = [&](auto coef, double target) {
      std::vector<double> row(K);
      for (std::size_t i = 0; i < K; ++i) row[i] = coef(lin->family[i].measure);
      lp.A.push_back(std::move(row));
      lp.b.push_back(target);
    };
    for (std::size_t c : coords) add_row([c](const GeneralizedMeasure& m) { return m.weight(c); }, mu.weight(c));
    add_row([](const GeneralizedMeasure& m) { return m.tail_upper(); }, mu.tail_upper());
    add_row([](const GeneralizedMeasure& m) { return m.tail_lower(); }, mu.tail_lower());
    LPResult res = lp_solve(lp);
    if (res.status == LPStatus::Infeasible) return ExtReal::pos_inf();
    require(res.status == LPStatus::Optimal, ErrorCode::NumericalBreakdown, "support function LP unbounded");
    return std::max(res.optimum, 0.0);
  }
  if (const auto* e = std::get_if<Entropic>(&a.spec)) {
    const double c = mu.total_mass();
    if (c == 0.0) return 0.0;
    ExtReal h = relative_entropy(mu.scaled(1.0 / c), e->base);
    return (c / e->beta) * h;
  }
  if (const auto* v = std::get_if<AVaR>(&a.spec)) {
    const double c = mu.total_mass();
    if (c == 0.0) return 0.0;
    const double cap = 1.0 / (1.0 - v->alpha);
    auto ok = [cap](double q, double p) { return q <= p * cap * (1.0 + 1e-9) + 1e-15; };
    for (const auto& [i, w] : mu.entries())
      if (!ok(w / c, v->base.weight(i))) return ExtReal::pos_inf();
    if (!ok(mu.tail_upper() / c, v->base.tail_upper()) || !ok(mu.tail_lower() / c, v->base.tail_lower()))
      return ExtReal::pos_inf();
    return 0.0;
  }
  fail(ErrorCode::Unsupported, std::string("support function of ") + a.kind_name());
}

// ---------------------------------------------------------------- risk

RiskReport primal_risk(const Regime& r, const RandomVariable& x, const SolverOptions& opt) {
  require_same_space(r.space(), x.space());
  return primal_spec(r.acceptance, r.securities, r.pricing, x, opt);
}

RiskReport dual_risk(const Regime& r, const RandomVariable& x, const ScenarioFamily& fam, double tol_sg) {
  require_same_space(r.space(), x.space());
  require(!fam.empty(), ErrorCode::EmptyFamily, "no pricing-consistent scenario");
  RiskReport rep;
  rep.method = "dual";
  rep.value = ExtReal::neg_inf();
  bool any = false;
  auto consider = [&](const ScenarioMember& m, std::optional<std::int64_t> index) {
    ExtReal v = integrate(m.measure, x) - ExtReal(m.penalty);
    if (!any || v > rep.value) {
      rep.value = v;
      rep.scenario = m;
      rep.scenario_index = index;
    }
    any = true;
  };
  for (const auto& m : fam.members) consider(m, std::nullopt);
  for (const auto& ix : fam.indexed) {
    for (std::int64_t k = 1; k <= ix.k_max; ++k)
      if (auto m = ix.generator(k)) consider(*m, k);
    rep.cutoff_value = rep.value;
    std::optional<ExtReal> lim;
    if (ix.oracle && ix.oracle->limit) lim = ix.oracle->limit(x);
    if (lim) {
      rep.oracle_value = *lim;
      if (!any || *lim > rep.value + ExtReal(tol_sg)) {
        rep.value = *lim;
        rep.scenario.reset();
        rep.scenario_index.reset();
        rep.singular_limit = true;
        any = true;
      }
    } else {
      rep.cutoff_limited = true;
    }
  }
  for (const auto& ad : fam.adaptive) {
    AdaptiveResult res = ad.maximize(x);
    if (!any || res.value > rep.value) {
      rep.value = res.value;
      rep.scenario = res.member;
      rep.scenario_index.reset();
      rep.singular_limit = false;
    }
    any = true;
  }
  require(any, ErrorCode::EmptyFamily, "no pricing-consistent scenario produced a member");
  require(!rep.value.is_neg_inf(), ErrorCode::NotFinite, "improper value -inf");
  if (rep.singular_limit) rep.method = "dual+oracle";
  return rep;
}

}  // namespace mrisk
