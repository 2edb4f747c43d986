// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "mrisk/regime.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "mrisk/lp.hpp"
#include "mrisk/solver.hpp"

namespace mrisk {

namespace {

void check_probability(const GeneralizedMeasure& p, const char* what) {
  require(std::fabs(p.total_mass() - 1.0) <= 1e-9, ErrorCode::InvalidArgument,
          std::string(what) + " base must be a probability");
}

void check_penalties(const std::vector<ScenarioMember>& family) {
  for (const auto& m : family)
    require(m.penalty >= 0.0 && std::isfinite(m.penalty), ErrorCode::InvalidArgument, "penalties must be finite and >= 0");
}

// Exact translation. A raw member priced out by the securities may end below
// zero; consistent members stay nonnegative because rho(0) >= -their penalty.
double shifted_penalty(double alpha, double delta) {
  const double v = alpha + delta;
  return std::fabs(v) <= 1e-15 * (1.0 + std::fabs(alpha)) ? 0.0 : v;
}

// Integral of a bounded security against a measure.
double security_integral(const GeneralizedMeasure& mu, const RandomVariable& b) {
  ExtReal v = integrate(mu, b);
  require(v.finite(), ErrorCode::NotFinite, "security integral is infinite");
  return v.value();
}

}  // namespace

// ---------------------------------------------------------------- AcceptanceSpec

AcceptanceSpec::AcceptanceSpec(LinearDual a) : spec(std::move(a)) {
  check_penalties(std::get<LinearDual>(spec).family);
}

AcceptanceSpec::AcceptanceSpec(IndexedDual a) : spec(std::move(a)) {
  const auto& ix = std::get<IndexedDual>(spec);
  require(static_cast<bool>(ix.generator), ErrorCode::InvalidArgument, "indexed family without generator");
  require(ix.k_max >= 1, ErrorCode::InvalidArgument, "k_max must be >= 1");
}

AcceptanceSpec::AcceptanceSpec(Entropic a) : spec(std::move(a)) {
  const auto& e = std::get<Entropic>(spec);
  require(e.beta > 0.0 && std::isfinite(e.beta), ErrorCode::InvalidArgument, "beta must be positive");
  check_probability(e.base, "entropic");
}

AcceptanceSpec::AcceptanceSpec(AVaR a) : spec(std::move(a)) {
  const auto& v = std::get<AVaR>(spec);
  require(v.alpha > 0.0 && v.alpha < 1.0, ErrorCode::InvalidArgument, "alpha must lie in (0,1)");
  check_probability(v.base, "AVaR");
}

AcceptanceSpec::AcceptanceSpec(Intersection a) : spec(std::move(a)) {
  require(!std::get<Intersection>(spec).members.empty(), ErrorCode::InvalidArgument, "empty intersection");
}

const char* AcceptanceSpec::kind_name() const {
  switch (spec.index()) {
    case 0: return "linear_dual";
    case 1: return "indexed_dual";
    case 2: return "entropic";
    case 3: return "avar";
    default: return "intersection";
  }
}

bool AcceptanceSpec::linear() const { return flatten_linear(*this).has_value(); }

bool AcceptanceSpec::nonlinear() const {
  if (std::holds_alternative<Entropic>(spec) || std::holds_alternative<AVaR>(spec)) return true;
  if (const auto* in = std::get_if<Intersection>(&spec))
    for (const auto& m : in->members)
      if (m.nonlinear()) return true;
  return false;
}

SpacePtr AcceptanceSpec::space() const {
  if (const auto* l = std::get_if<LinearDual>(&spec)) return l->family.empty() ? nullptr : l->family.front().measure.space();
  if (const auto* ix = std::get_if<IndexedDual>(&spec)) {
    auto m = ix->generator(1);
    return m ? m->measure.space() : nullptr;
  }
  if (const auto* e = std::get_if<Entropic>(&spec)) return e->base.space();
  if (const auto* v = std::get_if<AVaR>(&spec)) return v->base.space();
  for (const auto& m : std::get<Intersection>(spec).members)
    if (auto s = m.space()) return s;
  return nullptr;
}

std::optional<LinearDual> flatten_linear(const AcceptanceSpec& a) {
  if (const auto* l = std::get_if<LinearDual>(&a.spec)) return *l;
  if (const auto* in = std::get_if<Intersection>(&a.spec)) {
    LinearDual out;
    for (const auto& m : in->members) {
      auto f = flatten_linear(m);
      if (!f) return std::nullopt;
      out.family.insert(out.family.end(), f->family.begin(), f->family.end());
    }
    return out;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- securities

SecuritySpace::SecuritySpace(std::vector<RandomVariable> b, std::size_t pos) : basis(std::move(b)), positive_index(pos) {
  require(!basis.empty(), ErrorCode::InvalidArgument, "security space needs at least one basis vector");
  require(positive_index < basis.size(), ErrorCode::InvalidArgument, "positive index out of range");
  const SpacePtr& sp = basis.front().space();
  for (const auto& v : basis) {
    require_same_space(sp, v.space());
    require(v.bounded(), ErrorCode::InvalidArgument, "security basis vectors must be bounded");
  }
  // Coordinates: atoms, then declared tail limits.
  const std::size_t n = sp->size();
  const bool tails = sp->embedded();
  const std::size_t rows = n + (tails ? 2 : 0);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) M(i, j) = basis[j][i];
    if (tails && basis[j].tail()) {
      M(n, j) = basis[j].tail()->upper.limit;
      M(n + 1, j) = sp->two_sided() ? basis[j].tail()->lower.limit : 0.0;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  lu.setThreshold(1e-10);
  require(static_cast<std::size_t>(lu.rank()) == basis.size(), ErrorCode::InvalidArgument,
          "security basis is linearly dependent");
  const RandomVariable& u = basis[positive_index];
  bool positive_somewhere = false;
  for (double v : u.values()) {
    require(v >= 0.0, ErrorCode::InvalidArgument, "designated security must be nonnegative");
    positive_somewhere = positive_somewhere || v > 0.0;
  }
  if (u.tail()) {
    require(u.tail()->upper.limit >= 0.0 && (!sp->two_sided() || u.tail()->lower.limit >= 0.0),
            ErrorCode::InvalidArgument, "designated security must be nonnegative");
  }
  require(positive_somewhere, ErrorCode::InvalidArgument, "designated security vanishes on every atom");
}

SecuritySpace SecuritySpace::cash(SpacePtr space) { return SecuritySpace({RandomVariable::constant(std::move(space), 1.0)}, 0); }

RandomVariable SecuritySpace::combine(const std::vector<double>& z) const {
  require(z.size() == basis.size(), ErrorCode::InvalidArgument, "coefficient count differs from dimension");
  RandomVariable out = scale(z[0], basis[0]);
  for (std::size_t j = 1; j < basis.size(); ++j) out = add(out, scale(z[j], basis[j]));
  return out;
}

double PricingFunctional::operator()(const std::vector<double>& z) const {
  require(z.size() == prices.size(), ErrorCode::InvalidArgument, "coefficient count differs from price count");
  double s = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) s += z[j] * prices[j];
  return s;
}

bool pricing_strictly_positive(const SecuritySpace& s, const PricingFunctional& p) {
  const std::size_t d = s.dimension();
  const SpacePtr& sp = s.basis.front().space();
  if (d == 1) {
    const RandomVariable& b = s.basis[0];
    bool nonneg = true, nonpos = true;
    for (double v : b.values()) {
      nonneg = nonneg && v >= 0.0;
      nonpos = nonpos && v <= 0.0;
    }
    if (nonneg) return p.prices[0] > 0.0;
    if (nonpos) return p.prices[0] < 0.0;
    return true;
  }
  LPProblem lp;
  lp.objective.assign(d, 0.0);
  auto coord_row = [&](auto value_of) {
    std::vector<double> row(d);
    for (std::size_t j = 0; j < d; ++j) row[j] = -value_of(s.basis[j]);
    lp.G.push_back(row);
    lp.h.push_back(0.0);
  };
  for (std::size_t i = 0; i < sp->size(); ++i) coord_row([i](const RandomVariable& b) { return b[i]; });
  if (sp->embedded()) {
    coord_row([](const RandomVariable& b) { return b.tail() ? b.tail()->upper.limit : 0.0; });
    if (sp->two_sided()) coord_row([](const RandomVariable& b) { return b.tail() ? b.tail()->lower.limit : 0.0; });
  }
  lp.G.push_back(p.prices);
  lp.h.push_back(0.0);
  std::vector<double> norm(d, 0.0);
  for (std::size_t j = 0; j < d; ++j)
    for (double v : s.basis[j].values()) norm[j] += v;
  lp.A.push_back(norm);
  lp.b.push_back(1.0);
  return lp_solve(lp).status == LPStatus::Infeasible;
}

// ---------------------------------------------------------------- Regime

Regime::Regime(AcceptanceSpec a, SecuritySpace s, PricingFunctional p, std::string n, std::optional<GeneralizedMeasure> ref)
    : acceptance(std::move(a)), securities(std::move(s)), pricing(std::move(p)), name(std::move(n)), reference(std::move(ref)) {
  require(pricing.prices.size() == securities.dimension(), ErrorCode::InvalidArgument, "one price per basis vector");
  for (double v : pricing.prices) require(std::isfinite(v), ErrorCode::InvalidArgument, "prices must be finite");
  if (auto asp = acceptance.space()) require_same_space(asp, space());
  if (reference) {
    require_same_space(reference->space(), space());
    check_probability(*reference, "reference");
  }
  require(pricing_strictly_positive(securities, pricing), ErrorCode::InvalidArgument,
          "pricing functional is not strictly positive on S");
}

Regime cash_regime(AcceptanceSpec a, std::string name, std::optional<GeneralizedMeasure> reference) {
  SpacePtr sp = a.space();
  require(sp != nullptr, ErrorCode::InvalidArgument, "acceptance specification has no space");
  return Regime(std::move(a), SecuritySpace::cash(sp), PricingFunctional{{1.0}}, std::move(name), std::move(reference));
}

namespace {

// Columns M_i = (integral of B_j against mu_i)_j.
std::vector<std::vector<double>> price_columns(const SecuritySpace& s, const std::vector<ScenarioMember>& fam) {
  std::vector<std::vector<double>> cols;
  cols.reserve(fam.size());
  for (const auto& m : fam) {
    std::vector<double> c(s.dimension());
    for (std::size_t j = 0; j < s.dimension(); ++j) c[j] = security_integral(m.measure, s.basis[j]);
    cols.push_back(std::move(c));
  }
  return cols;
}

bool unit_positive_on(const RandomVariable& u, const GeneralizedMeasure& base) {
  for (const auto& [i, w] : base.entries())
    if (u[i] <= 0.0) return false;
  if (base.tail_upper() > 0.0 && (!u.tail() || u.tail()->upper.limit <= 0.0)) return false;
  if (base.tail_lower() > 0.0 && (!u.tail() || u.tail()->lower.limit <= 0.0)) return false;
  return true;
}

ValidationReport validate_spec(const AcceptanceSpec& a, const SecuritySpace& s, const PricingFunctional& p) {
  ValidationReport rep;
  const std::size_t d = s.dimension();
  if (auto lin = flatten_linear(a)) {
    rep.check = "lp-sup-at-zero";
    if (lin->family.empty()) {
      rep.narrative = "no constraints: the acceptance set is the whole space, sup unbounded";
      return rep;
    }
    auto cols = price_columns(s, lin->family);
    LPProblem lp;
    lp.sense = Sense::Maximize;
    lp.objective = p.prices;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      lp.G.push_back(cols[i]);
      lp.h.push_back(lin->family[i].penalty);
    }
    auto res = lp_solve(lp);
    rep.valid = res.status == LPStatus::Optimal;
    rep.narrative = std::string("sup{p(Z) : Z in A} is ") + (rep.valid ? "bounded" : status_name(res.status));
    return rep;
  }
  if (const auto* ix = std::get_if<IndexedDual>(&a.spec)) {
    rep.check = "consistent-combination-feasibility";
    LPProblem lp;
    lp.A.assign(d, {});
    lp.b = p.prices;
    for (std::int64_t k = 1; k <= ix->k_max; ++k) {
      auto m = ix->generator(k);
      if (!m) continue;
      for (std::size_t j = 0; j < d; ++j) lp.A[j].push_back(security_integral(m->measure, s.basis[j]));
      lp.objective.push_back(0.0);
      lp.nonnegative.push_back(true);
    }
    if (lp.objective.empty()) {
      rep.narrative = "indexed family produced no members";
      return rep;
    }
    rep.valid = lp_solve(lp).status == LPStatus::Optimal;
    rep.narrative = rep.valid ? "a consistent combination exists up to the cutoff" : "no consistent combination";
    return rep;
  }
  require(d == 1, ErrorCode::UnsupportedCombination, "nonlinear acceptance needs a one-dimensional security space");
  const RandomVariable& u = s.unit();
  if (const auto* in = std::get_if<Intersection>(&a.spec)) {
    rep.check = "member-wise";
    for (const auto& m : in->members) {
      auto sub = validate_spec(m, s, p);
      if (sub.valid) {
        rep.valid = true;
        rep.narrative = "bounded through member " + std::string(m.kind_name());
        return rep;
      }
    }
    rep.narrative = "no member bounds the supremum";
    return rep;
  }
  const GeneralizedMeasure& base =
      std::holds_alternative<Entropic>(a.spec) ? std::get<Entropic>(a.spec).base : std::get<AVaR>(a.spec).base;
  rep.check = "monotone-root";
  rep.valid = unit_positive_on(u, base) && p.prices[0] > 0.0;
  rep.narrative = rep.valid ? "U > 0 on every charged atom: m -> g(X - mU) strictly decreasing"
                            : "U vanishes on a charged atom";
  return rep;
}

AcceptanceSpec shifted(const AcceptanceSpec& a, double r, const RandomVariable& u) {
  if (const auto* l = std::get_if<LinearDual>(&a.spec)) {
    LinearDual out = *l;
    for (auto& m : out.family) m.penalty = shifted_penalty(m.penalty, r * security_integral(m.measure, u));
    AcceptanceSpec spec{LinearDual{}};  // bypasses the user-input penalty check
    spec.spec = std::move(out);
    return spec;
  }
  if (const auto* ix = std::get_if<IndexedDual>(&a.spec)) {
    IndexedDual out = *ix;
    auto gen = ix->generator;
    out.generator = [gen, r, u](std::int64_t k) -> std::optional<ScenarioMember> {
      auto m = gen(k);
      if (m) m->penalty = shifted_penalty(m->penalty, r * security_integral(m->measure, u));
      return m;
    };
    if (ix->oracle) {
      auto o = std::make_shared<AsymptoticOracle>(*ix->oracle);
      auto lim = ix->oracle->limit;
      o->limit = [lim, r, u](const RandomVariable& y) { return lim(subtract(y, scale(r, u))); };
      out.oracle = o;
    }
    return out;
  }
  if (const auto* in = std::get_if<Intersection>(&a.spec)) {
    Intersection out;
    for (const auto& m : in->members) out.members.push_back(shifted(m, r, u));
    return out;
  }
  // Functional sets are normalized by construction; a nonzero r here is root-finding noise.
  require(std::fabs(r) <= 10.0 * SolverOptions{}.tol_m, ErrorCode::Unsupported,
          "translation of a functional acceptance set");
  return a;
}

}  // namespace

ValidationReport validate_regime(const Regime& r) {
  return validate_spec(r.acceptance, r.securities, r.pricing);
}

Regime normalize_regime(const Regime& r) {
  RiskReport at_zero = primal_risk(r, RandomVariable::constant(r.space(), 0.0));
  require(at_zero.value.finite(), ErrorCode::NotFinite, "rho(0) is not finite");
  const double rho0 = at_zero.value.value();
  if (rho0 == 0.0) return r;
  const double shift = rho0 / r.unit_price();
  return Regime(shifted(r.acceptance, shift, r.securities.unit()), r.securities, r.pricing, r.name, r.reference);
}

}  // namespace mrisk
