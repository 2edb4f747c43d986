// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mrisk/builtins.hpp"
#include "mrisk/lp.hpp"
#include "mrisk/subgrad.hpp"
#include "support.hpp"

using namespace mrisk;

namespace {

class Criterion {
 public:
  Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {}

  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_++ == 0) first_ = what;
  }
  void close(const std::string& what, double got, double want, double tol) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": got " << got << ", expected " << want << " within " << tol;
    expect(std::isfinite(got) && std::fabs(got - want) <= tol, os.str());
  }
  void run(const std::function<void(Criterion&)>& body) {
    try {
      body(*this);
    } catch (const std::exception& e) {
      expect(false, std::string("exception: ") + e.what());
    }
  }
  bool report() const {
    if (failures_ == 0) {
      std::printf("PASS criterion %d: %s (%zu checks)\n", id_, title_.c_str(), checks_);
    } else {
      std::printf("FAIL criterion %d: %s (%zu of %zu checks failed; first: %s)\n", id_, title_.c_str(), failures_,
                  checks_, first_.c_str());
    }
    std::fflush(stdout);
    return failures_ == 0;
  }

 private:
  int id_;
  std::string title_;
  std::size_t checks_ = 0, failures_ = 0;
  std::string first_;
};

double fin(const ExtReal& v) { return v.finite() ? v.value() : NAN; }

RandomVariable identity_on(const SpacePtr& sp) {
  return RandomVariable::from_key(sp, [](std::int64_t k) { return double(k); }, Tail::identity());
}

const BuiltinInput& input_named(const BuiltinCase& c, const std::string& name) {
  for (const auto& in : c.inputs)
    if (in.name == name) return in;
  throw Error(ErrorCode::ConfigError, "missing builtin input " + name);
}

std::vector<double> powers_of_two(int lo, int hi) {
  std::vector<double> v;
  for (int i = lo; i <= hi; ++i) v.push_back(std::ldexp(1.0, i));
  return v;
}

// ---------------------------------------------------------------- 1

void symmetric_gap(Criterion& c) {
  Evaluator ev(symmetric_spread_regime(4096, 4096, true));
  const RandomVariable id = identity_on(ev.regime().space());
  c.close("rho_tilde(id)", fin(rho_tilde(ev, id).value), 0.0, 1e-9);
  const auto m_grid = powers_of_two(0, 6), n_grid = powers_of_two(0, 10);
  EtaResult e = eta(ev, id, n_grid, m_grid);
  c.close("eta(id)", fin(e.value.value), 0.5, 1e-3);

  const auto& fam = std::get<IndexedDual>(ev.regime().acceptance.spec);
  oracle::Rng rng(2026);
  for (int s = 0; s < 20; ++s) {
    const double m = rng.integer(1, 64);
    const double n = m + rng.integer(1, 1000);
    const std::int64_t k = rng.integer(1, 4096);
    auto q = fam.generator(k);
    c.expect(q.has_value(), "generator returned nothing");
    if (!q) continue;
    const double got = fin(integrate(q->measure, truncate(id, Truncation(n, m))));
    c.close("E_Q_k at (k,m,n)=(" + std::to_string(k) + "," + std::to_string(m) + "," + std::to_string(n) + ")", got,
            oracle::spread_case_split(k, m, n), 1e-14);
  }
}

// ---------------------------------------------------------------- 2

void tail_mass_market(Criterion& c) {
  BuiltinCase bc = make_builtin("example6.1");
  Evaluator ev(bc.regime());
  const SpacePtr& sp = ev.regime().space();
  oracle::Rng rng(61);
  for (int t = 0; t < 50; ++t) {
    oracle::Vec xs = rng.vec(sp->size(), -5.0, 5.0);
    const double limit = rng.uniform(-5.0, 5.0);
    RandomVariable x(sp, xs, Tail::limit(limit));
    double expected = 0.0;
    for (std::size_t i = 0; i < sp->size(); ++i) expected += xs[i] * std::ldexp(1.0, -static_cast<int>(*sp->embedding(i)));
    c.close("primal risk", fin(primal_risk(ev.regime(), x).value), expected, 1e-7);
  }
  const auto members = ev.consistent().materialize();
  c.expect(members.size() == 1, "consistent family has " + std::to_string(members.size()) + " members");
  for (const auto& m : members) {
    c.expect(!m.measure.has_tail_mass(), "tail-mass functional survived");
    for (std::size_t i = 0; i < sp->size(); ++i)
      c.close("surviving density", m.measure.weight(i), std::ldexp(1.0, -static_cast<int>(*sp->embedding(i))), 1e-15);
  }
  c.expect(continuity_above_diagnostic(bc.regime()).label == "continuous from above", "two-dimensional hedge");
  bool saw_cash = false;
  for (const auto& v : bc.variants) {
    if (v.regime.securities.dimension() != 1) continue;
    saw_cash = true;
    c.expect(continuity_above_diagnostic(v.regime).label == "not continuous from above", "cash hedge");
  }
  c.expect(saw_cash, "no cash variant");
}

// ---------------------------------------------------------------- 3

void tail_average(Criterion& c) {
  oracle::Rng rng(65);
  auto sp10 = SampleSpace::finite(10);
  for (int t = 0; t < 100; ++t) {
    auto pw = rng.simplex(10);
    auto xs = rng.vec(10, -10.0, 10.0);
    const double alpha = rng.uniform(0.01, 0.95);
    // sup E_Q[X] over 0 <= q_i <= p_i / (1 - alpha), sum q = 1
    LPProblem lp;
    lp.sense = Sense::Maximize;
    lp.objective = xs;
    lp.nonnegative.assign(10, true);
    for (std::size_t i = 0; i < 10; ++i) {
      std::vector<double> row(10, 0.0);
      row[i] = 1.0;
      lp.G.push_back(row);
      lp.h.push_back(pw[i] / (1.0 - alpha));
    }
    lp.A.push_back(std::vector<double>(10, 1.0));
    lp.b.push_back(1.0);
    LPResult r = lp_solve(lp);
    c.expect(r.status == LPStatus::Optimal, "dual LP not optimal");
    c.close("tail mean vs LP", fin(avar_eval(GeneralizedMeasure(sp10, pw), alpha, RandomVariable(sp10, xs))), r.optimum,
            1e-9);
  }

  BuiltinCase bc = make_builtin("example6.5");
  const Regime& reg = bc.regime();
  const auto& av = std::get<AVaR>(reg.acceptance.spec);
  const SpacePtr& sp = reg.space();
  const RandomVariable& unit = reg.securities.unit();
  c.expect(unit.values().front() != unit.values().back(), "hedge is constant");
  for (int t = 0; t < 100; ++t) {
    auto xs = rng.vec(sp->size(), -5.0, 5.0);
    auto f = [&](double m) {
      oracle::Vec y(xs.size());
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = xs[i] - m * unit[i];
      return oracle::avar(av.base.dense(), av.alpha, y);
    };
    const double expected = oracle::bisect_decreasing(f, -100.0, 100.0) * reg.unit_price();
    c.close("root find", fin(primal_risk(reg, RandomVariable(sp, xs, Tail::limit(0.0))).value), expected, 1e-8);
  }

  Evaluator ev(reg);
  for (int t = 0; t < 20; ++t) {
    const double rate = rng.uniform(0.1, 3.0);
    const bool up = t % 2 == 0;
    std::vector<double> xs(sp->size());
    for (std::size_t i = 0; i < xs.size(); ++i)
      xs[i] = (up ? 1.0 : -1.0) * rate * static_cast<double>(*sp->embedding(i)) + rng.uniform(-1.0, 1.0);
    Tail tail = up ? Tail{TailEnd::pos_inf(rate), TailEnd::pos_inf(rate)} : Tail{TailEnd::neg_inf(-rate), TailEnd::neg_inf(-rate)};
    ExtensionReport rep = regularity_check(ev, RandomVariable(sp, xs, tail));
    c.expect(rep.gap.finite() && std::fabs(rep.gap.value()) <= 1e-6, "regularity gap " + rep.gap.str());
    c.expect(rep.verdict == RegularityVerdict::Regular, std::string("verdict ") + regularity_name(rep.verdict));
  }
}

// ---------------------------------------------------------------- 4

void entropic_case(Criterion& c) {
  BuiltinCase bc = make_builtin("example6.4");
  Evaluator ev(bc.regime());
  const auto& ent = std::get<Entropic>(ev.regime().acceptance.spec);
  const auto base = ent.base.dense();
  for (const auto& in : bc.inputs) {
    const RandomVariable& x = in.finest();
    const double expected = oracle::entropic(base, ent.beta, x.values());
    c.close(in.name + " rho_tilde", fin(rho_tilde(ev, x).value), expected, 1e-8);
    ExtensionReport rep = regularity_check(ev, x);
    c.expect(rep.gap.finite() && std::fabs(rep.gap.value()) <= 1e-6, in.name + " gap " + rep.gap.str());
    SubgradientReport sg = subgradient(ev, x, Extension::RhoTilde);
    c.expect(!sg.maximizers.empty() && sg.maximizers.front().measure.has_value(), in.name + " no maximizer");
    if (!sg.maximizers.empty() && sg.maximizers.front().measure) {
      const auto g = oracle::gibbs(base, ent.beta, x.values());
      double worst = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i)
        worst = std::max(worst, std::fabs(sg.maximizers.front().measure->weight(i) - g[i]));
      c.close(in.name + " Gibbs density distance", worst, 0.0, 1e-6);
    }
  }
  TailContinuityReport tc = tail_continuity_test(Extension::RhoTilde, ev, bc.inputs[0].finest(), bc.inputs[1].finest(),
                                                 {4, 16, 32, 64, 128, 192});
  c.expect(tc.converges, "tail continuity");
}

// ---------------------------------------------------------------- 5

void classification(Criterion& c) {
  BuiltinCase bc = make_builtin("example6.3");
  BuiltinLadder lad = build_ladder(bc);
  const BuiltinInput& id = input_named(bc, "integer_identity");
  MembershipReport m = classify(lad.ladder(id));
  c.expect(m.in_HR == Tri::Yes, "identity not in H");
  c.expect(m.in_MR == Tri::No, "identity not excluded from M");
  const Evaluator& fine = lad.ladder(id).finest();
  for (int k = 2; k <= 1024; ++k)
    c.close("rho(|X| 1{|X|>" + std::to_string(k) + "})", fin(fine.value(keep_above(abs(id.finest()), k, true))), 1.0,
            1e-6);

  const double lambda = 2.0;  // exponential component is u / lambda
  Ladder ex = lad.ladder(input_named(bc, "exponential"));
  LadderValue half = scan_scaled_risk(ex, 0.5 * lambda);
  c.expect(half.finite(), "t = lambda/2 not finite");
  c.expect(half.values.size() >= 3, "fewer than three refinements");
  LadderValue twice = scan_scaled_risk(ex, 2.0 * lambda);
  c.expect(twice.diverging || twice.certified_infinite, "t = 2 lambda divergence not detected");

  for (const auto& in : bc.inputs) {
    MembershipReport r = classify(lad.ladder(in));
    c.expect(!(r.in_MR == Tri::Yes && r.in_HR != Tri::Yes), in.name + ": M without H");
    c.expect(!(r.in_HR == Tri::Yes && r.in_LR != Tri::Yes), in.name + ": H without L");
    c.expect(!(r.in_LR == Tri::No && r.in_HR == Tri::Yes), in.name + ": not L but H");
  }
}

// ---------------------------------------------------------------- 6

struct RandomRegime {
  Regime regime;
  std::string kind;
};

RandomRegime random_regime(oracle::Rng& rng, std::size_t n, int kind) {
  auto sp = SampleSpace::finite(n);
  GeneralizedMeasure p(sp, rng.simplex(n));
  std::vector<double> uv = rng.vec(n, 0.5, 2.0);
  RandomVariable u(sp, uv);
  if (kind == 0) {
    LinearDual acc;
    const int members = rng.integer(1, 5);
    for (int i = 0; i < members; ++i)
      acc.family.push_back({GeneralizedMeasure(sp, rng.vec(n, 0.05, 1.0)), i == 0 ? rng.uniform(0.0, 1.0) : rng.uniform(0.0, 2.0), ""});
    RandomVariable b(sp, rng.vec(n, -1.0, 1.0));
    const auto& mu0 = acc.family.front().measure;
    PricingFunctional price{{fin(integrate(mu0, u)), fin(integrate(mu0, b))}};
    return {Regime(acc, SecuritySpace({u, b}, 0), price), "linear"};
  }
  // prices from P itself keep P consistent
  const double pu = fin(integrate(p, u));
  if (kind == 1) return {Regime(Entropic{p, rng.uniform(0.3, 2.0)}, SecuritySpace({u}, 0), PricingFunctional{{pu}}), "entropic"};
  return {Regime(AVaR{p, rng.uniform(0.05, 0.9)}, SecuritySpace({u}, 0), PricingFunctional{{pu}}), "tail mean"};
}

void property_suites(Criterion& c) {
  oracle::Rng rng(606);

  // LP duality on random feasible bounded programs, and the primal/dual risk routes.
  for (int t = 0; t < 100; ++t) {
    const std::size_t vars = static_cast<std::size_t>(rng.integer(1, 8));
    const std::size_t rows = static_cast<std::size_t>(rng.integer(1, 8));
    LPProblem lp;
    lp.sense = t % 2 ? Sense::Maximize : Sense::Minimize;
    lp.objective = rng.vec(vars, -1.0, 1.0);
    lp.nonnegative.assign(vars, true);
    for (std::size_t r = 0; r < rows; ++r) {
      lp.G.push_back(rng.vec(vars, -1.0, 1.0));
      lp.h.push_back(rng.uniform(0.1, 2.0));  // the origin is feasible
    }
    for (std::size_t j = 0; j < vars; ++j) {  // box keeps it bounded
      std::vector<double> row(vars, 0.0);
      row[j] = 1.0;
      lp.G.push_back(row);
      lp.h.push_back(rng.uniform(0.5, 3.0));
    }
    LPResult r = lp_solve(lp);
    c.expect(r.status == LPStatus::Optimal, "random LP not optimal");
    if (r.status != LPStatus::Optimal) continue;
    c.close("LP duality gap", oracle::dot(r.duals, lp.h), r.optimum, 1e-7);
    c.expect(lp_optimality_residual(lp, r) <= 1e-7, "LP residual");
  }

  for (int t = 0; t < 300; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(2, 8));
    RandomRegime rr = random_regime(rng, n, t % 3);
    const std::string tag = rr.kind + " #" + std::to_string(t);
    const ValidationReport vr = validate_regime(rr.regime);
    c.expect(vr.valid, tag + " invalid: " + vr.narrative);
    if (!vr.valid) continue;
    Regime norm = normalize_regime(rr.regime);
    const SpacePtr& sp = norm.space();
    c.close(tag + " rho(0) after normalization", fin(primal_risk(norm, RandomVariable::constant(sp, 0.0)).value), 0.0, 1e-9);

    Evaluator ev(norm);
    auto xs = rng.vec(n, -4.0, 4.0), ys = rng.vec(n, -4.0, 4.0);
    RandomVariable x(sp, xs), y(sp, ys);
    const double rx = fin(ev.primal(x).value), ry = fin(ev.primal(y).value);
    c.close(tag + " primal vs dual", fin(ev.value(x)), rx, 1e-7);

    // S-additivity along every basis direction
    for (std::size_t j = 0; j < norm.securities.dimension(); ++j) {
      std::vector<double> z(norm.securities.dimension(), 0.0);
      z[j] = rng.uniform(-2.0, 2.0);
      c.close(tag + " S-additivity", fin(ev.primal(add(x, norm.securities.combine(z))).value), rx + norm.pricing(z),
              1e-8);
    }
    // monotonicity
    oracle::Vec bigger(xs);
    for (double& v : bigger) v += rng.uniform(0.0, 1.0);
    c.expect(fin(ev.primal(RandomVariable(sp, bigger)).value) >= rx - 1e-10, tag + " monotonicity");
    // convexity
    const double lam = rng.uniform(0.0, 1.0);
    const double mid = fin(ev.primal(add(scale(lam, x), scale(1.0 - lam, y))).value);
    c.expect(mid <= lam * rx + (1.0 - lam) * ry + 1e-8, tag + " convexity");

    // gauge axioms, solidity and level equivalence
    const double nx = fin(gauge_norm(ev, x).value), ny = fin(gauge_norm(ev, y).value);
    c.expect(fin(gauge_norm(ev, add(x, y)).value) <= nx + ny + 1e-7 * (1.0 + nx + ny), tag + " triangle");
    const double s = rng.uniform(-3.0, 3.0);
    c.close(tag + " homogeneity", fin(gauge_norm(ev, scale(s, x)).value), std::fabs(s) * nx, 1e-7 * (1.0 + nx));
    oracle::Vec shrunk(xs);
    for (double& v : shrunk) v *= rng.uniform(-1.0, 1.0);
    c.expect(fin(gauge_norm(ev, RandomVariable(sp, shrunk)).value) <= nx + 1e-7 * (1.0 + nx), tag + " solidity");
    c.expect(gauge_norm(ev, RandomVariable::constant(sp, 0.0)).value == ExtReal(0.0), tag + " zero norm");
    for (double level : {0.25, 3.0}) {
      auto [lo, hi] = norm_equivalence_constants(level);
      const double nc = fin(gauge_norm(ev, x, level).value);
      c.expect(lo * nc <= nx * (1.0 + 1e-7) + 1e-12 && nx <= hi * nc * (1.0 + 1e-7) + 1e-12, tag + " equivalence");
    }

    // extension chain and equality on bounded positions
    ExtensionReport ext = regularity_check(ev, x);
    c.expect(ext.chain_holds, tag + " chain");
    c.close(tag + " xi = rho_tilde", fin(ext.xi.value), fin(ext.rho_tilde), 1e-6);

    // subgradient inequality on the library probes and on independent ones
    SubgradientOptions so;
    so.probes = 30;
    so.seed = static_cast<std::uint64_t>(t);
    SubgradientReport sg = subgradient(ev, x, Extension::RhoTilde, so);
    c.expect(sg.probe_violations == 0, tag + " probe violations " + std::to_string(sg.probe_violations));
    if (!sg.maximizers.empty() && sg.maximizers.front().affine) {
      for (int q = 0; q < 10; ++q) {
        RandomVariable probe(sp, rng.vec(n, -6.0, 6.0));
        const double lhs = fin(sg.maximizers.front().affine(probe));
        c.expect(lhs <= fin(ev.primal(probe).value) + 1e-7, tag + " subgradient inequality");
      }
    } else {
      c.expect(false, tag + " no maximizer");
    }
  }
}

// ---------------------------------------------------------------- 7

void strong_reference(Criterion& c) {
  Evaluator ev(mixture_counterexample());
  StrongReferenceReport rep = strong_reference_check(ev);
  c.expect(rep.zero_penalty == std::vector<std::string>{"mix1000"}, "zero-penalty set is not {Q}");
  c.expect(!rep.reference_set_nonempty, "reference set not empty");
  c.expect(sensitivity_check(ev).verdict == Verdict::Holds, "not sensitive");

  oracle::Rng rng(707);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(2, 8));
    auto sp = SampleSpace::finite(n);
    LinearDual acc;
    std::vector<char> covered(n, 0);
    const int members = rng.integer(1, 4);
    for (int i = 0; i < members; ++i) {
      auto w = rng.vec(n, 0.1, 1.0);
      for (auto& x : w)
        if (rng.uniform(0.0, 1.0) < 0.35) x = 0.0;
      w[static_cast<std::size_t>(rng.integer(0, int(n) - 1))] = 0.5;
      for (std::size_t a = 0; a < n; ++a) covered[a] |= w[a] > 0.0;
      acc.family.push_back({GeneralizedMeasure(sp, w), 0.0, "m" + std::to_string(i)});
    }
    const bool full = std::all_of(covered.begin(), covered.end(), [](char v) { return v != 0; });
    Evaluator e(cash_regime(acc));
    StrongReferenceReport r = strong_reference_check(e);
    c.expect(r.coherent_agrees.value_or(false), "coherent equivalence");
    c.expect(r.reference_set_nonempty == full, "reference set vs support oracle");
  }
}

// ---------------------------------------------------------------- 8

void escape(Criterion& c) {
  BuiltinCase bc = make_builtin("example6.2");
  Evaluator ev(bc.regime());
  std::vector<std::int64_t> schedule;
  for (std::int64_t k = 16; k <= 4096; k *= 2) schedule.push_back(k);
  EscapeReport under_eta = escape_diagnostic(ev, input_named(bc, "identity").finest(), Extension::Eta, schedule);
  c.expect(under_eta.verdict == "escapes", "eta verdict " + under_eta.verdict);
  c.expect(under_eta.argmax.size() == schedule.size(), "schedule length");
  for (const auto& [cut, arg] : under_eta.argmax)
    c.expect(arg == cut, "eta argmax " + std::to_string(arg) + " at cutoff " + std::to_string(cut));

  for (double m : {2.0, 8.0, 32.0}) {
    RandomVariable capped = clamp_above(input_named(bc, "identity").finest(), m);
    EscapeReport r = escape_diagnostic(ev, capped, Extension::RhoTilde, schedule);
    c.expect(r.verdict == "stabilizes", "rho_tilde verdict " + r.verdict);
    for (const auto& [cut, arg] : r.argmax) c.expect(arg <= static_cast<std::int64_t>(m), "argmax above m");
  }
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* title;
    void (*body)(Criterion&);
  };
  const Entry entries[] = {
      {1, "symmetric spread identity: rho_tilde 0, eta 1/2, case split", symmetric_gap},
      {2, "tail-mass market: primal value, survivor set, continuity from above", tail_mass_market},
      {3, "tail mean: LP agreement, root finding, regularity on unbounded positions", tail_average},
      {4, "entropic regime: closed form, tail continuity, Gibbs subgradient, gap", entropic_case},
      {5, "mixed regime classification and scaled-risk scan", classification},
      {6, "property suites on random small regimes", property_suites},
      {7, "strong reference counterexample and coherent equivalence", strong_reference},
      {8, "escape diagnostic under both extensions", escape},
  };
  bool all = true;
  for (const auto& e : entries) {
    Criterion c(e.id, e.title);
    c.run(e.body);
    all = c.report() && all;
  }
  return all ? 0 : 1;
}
