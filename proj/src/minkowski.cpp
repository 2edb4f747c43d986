// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "mrisk/minkowski.hpp"

#include <algorithm>
#include <cmath>

namespace mrisk {

ExtReal rho_abs(const Evaluator& ev, const RandomVariable& x, double lambda) {
  require(lambda > 0.0, ErrorCode::InvalidArgument, "scale must be positive");
  return ev.value(scale(1.0 / lambda, abs(x)));
}

namespace {

bool identically_zero(const RandomVariable& x) {
  for (double v : x.values())
    if (v != 0.0) return false;
  if (!x.tail()) return true;
  const TailEnd& up = x.tail()->upper;
  const TailEnd& lo = x.tail()->lower;
  return up.finite() && up.limit == 0.0 && (!x.space()->two_sided() || (lo.finite() && lo.limit == 0.0));
}

}  // namespace

GaugeResult gauge_norm(const Evaluator& ev, const RandomVariable& x, double c, const GaugeOptions& opt) {
  require(c > 0.0, ErrorCode::InvalidArgument, "gauge level must be positive");
  GaugeResult res;
  if (identically_zero(x)) {
    res.value = 0.0;
    return res;
  }
  const RandomVariable ax = abs(x);
  auto f = [&](double lambda) {
    ++res.evaluations;
    return ev.value(scale(1.0 / lambda, ax));
  };
  const double start = std::max(ax.sup_abs_window(), 1e-12);
  double hi = start;
  ExtReal fh = f(hi);
  for (int i = 0; fh > ExtReal(c); ++i) {
    if (i == opt.max_doublings) {
      res.value = ExtReal::pos_inf();
      res.certified_infinite = fh.is_pos_inf();
      res.cutoff_infinite = !res.certified_infinite;
      return res;
    }
    hi *= 2.0;
    fh = f(hi);
  }
  double lo = hi / 2.0;
  for (int i = 0; f(lo) <= ExtReal(c); ++i) {
    if (i == opt.max_doublings) {
      res.value = 0.0;
      return res;
    }
    hi = lo;
    lo /= 2.0;
  }
  while (hi - lo > opt.rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) <= ExtReal(c) ? hi : lo) = mid;
  }
  res.value = hi;
  return res;
}

std::pair<double, double> norm_equivalence_constants(double c) {
  require(c > 0.0, ErrorCode::InvalidArgument, "gauge level must be positive");
  return c <= 1.0 ? std::pair{c, 1.0} : std::pair{1.0, c};
}

bool refinement_diverges(const std::vector<ExtReal>& v) {
  if (v.size() < 3) return false;
  const ExtReal& a = v[v.size() - 3];
  const ExtReal& b = v[v.size() - 2];
  const ExtReal& c = v[v.size() - 1];
  if (!a.finite() || !b.finite() || !c.finite()) return c.is_pos_inf();
  const double d1 = b.value() - a.value();
  const double d2 = c.value() - b.value();
  return d2 > 1e-6 * (1.0 + std::fabs(c.value())) && d2 >= 0.5 * d1;
}

LadderValue ladder_value(const Ladder& ladder, const std::function<RandomVariable(const RandomVariable&)>& transform) {
  require(!ladder.levels.empty() && ladder.levels.size() == ladder.inputs.size(), ErrorCode::InvalidArgument,
          "ladder needs one input per level");
  LadderValue out;
  for (std::size_t l = 0; l < ladder.levels.size(); ++l) {
    out.values.push_back(ladder.levels[l]->value(transform(ladder.inputs[l])));
    out.certified_infinite = out.certified_infinite || out.values.back().is_pos_inf();
  }
  out.diverging = !out.certified_infinite && refinement_diverges(out.values);
  return out;
}

LadderValue scan_scaled_risk(const Ladder& ladder, double t) {
  return ladder_value(ladder, [t](const RandomVariable& x) { return scale(t, abs(x)); });
}

const char* tri_name(Tri t) {
  switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    default: return "inconclusive";
  }
}

MembershipGrids MembershipGrids::defaults() {
  MembershipGrids g;
  for (int i = 0; i <= 10; ++i) g.k_grid.push_back(std::ldexp(1.0, i));
  for (int i = 1; i <= 20; ++i) g.tail_grid.push_back(std::ldexp(1.0, i));
  for (int i = 1; i <= 20; ++i) g.eps_grid.push_back(std::ldexp(1.0, -i));
  return g;
}

MembershipReport classify(const Ladder& ladder, const MembershipGrids& grids) {
  require(!grids.k_grid.empty() && !grids.tail_grid.empty() && !grids.eps_grid.empty(), ErrorCode::InvalidArgument,
          "classification grids must be nonempty");
  MembershipReport rep;
  const Evaluator& ev = ladder.finest();
  const RandomVariable& x = ladder.finest_input();

  GaugeResult g = gauge_norm(ev, x);
  rep.gauge = g.value;
  rep.evidence.push_back({"gauge", g.value});
  rep.in_LR = g.value.finite() ? Tri::Yes : (g.certified_infinite ? Tri::No : Tri::Inconclusive);

  rep.in_HR = Tri::Yes;
  for (double k : grids.k_grid) {
    LadderValue v = scan_scaled_risk(ladder, k);
    rep.evidence.push_back({"rho(k|X|) k=" + format_number(k), v.last()});
    if (!v.finite()) {
      rep.in_HR = Tri::No;
      if (v.diverging) rep.evidence.push_back({"diverges across refinements at k=" + format_number(k), v.last()});
      break;
    }
  }

  if (rep.in_HR == Tri::Yes) {
    const RandomVariable ax = abs(x);
    rep.in_MR = Tri::Yes;
    for (double lambda : grids.k_grid) {
      ExtReal last = ExtReal::pos_inf();
      for (double t : grids.tail_grid) last = ev.value(scale(lambda, keep_above(ax, t)));
      rep.evidence.push_back({"tail risk lambda=" + format_number(lambda) + " t=" + format_number(grids.tail_grid.back()),
                              last});
      if (!(last <= ExtReal(grids.tail_tol))) {
        rep.in_MR = Tri::No;
        break;
      }
    }
  } else {
    rep.in_MR = Tri::No;
  }

  rep.in_Gamma = Tri::No;
  for (double eps : grids.eps_grid) {
    LadderValue v = ladder_value(ladder, [&](const RandomVariable& y) { return scale(1.0 + eps, positive_part(y)); });
    if (v.finite()) {
      rep.in_Gamma = Tri::Yes;
      rep.evidence.push_back({"rho((1+eps)X+) eps=" + format_number(eps), v.last()});
      break;
    }
  }

  LadderValue rt = ladder_value(ladder, [](const RandomVariable& y) { return y; });
  rep.rho_tilde = rt.finite() ? rt.last() : ExtReal::pos_inf();
  rep.evidence.push_back({"rho_tilde", rep.rho_tilde});

  // Chain M => H => L.
  if (rep.in_HR > rep.in_LR) {
    rep.in_HR = rep.in_LR;
    rep.chain_adjusted = true;
  }
  if (rep.in_MR > rep.in_HR) {
    rep.in_MR = rep.in_HR;
    rep.chain_adjusted = true;
  }
  if (rep.in_LR == Tri::Yes && rt.finite() && rep.in_HR == Tri::No)
    rep.in_CR = Tri::Yes;
  else if (rep.in_LR == Tri::Inconclusive || rep.in_HR == Tri::Inconclusive)
    rep.in_CR = Tri::Inconclusive;
  else
    rep.in_CR = Tri::No;

  rep.cutoffs = "k<=" + format_number(grids.k_grid.back()) + " t<=" + format_number(grids.tail_grid.back()) +
                " eps>=" + format_number(grids.eps_grid.back()) + " levels=" + std::to_string(ladder.levels.size());
  return rep;
}

}  // namespace mrisk
