// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "mrisk/extend.hpp"

#include <algorithm>
#include <cmath>

namespace mrisk {

namespace {

// Ends of the tail that the space actually has.
template <class Pred>
bool tail_ends_satisfy(const RandomVariable& x, Pred pred) {
  if (!x.tail()) return true;
  if (!pred(x.tail()->upper)) return false;
  return !x.space()->two_sided() || pred(x.tail()->lower);
}

bool lower_inactive(const RandomVariable& x, double n) {
  for (double v : x.values())
    if (v < -n) return false;
  return tail_ends_satisfy(x, [n](const TailEnd& e) {
    return e.kind == TailEnd::Kind::PosInf || (e.finite() && e.limit >= -n);
  });
}

bool upper_inactive(const RandomVariable& x, double m) {
  for (double v : x.values())
    if (v > m) return false;
  return tail_ends_satisfy(x, [m](const TailEnd& e) {
    return e.kind == TailEnd::Kind::NegInf || (e.finite() && e.limit <= m);
  });
}

void record_deltas(ExtendedValue& out, const std::vector<ExtReal>& seq) {
  if (seq.size() >= 2 && seq[seq.size() - 1].finite() && seq[seq.size() - 2].finite())
    out.last_delta = seq[seq.size() - 1].value() - seq[seq.size() - 2].value();
  if (seq.size() >= 3 && seq[seq.size() - 2].finite() && seq[seq.size() - 3].finite())
    out.previous_delta = seq[seq.size() - 2].value() - seq[seq.size() - 3].value();
}

void require_grid(const std::vector<double>& g, const char* what) {
  require(!g.empty(), ErrorCode::InvalidArgument, std::string(what) + " must be nonempty");
  for (std::size_t i = 0; i < g.size(); ++i) {
    require(g[i] >= 0.0 && std::isfinite(g[i]), ErrorCode::InvalidArgument, std::string(what) + " must be finite and >= 0");
    require(i == 0 || g[i] > g[i - 1], ErrorCode::InvalidArgument, std::string(what) + " must be increasing");
  }
}

}  // namespace

ExtensionGrids ExtensionGrids::defaults() {
  ExtensionGrids g;
  for (int i = 0; i <= 6; ++i) g.m_grid.push_back(std::ldexp(1.0, i));
  for (int i = 0; i <= 10; ++i) g.n_grid.push_back(std::ldexp(1.0, i));
  for (int i = 1; i <= 20; ++i) g.tail_grid.push_back(std::ldexp(1.0, i));
  return g;
}

RiskReport rho_tilde(const Evaluator& ev, const RandomVariable& x) { return ev.risk(x); }

ExtendedValue xi(const Evaluator& ev, const RandomVariable& x, const std::vector<double>& m_grid,
                 const std::vector<double>& n_grid) {
  require_grid(m_grid, "m_grid");
  require_grid(n_grid, "n_grid");
  ExtendedValue out;
  out.value = ExtReal::neg_inf();
  std::vector<ExtReal> per_m;
  bool upper_done = false, lower_done = false;
  for (double m : m_grid) {
    ExtReal inner = ExtReal::pos_inf();
    lower_done = false;
    for (double n : n_grid) {
      inner = min(inner, ev.value(truncate(x, Truncation(n, m))));
      ++out.evaluations;
      if ((lower_done = lower_inactive(x, n))) break;
    }
    per_m.push_back(inner);
    out.value = max(out.value, inner);
    if ((upper_done = upper_inactive(x, m))) break;
  }
  out.cutoff_limited = !upper_done || !lower_done;
  record_deltas(out, per_m);
  return out;
}

namespace {

ExtendedValue eta_tail_exact(const Evaluator& ev, const RandomVariable& x, const std::vector<double>& n_grid) {
  ExtendedValue out;
  out.value = ExtReal::pos_inf();
  std::vector<ExtReal> per_n;
  bool lower_done = false;
  for (double n : n_grid) {
    ExtReal v = ev.value(clamp_below(x, n));
    ++out.evaluations;
    per_n.push_back(v);
    out.value = min(out.value, v);
    if ((lower_done = lower_inactive(x, n))) break;
  }
  out.cutoff_limited = !lower_done;
  record_deltas(out, per_n);
  return out;
}

}  // namespace

EtaResult eta(const Evaluator& ev, const RandomVariable& x, const std::vector<double>& n_grid,
              const std::vector<double>& m_grid, double tol) {
  require_grid(m_grid, "m_grid");
  require_grid(n_grid, "n_grid");
  EtaResult res;
  res.value = eta_tail_exact(ev, x, n_grid);
  ExtendedValue& out = res.value;

  res.grid_route = ExtReal::pos_inf();
  for (double n : n_grid) {
    ExtReal outer = ExtReal::neg_inf();
    for (double m : m_grid) {
      outer = max(outer, ev.value(truncate(x, Truncation(n, m))));
      ++out.evaluations;
      if (upper_inactive(x, m)) break;
    }
    res.grid_route = min(res.grid_route, outer);
    if (lower_inactive(x, n)) break;
  }
  if (out.value.finite() && res.grid_route.finite()) {
    const double slack = tol * (1.0 + std::fabs(out.value.value()));
    require(res.grid_route.value() <= out.value.value() + slack, ErrorCode::InconsistentRoutes,
            "truncation grid exceeds the tail-exact route: " + format_number(res.grid_route) + " > " +
                format_number(out.value));
    res.grid_route_inadequate = res.grid_route.value() < out.value.value() - slack;
  } else {
    res.grid_route_inadequate = res.grid_route < out.value;
  }
  return res;
}

const char* regularity_name(RegularityVerdict v) {
  switch (v) {
    case RegularityVerdict::Regular: return "regular";
    case RegularityVerdict::ConditionNotDetected: return "condition not detected";
    case RegularityVerdict::OutsideGamma: return "outside gamma: no equality guarantee";
    default: return "violation";
  }
}

ExtensionReport regularity_check(const Evaluator& ev, const RandomVariable& x, const ExtensionGrids& grids) {
  require_grid(grids.tail_grid, "tail_grid");
  ExtensionReport rep;
  rep.rho_tilde = ev.value(x);
  rep.xi = xi(ev, x, grids.m_grid, grids.n_grid);
  rep.eta = eta(ev, x, grids.n_grid, grids.m_grid, grids.tol);
  const ExtReal& e = rep.eta.value.value;
  if (rep.rho_tilde.finite() || !(e == rep.rho_tilde))
    rep.gap = e - rep.rho_tilde;
  else
    rep.gap = 0.0;
  const ExtReal slack(grids.tol);
  rep.chain_holds = rep.rho_tilde <= rep.xi.value + slack && rep.xi.value <= e + slack;

  for (int i = 1; i <= 20 && !rep.in_gamma; ++i)
    rep.in_gamma = ev.value(scale(1.0 + std::ldexp(1.0, -i), positive_part(x))).finite();

  rep.tail_condition = true;
  for (double n : {1.0, 2.0, 4.0, 8.0}) {
    ExtReal last = ev.value(scale(n, keep_above(x, grids.tail_grid.back())));
    rep.tail_evidence.push_back({"rho(nX1{X>=m}) n=" + format_number(n) + " m=" + format_number(grids.tail_grid.back()),
                                 last});
    rep.tail_condition = rep.tail_condition && last <= slack && last >= -slack;
  }
  const double top = grids.n_grid.back();
  rep.diagonal = ev.value(truncate(x, Truncation(top, top)));

  if (!rep.in_gamma)
    rep.verdict = RegularityVerdict::OutsideGamma;
  else if (!rep.tail_condition)
    rep.verdict = RegularityVerdict::ConditionNotDetected;
  else
    rep.verdict = rep.gap.finite() && std::fabs(rep.gap.value()) <= grids.tol ? RegularityVerdict::Regular
                                                                              : RegularityVerdict::Violation;
  rep.grids = "m<=" + format_number(grids.m_grid.back()) + " n<=" + format_number(top) +
              " tail<=" + format_number(grids.tail_grid.back());
  return rep;
}

const char* extension_name(Extension e) { return e == Extension::Eta ? "eta" : "rho_tilde"; }

ExtReal extension_value(Extension which, const Evaluator& ev, const RandomVariable& x, const ExtensionGrids& grids) {
  if (which == Extension::RhoTilde) return ev.value(x);
  require_grid(grids.n_grid, "n_grid");
  return eta_tail_exact(ev, x, grids.n_grid).value;
}

TailContinuityReport tail_continuity_test(Extension which, const Evaluator& ev, const RandomVariable& x,
                                          const RandomVariable& y, const std::vector<double>& r_grid,
                                          const ExtensionGrids& grids) {
  require_grid(r_grid, "r_grid");
  TailContinuityReport rep;
  rep.which = which;
  rep.base = extension_value(which, ev, x, grids);
  for (double r : r_grid) rep.sequence.emplace_back(r, extension_value(which, ev, add(x, keep_above(y, r)), grids));
  const ExtReal& last = rep.sequence.back().second;
  rep.converges = rep.base.finite() && last.finite() && std::fabs(last.value() - rep.base.value()) <= 1e-6;
  return rep;
}

}  // namespace mrisk
