// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#include "mrisk/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mrisk/error.hpp"

namespace mrisk {

const char* status_name(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Unbounded: return "unbounded";
    case LPStatus::Infeasible: return "infeasible";
  }
  return "?";
}

namespace {

// Standard form tableau: rows x (cols + 1), last column is the rhs.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_(rows * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * (n_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * (n_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, n_); }
  double rhs(std::size_t i) const { return at(i, n_); }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    const double pv = at(r, c);
    for (std::size_t j = 0; j <= n_; ++j) at(r, j) /= pv;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    basis_[r] = c;
  }

  // Minimizes cost over the current basis; `allowed` marks entering candidates.
  // Returns false when unbounded.
  bool optimize(const std::vector<double>& cost, const std::vector<bool>& allowed, const LPOptions& opt,
                std::size_t& iters) {
    for (;;) {
      // Reduced costs, Bland: first improving column.
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_ && enter == n_; ++j) {
        if (!allowed[j]) continue;
        double r = cost[j];
        for (std::size_t i = 0; i < m_; ++i) r -= cost[basis_[i]] * at(i, j);
        if (r < -opt.pivot_tol * 10) enter = j;
      }
      if (enter == n_) return true;
      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, enter);
        if (a <= opt.pivot_tol) continue;
        const double ratio = rhs(i) / a;
        if (ratio < best - 1e-15 || (std::fabs(ratio - best) <= 1e-15 && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
      if (++iters > opt.max_iterations) fail(ErrorCode::NumericalBreakdown, "simplex iteration cap reached");
    }
  }

 private:
  std::size_t m_, n_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LPResult lp_solve(const LPProblem& p, const LPOptions& opt) {
  const std::size_t nv = p.variables();
  const std::size_t mi = p.G.size(), me = p.A.size();
  if (p.h.size() != mi || p.b.size() != me) fail(ErrorCode::InvalidArgument, "LP bound vector length mismatch");
  for (const auto& row : p.G)
    if (row.size() != nv) fail(ErrorCode::InvalidArgument, "LP inequality row length mismatch");
  for (const auto& row : p.A)
    if (row.size() != nv) fail(ErrorCode::InvalidArgument, "LP equality row length mismatch");
  auto finite_all = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite_all(p.objective) || !finite_all(p.h) || !finite_all(p.b))
    fail(ErrorCode::InvalidArgument, "LP data must be finite");

  // Column layout: structural (free vars split), slacks, artificials.
  std::vector<std::size_t> pos(nv), neg(nv, SIZE_MAX);
  std::size_t col = 0;
  for (std::size_t j = 0; j < nv; ++j) {
    pos[j] = col++;
    const bool nonneg = j < p.nonnegative.size() && p.nonnegative[j];
    if (!nonneg) neg[j] = col++;
  }
  const std::size_t first_slack = col;
  col += mi;
  const std::size_t m = mi + me;
  std::vector<double> sigma(m, 1.0);
  std::vector<bool> needs_art(m, false);
  std::size_t n_art = 0;
  for (std::size_t i = 0; i < mi; ++i) {
    if (p.h[i] < 0) {
      sigma[i] = -1.0;
      needs_art[i] = true;
      ++n_art;
    }
  }
  for (std::size_t i = 0; i < me; ++i) {
    if (p.b[i] < 0) sigma[mi + i] = -1.0;
    needs_art[mi + i] = true;
    ++n_art;
  }
  const std::size_t first_art = col;
  const std::size_t ncols = col + n_art;

  Tableau T(m, ncols);
  std::vector<std::size_t> identity_col(m);
  std::size_t art = first_art;
  for (std::size_t i = 0; i < m; ++i) {
    const std::vector<double>& row = i < mi ? p.G[i] : p.A[i - mi];
    const double r = i < mi ? p.h[i] : p.b[i - mi];
    for (std::size_t j = 0; j < nv; ++j) {
      if (!std::isfinite(row[j])) fail(ErrorCode::InvalidArgument, "LP data must be finite");
      T.at(i, pos[j]) = sigma[i] * row[j];
      if (neg[j] != SIZE_MAX) T.at(i, neg[j]) = -sigma[i] * row[j];
    }
    if (i < mi) T.at(i, first_slack + i) = sigma[i];
    T.rhs(i) = sigma[i] * r;
    if (needs_art[i]) {
      T.at(i, art) = 1.0;
      identity_col[i] = art;
      T.basis()[i] = art++;
    } else {
      identity_col[i] = first_slack + i;
      T.basis()[i] = first_slack + i;
    }
  }

  LPResult res;
  res.argument.assign(nv, 0.0);
  double bscale = 1.0;
  for (std::size_t i = 0; i < m; ++i) bscale = std::max(bscale, std::fabs(T.rhs(i)));

  // Phase 1.
  if (n_art > 0) {
    std::vector<double> c1(ncols, 0.0);
    for (std::size_t j = first_art; j < ncols; ++j) c1[j] = 1.0;
    std::vector<bool> allowed(ncols, true);
    T.optimize(c1, allowed, opt, res.iterations);
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (T.basis()[i] >= first_art) infeas += T.rhs(i);
    if (infeas > opt.feas_tol * bscale) {
      res.status = LPStatus::Infeasible;
      return res;
    }
    // Drive zero-level artificials out where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (T.basis()[i] < first_art) continue;
      for (std::size_t j = 0; j < first_art; ++j) {
        if (std::fabs(T.at(i, j)) > 1e-9) {
          T.pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2.
  const double sgn = p.sense == Sense::Maximize ? -1.0 : 1.0;
  std::vector<double> c2(ncols, 0.0);
  for (std::size_t j = 0; j < nv; ++j) {
    c2[pos[j]] = sgn * p.objective[j];
    if (neg[j] != SIZE_MAX) c2[neg[j]] = -sgn * p.objective[j];
  }
  std::vector<bool> allowed(ncols, true);
  for (std::size_t j = first_art; j < ncols; ++j) allowed[j] = false;
  if (!T.optimize(c2, allowed, opt, res.iterations)) {
    res.status = LPStatus::Unbounded;
    return res;
  }

  std::vector<double> x(ncols, 0.0);
  for (std::size_t i = 0; i < m; ++i) x[T.basis()[i]] = T.rhs(i);
  double obj = 0.0;
  for (std::size_t j = 0; j < nv; ++j) {
    res.argument[j] = x[pos[j]] - (neg[j] != SIZE_MAX ? x[neg[j]] : 0.0);
    obj += p.objective[j] * res.argument[j];
  }
  res.duals.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double y = 0.0;
    for (std::size_t k = 0; k < m; ++k) y += c2[T.basis()[k]] * T.at(k, identity_col[i]);
    res.duals[i] = sgn * sigma[i] * y;
  }
  res.status = LPStatus::Optimal;
  res.optimum = obj;
  return res;
}

double lp_optimality_residual(const LPProblem& p, const LPResult& r) {
  if (r.status != LPStatus::Optimal) return 0.0;
  const std::size_t nv = p.variables(), mi = p.G.size(), me = p.A.size();
  const double sgn = p.sense == Sense::Maximize ? -1.0 : 1.0;
  double worst = 0.0;
  std::vector<double> reduced(nv);
  for (std::size_t j = 0; j < nv; ++j) reduced[j] = p.objective[j];
  for (std::size_t i = 0; i < mi + me; ++i) {
    const auto& row = i < mi ? p.G[i] : p.A[i - mi];
    const double rhs = i < mi ? p.h[i] : p.b[i - mi];
    double ax = 0.0;
    for (std::size_t j = 0; j < nv; ++j) ax += row[j] * r.argument[j];
    const double slack = rhs - ax;
    if (i < mi) {
      worst = std::max(worst, -slack);                      // primal feasibility
      worst = std::max(worst, sgn * r.duals[i]);             // dual sign
      worst = std::max(worst, std::fabs(r.duals[i] * slack));  // complementary slackness
    } else {
      worst = std::max(worst, std::fabs(slack));
    }
    for (std::size_t j = 0; j < nv; ++j) reduced[j] -= r.duals[i] * row[j];
  }
  for (std::size_t j = 0; j < nv; ++j) {
    const bool nonneg = j < p.nonnegative.size() && p.nonnegative[j];
    if (nonneg) {
      worst = std::max(worst, -sgn * reduced[j]);
      worst = std::max(worst, std::fabs(reduced[j] * r.argument[j]));
      worst = std::max(worst, -r.argument[j]);
    } else {
      worst = std::max(worst, std::fabs(reduced[j]));
    }
  }
  return worst;
}

}  // namespace mrisk
