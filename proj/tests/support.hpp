// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations for the tests. Nothing here calls the
// library's evaluators; only plain containers and the standard library.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "mrisk/measure.hpp"

namespace oracle {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// min{m : integral of (X - m) against mu_i <= alpha_i for all i} for a finite
/// family with positive masses: the largest normalized excess.
inline double linear_cash_risk(const std::vector<Vec>& weights, const Vec& penalties, const Vec& x) {
  double best = -HUGE_VAL;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double mass = std::accumulate(weights[i].begin(), weights[i].end(), 0.0);
    best = std::max(best, (dot(weights[i], x) - penalties[i]) / mass);
  }
  return best;
}

/// Mean of the worst (1 - alpha) share of outcomes, read off the sorted values.
inline double avar(const Vec& p, double alpha, const Vec& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
  double left = 1.0 - alpha, acc = 0.0;
  for (std::size_t i : order) {
    const double take = std::min(left, p[i]);
    acc += take * x[i];
    left -= take;
    if (left <= 0.0) break;
  }
  return acc / (1.0 - alpha);
}

/// (1/beta) log E[exp(beta X)] in long double with a max shift.
inline double entropic(const Vec& p, double beta, const Vec& x) {
  long double top = -HUGE_VALL;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (p[i] > 0.0) top = std::max<long double>(top, beta * x[i]);
  long double s = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (p[i] > 0.0) s += p[i] * std::exp(static_cast<long double>(beta * x[i]) - top);
  return static_cast<double>((top + std::log(s)) / beta);
}

inline Vec gibbs(const Vec& p, double beta, const Vec& x) {
  long double top = -HUGE_VALL;
  for (double v : x) top = std::max<long double>(top, beta * v);
  std::vector<long double> w(x.size());
  long double s = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] = p[i] * std::exp(static_cast<long double>(beta * x[i]) - top);
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = static_cast<double>(w[i] / s);
  return out;
}

/// Root of a decreasing function by plain bisection on [lo, hi].
inline double bisect_decreasing(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Expectation of clamp(k, -n, m) under Q_k = (1 - 1/k) delta_0 + (delta_k + delta_-k) / 2k by summation.
inline double spread_expectation(std::int64_t k, double m, double n) {
  const double kd = static_cast<double>(k);
  const double up = std::min(kd, m), lo = std::max(-kd, -n);
  return (1.0 - 1.0 / kd) * 0.0 + (up + lo) / (2.0 * kd);
}

/// Closed-form case split for n > m: 0 if k <= m, m/2k - 1/2 if m < k <= n, (m - n)/2k if k > n.
inline double spread_case_split(std::int64_t k, double m, double n) {
  const double kd = static_cast<double>(k);
  if (kd <= m) return 0.0;
  if (kd <= n) return m / (2.0 * kd) - 0.5;
  return (m - n) / (2.0 * kd);
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(gen); }
  Vec vec(std::size_t n, double a, double b) {
    Vec v(n);
    for (double& x : v) x = uniform(a, b);
    return v;
  }
  Vec simplex(std::size_t n) {
    Vec v = vec(n, 0.05, 1.0);
    const double s = std::accumulate(v.begin(), v.end(), 0.0);
    for (double& x : v) x /= s;
    return v;
  }
};

}  // namespace oracle
