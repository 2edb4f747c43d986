// Copyright 2026 The mrisk Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mrisk/reference.hpp"

namespace mrisk {

struct ExtensionGrids {
  std::vector<double> m_grid;     ///< upper truncation levels
  std::vector<double> n_grid;     ///< lower truncation levels
  std::vector<double> tail_grid;  ///< thresholds for tail conditions
  double tol = 1e-6;

  static ExtensionGrids defaults();
};

struct ExtendedValue {
  ExtReal value;
  bool cutoff_limited = false;  ///< truncation still active at the last grid point
  std::optional<double> last_delta;
  std::optional<double> previous_delta;
  std::size_t evaluations = 0;
};

/// Dual formula on the untruncated position.
RiskReport rho_tilde(const Evaluator& ev, const RandomVariable& x);

/// sup over m of inf over n of rho((-n) v X ^ m), full product grid.
ExtendedValue xi(const Evaluator& ev, const RandomVariable& x, const std::vector<double>& m_grid,
                 const std::vector<double>& n_grid);

struct EtaResult {
  ExtendedValue value;  ///< inf over n of rho_tilde((-n) v X)
  ExtReal grid_route;   ///< inf over n of sup over m of rho((-n) v X ^ m)
  bool grid_route_inadequate = false;  ///< grid route below the authoritative value: m_grid too short
};

EtaResult eta(const Evaluator& ev, const RandomVariable& x, const std::vector<double>& n_grid,
              const std::vector<double>& m_grid, double tol = 1e-6);

enum class RegularityVerdict { Regular, ConditionNotDetected, OutsideGamma, Violation };
const char* regularity_name(RegularityVerdict v);

struct ExtensionReport {
  ExtReal rho_tilde;
  ExtendedValue xi;
  EtaResult eta;
  ExtReal gap;  ///< eta - rho_tilde
  bool chain_holds = false;  ///< rho_tilde <= xi <= eta within tolerance
  bool in_gamma = false;
  bool tail_condition = false;  ///< lim over m of rho(n X 1_{X >= m}) = 0 for the probed n
  std::vector<std::pair<std::string, ExtReal>> tail_evidence;
  ExtReal diagonal;  ///< rho((-n) v X ^ n) at the largest n
  RegularityVerdict verdict = RegularityVerdict::ConditionNotDetected;
  std::string grids;
};

/// All three extensions, the a-priori chain and the tail condition for equality.
ExtensionReport regularity_check(const Evaluator& ev, const RandomVariable& x,
                                 const ExtensionGrids& grids = ExtensionGrids::defaults());

enum class Extension { RhoTilde, Eta };
const char* extension_name(Extension e);

/// The chosen extension at the position, eta through its authoritative route.
ExtReal extension_value(Extension which, const Evaluator& ev, const RandomVariable& x,
                        const ExtensionGrids& grids = ExtensionGrids::defaults());

struct TailContinuityReport {
  Extension which = Extension::RhoTilde;
  ExtReal base;
  std::vector<std::pair<double, ExtReal>> sequence;  ///< (r, f(X + Y 1_{Y >= r}))
  bool converges = false;
};

TailContinuityReport tail_continuity_test(Extension which, const Evaluator& ev, const RandomVariable& x,
                                          const RandomVariable& y, const std::vector<double>& r_grid,
                                          const ExtensionGrids& grids = ExtensionGrids::defaults());

}  // namespace mrisk
