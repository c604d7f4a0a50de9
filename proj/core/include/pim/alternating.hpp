// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "pim/phase_mm.hpp"
#include "pim/precoding.hpp"
#include "pim/scenario.hpp"
#include "pim/waterfill.hpp"

namespace pim {

enum class SolveStatus { Converged, MaxIterations, Infeasible, RankDeficient };

enum class WeightingMode { Weighted, PaperLiteral };
enum class WaterfillSolver { Exact, Paper };

struct SolveOptions {
  MMKind surrogate = MMKind::Spectral;
  WeightingMode weighting = WeightingMode::Weighted;
  WaterfillSolver waterfill = WaterfillSolver::Exact;
};

struct OuterIterate {
  double sum_rate = 0.0;
  double power_cost = 0.0;
  int mm_iterations = 0;
};

struct Solution {
  PhaseVector phases;
  PowerAllocation powers;
  Precoder precoder;
  double sum_rate = 0.0;
  std::vector<OuterIterate> outer_trace;
  SolveStatus status = SolveStatus::MaxIterations;
  int outer_iterations = 0;
  int total_mm_iterations = 0;
};

/// Alternating maximization: MM phase step to shrink the transmit-power cost,
/// then water-filling under the resulting ZF weights, until the sum rate
/// stops improving. Declares infeasibility when the minimized cost cannot
/// carry even the QoS floor powers within the budget.
Solution solve(const ChannelSet& ch, const ScenarioConfig& cfg, const RngSeed& seed,
               const SolveOptions& options = {});

/// R_min,k - log2(1 + p_k/sigma^2) per user; entries <= 0 mean satisfied.
VectorXd qos_violation(const Solution& sol, const ScenarioConfig& cfg);

/// Water-filling dispatch shared by the solver and the baselines: exact KKT
/// on the precoder weights, or the eigenvalue formula with the descending
/// eigenvalue / descending floor pairing.
PowerAllocation allocate_powers(const MatrixXcd& w_cascade, const Precoder& prec,
                                const ScenarioConfig& cfg, WaterfillSolver solver);

}  // namespace pim
