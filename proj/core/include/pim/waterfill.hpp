// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace pim {

using Eigen::VectorXd;

/// Per-user transmit powers plus feasibility metadata.
struct PowerAllocation {
  VectorXd p;
  bool feasible = false;
  double water_level = 0.0;
  Eigen::Array<bool, Eigen::Dynamic, 1> active_floor_mask;
  double budget_residual = 0.0;  // sum_k w_k p_k - p_max at the solution
};

/// Inputs to the exact water-filling solver: maximize sum_k log2(1+p_k/s^2)
/// subject to sum_k weights_k * p_k <= p_max and p_k >= p_floor_k.
struct WaterfillInput {
  VectorXd weights;   // positive; diagonal of g^H g for the ZF precoder
  VectorXd p_floor;   // nonnegative QoS minimum powers
  double p_max = 0.0;
  double noise_power = 1.0;
};

/// Minimum per-user powers implied by the QoS rate floors:
/// p_floor_k = sigma^2 (2^{R_min,k} - 1).
VectorXd min_powers(const VectorXd& rate_floors, double noise_power);

/// true iff the floors alone fit in the budget: sum_k w_k p_floor_k <= p_max.
bool feasibility_check(const WaterfillInput& inp);

/// Eigenvalue water-filling, applied verbatim:
/// p_k = [alpha*lambda_k - sigma^2]^+ + sigma^2(2^{R_min,k}-1)/lambda_k with
/// alpha = (1/q)(p_max - sum_k sigma^2(2^{R_min,k}-1)/lambda_k
///              + sigma^2 sum_{k<=q} 1/lambda_k).
///
/// lambda must be sorted descending (eigenvalues of W W^H); rate_floors is
/// paired index-by-index with lambda. The formula is exact only when W W^H is
/// diagonal, so `feasible` is set by re-checking the budget through the
/// eigenvalue weights, never assumed. Throws std::invalid_argument when all
/// eigenvalues are below rank_tol (q = 0).
PowerAllocation waterfill_paper(const VectorXd& lambda, const VectorXd& rate_floors,
                                double p_max, double noise_power,
                                double rank_tol = 1e-12);

/// Exact KKT solver for the power subproblem. Stationarity gives
/// p_k(nu) = max(p_floor_k, 1/(nu ln2 w_k) - sigma^2); the multiplier nu is
/// bisected until the budget is tight (or every user sits at its floor).
/// Returns feasible=false when the floors already exceed the budget.
PowerAllocation waterfill_exact(const WaterfillInput& inp);

}  // namespace pim
