// SPDX-License-Identifier: Apache-2.0
#include "pim/waterfill.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pim {

VectorXd min_powers(const VectorXd& rate_floors, double noise_power) {
  VectorXd floors(rate_floors.size());
  for (Eigen::Index k = 0; k < rate_floors.size(); ++k) {
    floors(k) = noise_power * (std::exp2(rate_floors(k)) - 1.0);
  }
  return floors;
}

bool feasibility_check(const WaterfillInput& inp) {
  return inp.weights.dot(inp.p_floor) <= inp.p_max;
}

PowerAllocation waterfill_paper(const VectorXd& lambda, const VectorXd& rate_floors,
                                double p_max, double noise_power, double rank_tol) {
  const Eigen::Index num_users = lambda.size();
  int q = 0;
  for (Eigen::Index k = 0; k < num_users; ++k) {
    if (lambda(k) > rank_tol) ++q;
  }
  if (q == 0) {
    throw std::invalid_argument("waterfill_paper: no positive eigenvalues");
  }

  double floor_sum = 0.0;
  double inv_sum = 0.0;
  for (Eigen::Index k = 0; k < num_users; ++k) {
    floor_sum += noise_power * (std::exp2(rate_floors(k)) - 1.0) / lambda(k);
    if (k < q) inv_sum += 1.0 / lambda(k);
  }
  const double alpha = (p_max - floor_sum + noise_power * inv_sum) / q;

  PowerAllocation out;
  out.p.resize(num_users);
  out.active_floor_mask.resize(num_users);
  for (Eigen::Index k = 0; k < num_users; ++k) {
    const double surplus = std::max(0.0, alpha * lambda(k) - noise_power);
    const double floor_part = noise_power * (std::exp2(rate_floors(k)) - 1.0) / lambda(k);
    out.p(k) = surplus + floor_part;
    out.active_floor_mask(k) = surplus == 0.0;
  }
  out.water_level = alpha;

  // Closed-form budget re-check through the eigenvalue weights 1/lambda_k.
  double used = 0.0;
  for (Eigen::Index k = 0; k < num_users; ++k) used += out.p(k) / lambda(k);
  out.budget_residual = used - p_max;
  out.feasible = used <= p_max * (1.0 + 1e-9) + 1e-12;
  return out;
}

PowerAllocation waterfill_exact(const WaterfillInput& inp) {
  const Eigen::Index num_users = inp.weights.size();
  if ((inp.weights.array() <= 0.0).any()) {
    throw std::invalid_argument("waterfill_exact: weights must be positive");
  }
  const double ln2 = std::numbers::ln2;
  const double floor_cost = inp.weights.dot(inp.p_floor);

  PowerAllocation out;
  out.p = inp.p_floor;
  out.active_floor_mask = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(num_users, true);

  if (floor_cost > inp.p_max * (1.0 + 1e-12) + 1e-300) {
    out.feasible = false;
    out.budget_residual = floor_cost - inp.p_max;
    return out;
  }

  const auto powers_at = [&](double nu) {
    VectorXd p(num_users);
    for (Eigen::Index k = 0; k < num_users; ++k) {
      p(k) = std::max(inp.p_floor(k), 1.0 / (nu * ln2 * inp.weights(k)) - inp.noise_power);
    }
    return p;
  };
  const auto budget_at = [&](const VectorXd& p) { return inp.weights.dot(p); };

  double lo = 1e-18, hi = 1e18;
  // budget_at(powers_at(nu)) is non-increasing in nu; find the tight point.
  if (budget_at(powers_at(hi)) > inp.p_max) {
    // Even the floors-only solution exceeds the budget; handled above, but
    // guard against roundoff at the boundary.
    out.feasible = true;
    out.budget_residual = floor_cost - inp.p_max;
    return out;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);  // geometric bisection over 36 decades
    if (budget_at(powers_at(mid)) > inp.p_max) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double nu = hi;
  out.p = powers_at(nu);

  // Exact tightening: with the active set fixed by nu, solve the water level
  // in closed form to remove the residual bisection error.
  double free_budget = inp.p_max;
  double free_weight = 0.0;
  for (Eigen::Index k = 0; k < num_users; ++k) {
    const double unconstrained = 1.0 / (nu * ln2 * inp.weights(k)) - inp.noise_power;
    if (unconstrained > inp.p_floor(k)) {
      free_weight += 1.0;  // each free user contributes mu/w_k * w_k = mu
      free_budget += inp.noise_power * inp.weights(k);
    } else {
      free_budget -= inp.weights(k) * inp.p_floor(k);
    }
  }
  if (free_weight > 0.0) {
    const double mu = free_budget / free_weight;  // common w_k (sigma^2 + p_k)
    for (Eigen::Index k = 0; k < num_users; ++k) {
      const double candidate = mu / inp.weights(k) - inp.noise_power;
      if (candidate > inp.p_floor(k)) {
        out.p(k) = candidate;
        out.active_floor_mask(k) = false;
      } else {
        out.p(k) = inp.p_floor(k);
        out.active_floor_mask(k) = true;
      }
    }
    out.water_level = mu;
  } else {
    out.water_level = 0.0;
    for (Eigen::Index k = 0; k < num_users; ++k) out.active_floor_mask(k) = true;
  }
  out.budget_residual = budget_at(out.p) - inp.p_max;
  out.feasible = true;
  return out;
}

}  // namespace pim
