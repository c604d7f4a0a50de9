// SPDX-License-Identifier: Apache-2.0
#include "pim/alternating.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pim {

namespace {
constexpr std::uint64_t kPhaseInitStream = 1;
}

PowerAllocation allocate_powers(const MatrixXcd& w_cascade, const Precoder& prec,
                                const ScenarioConfig& cfg, WaterfillSolver solver) {
  const VectorXd floors = min_powers(cfg.rate_floors, cfg.noise_power);
  if (solver == WaterfillSolver::Exact) {
    WaterfillInput inp;
    inp.weights.resize(cfg.num_users);
    for (int k = 0; k < cfg.num_users; ++k) {
      inp.weights(k) = prec.g.col(k).squaredNorm();
    }
    inp.p_floor = floors;
    inp.p_max = cfg.p_max;
    inp.noise_power = cfg.noise_power;
    return waterfill_exact(inp);
  }

  // Eigenvalue formula: descending eigenvalues of W W^H paired with users
  // sorted by descending rate floor.
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(w_cascade * w_cascade.adjoint(),
                                               Eigen::EigenvaluesOnly);
  VectorXd lambda = eig.eigenvalues().reverse();  // descending
  std::vector<int> order(cfg.num_users);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return cfg.rate_floors(a) > cfg.rate_floors(b);
  });
  VectorXd floors_sorted(cfg.num_users);
  for (int i = 0; i < cfg.num_users; ++i) floors_sorted(i) = cfg.rate_floors(order[i]);

  PowerAllocation sorted =
      waterfill_paper(lambda, floors_sorted, cfg.p_max, cfg.noise_power);
  PowerAllocation out = sorted;
  for (int i = 0; i < cfg.num_users; ++i) {
    out.p(order[i]) = sorted.p(i);
    out.active_floor_mask(order[i]) = sorted.active_floor_mask(i);
  }
  return out;
}

Solution solve(const ChannelSet& ch, const ScenarioConfig& cfg, const RngSeed& seed,
               const SolveOptions& options) {
  cfg.validate();
  Rng rng = Rng::stream(seed, kPhaseInitStream);

  Solution sol;
  sol.phases = PhaseVector::random(cfg.num_pim_units, rng);
  const VectorXd floors = min_powers(cfg.rate_floors, cfg.noise_power);
  VectorXd p = floors;  // powers start at the minimal feasible point

  double prev_rate = -std::numeric_limits<double>::infinity();
  sol.status = SolveStatus::MaxIterations;

  for (int outer = 1; outer <= cfg.caps.outer_max_iter; ++outer) {
    // Phase step: minimize the factored power cost at the current powers.
    // With an all-zero power vector the weighted objective is identically
    // zero, so fall back to the unweighted map for that step.
    VectorXd weight_powers;  // empty = P = I
    if (options.weighting == WeightingMode::Weighted && p.maxCoeff() > 0.0) {
      weight_powers = p;
    }
    const ReducedMap map = build_reduced_map(ch, weight_powers, cfg.tol.zf_tol);
    const MMState mm = mm_loop(map, sol.phases.conjugate_coefficients(),
                               cfg.tol.mm_mse_tol, cfg.caps.mm_max_iter,
                               options.surrogate);
    sol.total_mm_iterations += mm.iterations;
    const PhaseVector cand_phases = PhaseVector::from_coefficients(mm.x.conjugate());

    const MatrixXcd w = cascade(ch, cand_phases);
    const Precoder prec = zf_precoder(w, cfg.tol.zf_tol);
    if (prec.rank_deficient) {
      sol.status = SolveStatus::RankDeficient;
      sol.outer_iterations = outer;
      return sol;
    }

    // Feasibility test at the QoS floor powers (Algorithm line 13).
    if (power_cost(prec, floors) > cfg.p_max * (1.0 + 1e-12)) {
      sol.status = SolveStatus::Infeasible;
      sol.outer_iterations = outer;
      return sol;
    }

    const PowerAllocation alloc = allocate_powers(w, prec, cfg, options.waterfill);
    if (!alloc.feasible) {
      sol.status = SolveStatus::Infeasible;
      sol.outer_iterations = outer;
      return sol;
    }
    const double rate = sum_rate(alloc.p, cfg.noise_power);

    // Monotone safeguard: the phase step minimizes the factored cost, which
    // upper-bounds the true pseudo-inverse cost but does not coincide with
    // it for every geometry. If the step would lower the achieved sum rate,
    // keep the previous iterate and stop.
    if (rate < prev_rate) {
      sol.status = SolveStatus::Converged;
      sol.outer_iterations = outer;
      return sol;
    }

    sol.phases = cand_phases;
    sol.powers = alloc;
    sol.precoder = prec;
    sol.sum_rate = rate;
    p = alloc.p;
    sol.outer_trace.push_back({rate, power_cost(prec, alloc.p), mm.iterations});
    sol.outer_iterations = outer;

    if (std::isfinite(prev_rate) &&
        rate - prev_rate <= cfg.tol.outer_rel_tol * std::max(1.0, std::abs(prev_rate))) {
      sol.status = SolveStatus::Converged;
      return sol;
    }
    prev_rate = rate;
  }
  return sol;
}

VectorXd qos_violation(const Solution& sol, const ScenarioConfig& cfg) {
  VectorXd v(cfg.num_users);
  for (int k = 0; k < cfg.num_users; ++k) {
    v(k) = cfg.rate_floors(k) - std::log2(1.0 + sol.powers.p(k) / cfg.noise_power);
  }
  return v;
}

}  // namespace pim
