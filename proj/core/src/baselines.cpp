// SPDX-License-Identifier: Apache-2.0
#include "pim/baselines.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pim {

namespace {
constexpr std::uint64_t kBaselinePhaseStream = 2;
constexpr std::uint64_t kGlobalSearchStream = 3;

// Fast path: the water-filled sum rate needs only the diagonal of
// (W W^H)^{-1}, which equals g^H g for the full-rank ZF precoder.
bool waterfilled_rate(const ChannelSet& ch, const ScenarioConfig& cfg,
                      const PhaseVector& phases, double& rate_out) {
  const MatrixXcd w = cascade(ch, phases);
  const MatrixXcd gram = w * w.adjoint();
  Eigen::LDLT<MatrixXcd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
  const MatrixXcd inv = ldlt.solve(MatrixXcd::Identity(gram.rows(), gram.cols()));
  // Guard against near-singular cascades slipping through LDLT.
  if (!inv.allFinite()) return false;

  WaterfillInput inp;
  inp.weights = inv.diagonal().real();
  if ((inp.weights.array() <= 0.0).any()) return false;
  inp.p_floor = min_powers(cfg.rate_floors, cfg.noise_power);
  inp.p_max = cfg.p_max;
  inp.noise_power = cfg.noise_power;
  const PowerAllocation alloc = waterfill_exact(inp);
  if (!alloc.feasible) return false;
  rate_out = sum_rate(alloc.p, cfg.noise_power);
  return true;
}

}  // namespace

bool evaluate_phases(const ChannelSet& ch, const ScenarioConfig& cfg,
                     const PhaseVector& phases, double& sum_rate_out) {
  return waterfilled_rate(ch, cfg, phases, sum_rate_out);
}

BaselineResult random_phase_baseline(const ChannelSet& ch, const ScenarioConfig& cfg,
                                     const RngSeed& seed) {
  cfg.validate();
  Rng rng = Rng::stream(seed, kBaselinePhaseStream);
  BaselineResult res;
  res.kind = BaselineKind::RandomPhase;
  res.phases = PhaseVector::random(cfg.num_pim_units, rng);
  res.evaluations = 1;

  const MatrixXcd w = cascade(ch, res.phases);
  const Precoder prec = zf_precoder(w, cfg.tol.zf_tol);
  if (prec.rank_deficient) {
    res.rank_deficient = true;
    return res;
  }
  const PowerAllocation alloc = allocate_powers(w, prec, cfg, WaterfillSolver::Exact);
  res.feasible = alloc.feasible;
  if (alloc.feasible) res.sum_rate = sum_rate(alloc.p, cfg.noise_power);
  return res;
}

BaselineResult global_search(const ChannelSet& ch, const ScenarioConfig& cfg,
                             const RngSeed& seed, const GlobalSearchOptions& opt) {
  cfg.validate();
  Rng rng = Rng::stream(seed, kGlobalSearchStream);
  BaselineResult best;
  best.kind = BaselineKind::GlobalSearch;
  best.sum_rate = -1.0;

  long evals = 0;
  bool any_converged = false;
  const int n = cfg.num_pim_units;

  for (int start = 0; start < opt.restarts; ++start) {
    PhaseVector theta = PhaseVector::random(n, rng);
    double current = 0.0;
    ++evals;
    bool ok = waterfilled_rate(ch, cfg, theta, current);
    if (!ok) current = -1.0;

    double step = opt.initial_step;
    while (step >= opt.min_step && evals < opt.max_evaluations) {
      bool improved = false;
      for (int i = 0; i < n && evals < opt.max_evaluations; ++i) {
        for (const double delta : {step, -step}) {
          PhaseVector trial = theta;
          trial.theta(i) = std::fmod(trial.theta(i) + delta + 2.0 * std::numbers::pi,
                                     2.0 * std::numbers::pi);
          double value = 0.0;
          ++evals;
          if (waterfilled_rate(ch, cfg, trial, value) && value > current) {
            theta = trial;
            current = value;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (step < opt.min_step) any_converged = true;

    if (current > best.sum_rate) {
      best.sum_rate = current;
      best.phases = theta;
      best.feasible = current >= 0.0;
    }
    if (evals >= opt.max_evaluations) break;
  }
  best.evaluations = evals;
  if (!any_converged) {
    throw std::runtime_error("global_search: evaluation budget exhausted before convergence");
  }
  return best;
}

BaselineResult grid_oracle(const ChannelSet& ch, const ScenarioConfig& cfg,
                           int steps_per_dim) {
  cfg.validate();
  const int n = cfg.num_pim_units;
  if (n > 3) {
    throw std::invalid_argument("grid_oracle: N must be <= 3");
  }
  if (steps_per_dim < 1 || steps_per_dim > 3600) {
    throw std::invalid_argument("grid_oracle: steps_per_dim must be in [1, 3600]");
  }

  BaselineResult best;
  best.kind = BaselineKind::Grid;
  best.sum_rate = -1.0;
  const double step = 2.0 * std::numbers::pi / steps_per_dim;

  long total = 1;
  for (int i = 0; i < n; ++i) total *= steps_per_dim;

  PhaseVector theta = PhaseVector::zeros(n);
  std::vector<int> idx(n, 0);
  for (long point = 0; point < total; ++point) {
    for (int i = 0; i < n; ++i) theta.theta(i) = idx[i] * step;
    double value = 0.0;
    ++best.evaluations;
    if (waterfilled_rate(ch, cfg, theta, value) && value > best.sum_rate) {
      best.sum_rate = value;
      best.phases = theta;
      best.feasible = true;
    }
    // lexicographic advance, last dimension fastest
    for (int i = n - 1; i >= 0; --i) {
      if (++idx[i] < steps_per_dim) break;
      idx[i] = 0;
    }
  }
  return best;
}

}  // namespace pim
