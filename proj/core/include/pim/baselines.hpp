// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "pim/alternating.hpp"

namespace pim {

enum class BaselineKind { RandomPhase, GlobalSearch, Grid };

struct BaselineResult {
  BaselineKind kind = BaselineKind::RandomPhase;
  double sum_rate = 0.0;
  PhaseVector phases;
  long evaluations = 0;
  bool feasible = false;
  bool rank_deficient = false;
};

struct GlobalSearchOptions {
  int restarts = 20;
  double initial_step = 0.8;       // radians
  double min_step = 1e-4;          // radians; per-start convergence threshold
  long max_evaluations = 2000000;  // total budget across all restarts
};

/// Non-configurable mirror: one frozen uniform-random phase draw, then the
/// power step only.
BaselineResult random_phase_baseline(const ChannelSet& ch, const ScenarioConfig& cfg,
                                     const RngSeed& seed);

/// Multi-start coordinate descent with shrinking step over the phase torus,
/// each candidate scored by its exact water-filled sum rate. Restarts use
/// nested seeding, so a larger restart count never returns a worse value.
/// Throws std::runtime_error when the evaluation budget is exhausted before
/// any start converges.
BaselineResult global_search(const ChannelSet& ch, const ScenarioConfig& cfg,
                             const RngSeed& seed, const GlobalSearchOptions& opt = {});

/// Exhaustive uniform phase grid, N <= 3 only. Ties break toward the
/// lexicographically-first grid point.
BaselineResult grid_oracle(const ChannelSet& ch, const ScenarioConfig& cfg,
                           int steps_per_dim);

/// Water-filled sum rate at fixed phases (the objective all baselines share).
/// Returns false when the cascade is rank deficient or the floors do not fit.
bool evaluate_phases(const ChannelSet& ch, const ScenarioConfig& cfg,
                     const PhaseVector& phases, double& sum_rate_out);

}  // namespace pim
