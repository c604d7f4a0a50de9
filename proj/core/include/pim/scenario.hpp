// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pim/rng.hpp"

namespace pim {

using Eigen::MatrixXcd;
using Eigen::VectorXd;

/// Rate-floor assignment rule for a scenario.
struct RateFloorMode {
  enum class Kind { Fixed, SnrScaled };
  Kind kind = Kind::Fixed;
  double fixed_rate = 0.0;  // bits/s/Hz, used when kind == Fixed

  static RateFloorMode fixed(double r) { return {Kind::Fixed, r}; }
  /// R_min,k = log2(1 + SNR/(2K)) for all k.
  static RateFloorMode snr_scaled() { return {Kind::SnrScaled, 0.0}; }
};

struct SolverTolerances {
  double zf_tol = 1e-10;        // relative singular-value cutoff for pinv
  double mm_mse_tol = 1e-4;     // MM stopping rule on successive-iterate MSE
  double outer_rel_tol = 1e-6;  // relative sum-rate change in the outer loop
};

struct IterationCaps {
  int mm_max_iter = 500;
  int outer_max_iter = 50;
};

/// Dimensions, budgets and solver knobs for one scenario.
///
/// K <= N is required (zero-forcing solvability through the mirror). K <= M
/// is required for the full alternating solve but not for running the MM
/// phase step alone, so it is checked at solve time, not here.
struct ScenarioConfig {
  int num_users = 1;        // K
  int num_bs_antennas = 1;  // M
  int num_pim_units = 1;    // N
  double p_max = 1.0;       // linear power units
  double noise_power = 1.0; // sigma^2
  VectorXd rate_floors;     // length K, bits/s/Hz
  SolverTolerances tol;
  IterationCaps caps;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

/// One realization of the BS->PIM and PIM->users channels.
struct ChannelSet {
  MatrixXcd h1;  // N x M
  MatrixXcd h2;  // K x N
};

/// Draws h1, h2 with i.i.d. circularly symmetric standard complex Gaussian
/// entries. Identical (cfg, seed) pairs yield bit-identical matrices.
ChannelSet generate_channels(const ScenarioConfig& cfg, const RngSeed& seed);

/// Builds a config with sigma^2 = 1 and p_max = 10^(snr_db/10), rate floors
/// per the given mode.
ScenarioConfig snr_config(int num_users, int num_bs_antennas, int num_pim_units,
                          double snr_db, const RateFloorMode& mode);

}  // namespace pim
