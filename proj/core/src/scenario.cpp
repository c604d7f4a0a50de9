// SPDX-License-Identifier: Apache-2.0
#include "pim/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace pim {

namespace stream_id {
constexpr std::uint64_t kChannels = 0;
}

void ScenarioConfig::validate() const {
  if (num_users < 1 || num_bs_antennas < 1 || num_pim_units < 1) {
    throw std::invalid_argument("scenario dimensions must be positive");
  }
  if (num_users > num_pim_units) {
    throw std::invalid_argument("K <= N required for zero-forcing");
  }
  if (!(noise_power > 0.0)) {
    throw std::invalid_argument("noise power must be positive");
  }
  if (p_max < 0.0) {
    throw std::invalid_argument("p_max must be nonnegative");
  }
  if (rate_floors.size() != num_users) {
    throw std::invalid_argument("rate_floors must have K entries");
  }
  if ((rate_floors.array() < 0.0).any()) {
    throw std::invalid_argument("rate floors must be nonnegative");
  }
  if (!(tol.zf_tol > 0.0) || !(tol.mm_mse_tol > 0.0) || !(tol.outer_rel_tol > 0.0)) {
    throw std::invalid_argument("tolerances must be positive");
  }
  if (caps.mm_max_iter < 1 || caps.outer_max_iter < 1) {
    throw std::invalid_argument("iteration caps must be positive");
  }
}

ChannelSet generate_channels(const ScenarioConfig& cfg, const RngSeed& seed) {
  cfg.validate();
  Rng rng = Rng::stream(seed, stream_id::kChannels);
  ChannelSet ch;
  ch.h1.resize(cfg.num_pim_units, cfg.num_bs_antennas);
  ch.h2.resize(cfg.num_users, cfg.num_pim_units);
  // Row-major fill order is part of the determinism contract.
  for (Eigen::Index r = 0; r < ch.h1.rows(); ++r)
    for (Eigen::Index c = 0; c < ch.h1.cols(); ++c) ch.h1(r, c) = rng.complex_gaussian();
  for (Eigen::Index r = 0; r < ch.h2.rows(); ++r)
    for (Eigen::Index c = 0; c < ch.h2.cols(); ++c) ch.h2(r, c) = rng.complex_gaussian();
  return ch;
}

ScenarioConfig snr_config(int num_users, int num_bs_antennas, int num_pim_units,
                          double snr_db, const RateFloorMode& mode) {
  ScenarioConfig cfg;
  cfg.num_users = num_users;
  cfg.num_bs_antennas = num_bs_antennas;
  cfg.num_pim_units = num_pim_units;
  cfg.noise_power = 1.0;
  cfg.p_max = std::pow(10.0, snr_db / 10.0);
  const double snr = cfg.p_max / cfg.noise_power;
  double floor = 0.0;
  switch (mode.kind) {
    case RateFloorMode::Kind::Fixed:
      floor = mode.fixed_rate;
      break;
    case RateFloorMode::Kind::SnrScaled:
      floor = std::log2(1.0 + snr / (2.0 * num_users));
      break;
  }
  cfg.rate_floors = VectorXd::Constant(num_users, floor);
  cfg.validate();
  return cfg;
}

}  // namespace pim
