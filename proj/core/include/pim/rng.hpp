// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>

namespace pim {

/// Identifies one Monte Carlo realization. The pair (master_seed,
/// realization_index) fixes every random draw in that realization, so
/// realizations can run in any order or in parallel with identical results.
struct RngSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t realization_index = 0;
};

/// Counter-based splittable generator (splitmix64 core). All floating-point
/// draws are derived from raw 64-bit words, so output is identical across
/// platforms and standard-library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Derives an independent stream for a sub-purpose (channel draw, phase
  /// init, baseline draws, ...) of one realization.
  static Rng stream(const RngSeed& seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  /// Uniform on [0, 1).
  double uniform();

  /// Uniform on [0, 2*pi).
  double uniform_phase();

  /// Standard normal, Box-Muller.
  double normal();

  /// Circularly symmetric complex Gaussian, zero mean, unit variance
  /// (real and imaginary parts each have variance 1/2).
  std::complex<double> complex_gaussian();

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace pim
