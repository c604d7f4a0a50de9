// SPDX-License-Identifier: Apache-2.0
#include "pim/rng.hpp"

#include <cmath>
#include <numbers>

namespace pim {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng Rng::stream(const RngSeed& seed, std::uint64_t stream_id) {
  std::uint64_t s = seed.master_seed;
  std::uint64_t a = splitmix64(s);
  s = a ^ (seed.realization_index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
  std::uint64_t b = splitmix64(s);
  s = b ^ (stream_id * 0x9e3779b97f4a7c15ULL + 1ULL);
  return Rng(splitmix64(s));
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
  // 53 mantissa bits, uniform on [0,1)
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_phase() { return 2.0 * std::numbers::pi * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

std::complex<double> Rng::complex_gaussian() {
  const double scale = std::numbers::sqrt2 / 2.0;  // 1/sqrt(2)
  const double re = normal();
  const double im = normal();
  return {re * scale, im * scale};
}

}  // namespace pim
