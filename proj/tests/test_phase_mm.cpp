// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pim/phase_mm.hpp"

using namespace pim;

namespace {

ChannelSet random_channels(int k, int m, int n, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.num_users = k;
  cfg.num_bs_antennas = m;
  cfg.num_pim_units = n;
  cfg.rate_floors = VectorXd::Zero(k);
  return generate_channels(cfg, {seed, 0});
}

VectorXcd random_unit_modulus(int n, Rng& rng) {
  return PhaseVector::random(n, rng).conjugate_coefficients();
}

// Direct factored-form cost: ||H1+ diag(x) H2+ P^(1/2)||_F^2 evaluated with
// explicit matrix products, independent of the reduced map.
double direct_factored_cost(const ChannelSet& ch, const VectorXcd& x,
                            const VectorXd& p) {
  const MatrixXcd h1_pinv = pseudo_inverse(ch.h1, 1e-12);
  MatrixXcd h2_pinv = pseudo_inverse(ch.h2, 1e-12);
  if (p.size() > 0) {
    for (Eigen::Index k = 0; k < p.size(); ++k) h2_pinv.col(k) *= std::sqrt(p(k));
  }
  return (h1_pinv * x.asDiagonal() * h2_pinv).squaredNorm();
}

}  // namespace

TEST_CASE("reduced map: scalar factored form") {
  ChannelSet ch;
  ch.h1 = MatrixXcd::Constant(1, 1, 2.0);
  ch.h2 = MatrixXcd::Constant(1, 1, 3.0);
  const auto map = build_reduced_map(ch, VectorXd());
  REQUIRE(map.b.rows() == 1);
  REQUIRE(map.b.cols() == 1);
  CHECK(std::abs(map.b(0, 0)) == doctest::Approx(1.0 / 6.0));
  Rng rng(1);
  const auto x = random_unit_modulus(1, rng);
  CHECK(objective_power(map, x) == doctest::Approx(1.0 / 36.0));
}

TEST_CASE("reduced map: identity channels give unit-basis columns") {
  ChannelSet ch;
  ch.h1 = MatrixXcd::Identity(2, 2);
  ch.h2 = MatrixXcd::Identity(2, 2);
  const auto map = build_reduced_map(ch, VectorXd());
  // each column is the vec of e_i e_i^T; cost at unit modulus is N
  CHECK(map.b.cwiseAbs().sum() == doctest::Approx(2.0));
  Rng rng(2);
  const auto x = random_unit_modulus(2, rng);
  CHECK(objective_power(map, x) == doctest::Approx(2.0));
}

TEST_CASE("reduced-map cost equals the direct factored trace cost") {
  // Validates the vectorization identity (and the transpose correction) for
  // both weighting modes, over random phases.
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 2, m = 3, n = 3;
    const auto ch = random_channels(k, m, n, 100 + trial);
    VectorXd p(k);
    for (int i = 0; i < k; ++i) p(i) = 0.2 + 3.0 * rng.uniform();

    const auto unweighted = build_reduced_map(ch, VectorXd());
    const auto weighted = build_reduced_map(ch, p);
    for (int rep = 0; rep < 5; ++rep) {
      const auto x = random_unit_modulus(n, rng);
      const double direct_u = direct_factored_cost(ch, x, VectorXd());
      const double direct_w = direct_factored_cost(ch, x, p);
      CHECK(objective_power(unweighted, x) ==
            doctest::Approx(direct_u).epsilon(1e-8));
      CHECK(objective_power(weighted, x) == doctest::Approx(direct_w).epsilon(1e-8));
    }
  }
}

TEST_CASE("objective_power equals the quadratic form x^H R x") {
  Rng rng(5);
  const auto ch = random_channels(2, 3, 3, 9);
  const auto map = build_reduced_map(ch, VectorXd());
  const MatrixXcd gram = map.b.adjoint() * map.b;
  for (int rep = 0; rep < 10; ++rep) {
    const auto x = random_unit_modulus(3, rng);
    const double qf = (x.adjoint() * gram * x)(0).real();
    CHECK(objective_power(map, x) == doctest::Approx(qf).epsilon(1e-10));
  }
  CHECK(objective_power(ReducedMap{MatrixXcd::Zero(4, 2), false},
                        random_unit_modulus(2, rng)) == 0.0);
}

TEST_CASE("spectral surrogate: tangency and dominance identity") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ch = random_channels(2, 3, 3, 200 + trial);
    const auto map = build_reduced_map(ch, VectorXd());
    const auto x_t = random_unit_modulus(3, rng);
    const auto s = build_surrogate_spectral(map, x_t);

    const double obj_t = objective_power(map, x_t);
    CHECK(s.evaluate(x_t) == doctest::Approx(obj_t).epsilon(1e-8));

    const MatrixXcd gram = map.b.adjoint() * map.b;
    for (int rep = 0; rep < 1000; ++rep) {
      const auto x = random_unit_modulus(3, rng);
      const double gap = s.evaluate(x) - objective_power(map, x);
      CHECK(gap >= -1e-10);
      // dominance gap equals the PSD quadratic form in (x - x_t)
      const VectorXcd d = x - x_t;
      const double identity =
          (d.adjoint() * (s.lambda_max * MatrixXcd::Identity(3, 3) - gram) * d)(0)
              .real();
      CHECK(std::abs(gap - identity) <= 1e-8 * (1.0 + std::abs(identity)));
    }
  }
}

TEST_CASE("spectral surrogate equals objective when R is a multiple of I") {
  // b with orthogonal equal-norm columns makes R = lambda_max I exactly.
  ReducedMap map;
  map.b = MatrixXcd::Zero(4, 2);
  map.b(0, 0) = 1.5;
  map.b(2, 1) = 1.5;
  Rng rng(8);
  const auto x_t = random_unit_modulus(2, rng);
  const auto s = build_surrogate_spectral(map, x_t);
  for (int rep = 0; rep < 100; ++rep) {
    const auto x = random_unit_modulus(2, rng);
    CHECK(s.evaluate(x) == doctest::Approx(objective_power(map, x)).epsilon(1e-10));
  }
}

TEST_CASE("paper surrogate: N=1 is constant in phase and keeps the iterate") {
  ChannelSet ch;
  ch.h1 = MatrixXcd::Constant(1, 1, 2.0);
  ch.h2 = MatrixXcd::Constant(1, 1, 3.0);
  const auto map = build_reduced_map(ch, VectorXd());
  Rng rng(9);
  const auto x_t = random_unit_modulus(1, rng);
  const auto s = build_surrogate_paper(map, x_t);
  const auto x_next = minimize_surrogate(map, s);
  CHECK(std::abs(x_next(0) - x_t(0)) < 1e-12);
  CHECK(objective_power(map, x_next) == doctest::Approx(objective_power(map, x_t)));
}

TEST_CASE("paper surrogate: tangency and dominance are measured, fallback covers failures") {
  // The literal coefficient recipe carries over from a dimensionally
  // inconsistent statement; its MM validity is checked empirically rather
  // than assumed. Violations are tolerated here only because auto mode
  // switches to the spectral majorizer the moment descent fails.
  Rng rng(10);
  int tangency_failures = 0;
  int dominance_failures = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto ch = random_channels(2, 2, 2, 300 + trial);
    const auto map = build_reduced_map(ch, VectorXd());
    const auto x_t = random_unit_modulus(2, rng);
    const auto s = build_surrogate_paper(map, x_t);

    const double obj_t = objective_power(map, x_t);
    if (std::abs(s.evaluate(x_t) - obj_t) > 1e-8 * (1.0 + obj_t)) ++tangency_failures;
    for (int rep = 0; rep < 100; ++rep) {
      const auto x = random_unit_modulus(2, rng);
      if (s.evaluate(x) < objective_power(map, x) - 1e-10) ++dominance_failures;
    }
  }
  MESSAGE("paper-surrogate tangency failures: ", tangency_failures, "/10, ",
          "dominance failures: ", dominance_failures, "/1000");

  // Regardless of surrogate validity, auto mode must produce a non-increasing
  // objective trace.
  for (int trial = 0; trial < 10; ++trial) {
    const auto ch = random_channels(2, 3, 3, 400 + trial);
    const auto map = build_reduced_map(ch, VectorXd());
    Rng rng2(500 + trial);
    const auto x0 = random_unit_modulus(3, rng2);
    const auto st = mm_loop(map, x0, 1e-8, 100, MMKind::Auto);
    for (std::size_t t = 1; t < st.objective_trace.size(); ++t) {
      CHECK(st.objective_trace[t] <= st.objective_trace[t - 1] + 1e-9);
    }
  }
}

TEST_CASE("minimize_surrogate: real positive linear solve gives the all-ones vector") {
  ReducedMap map;
  map.b = MatrixXcd::Identity(2, 2) * 0.5;
  Surrogate s;
  s.kind = SurrogateKind::Spectral;
  s.quad = MatrixXcd::Identity(2, 2);
  s.q_lin = -VectorXcd::Ones(2);  // y = +1 vector
  s.expansion = VectorXcd::Ones(2);
  const auto x = minimize_surrogate(map, s);
  CHECK((x - VectorXcd::Ones(2)).norm() < 1e-12);
}

TEST_CASE("MM loop converges to the exhaustive grid optimum for N=2") {
  // Primary correctness oracle: after full convergence the MM objective is
  // within 1e-4 relative of the 3600-point-per-axis grid minimum.
  for (int trial = 0; trial < 5; ++trial) {
    const auto ch = random_channels(2, 2, 2, 600 + trial);
    const auto map = build_reduced_map(ch, VectorXd());
    Rng rng(700 + trial);
    const auto x0 = random_unit_modulus(2, rng);
    const auto st = mm_loop(map, x0, 1e-14, 3000, MMKind::Spectral);

    // The objective depends only on the phase difference; scan it finely.
    double grid_best = std::numeric_limits<double>::infinity();
    const int steps = 3600;
    for (int i = 0; i < steps; ++i) {
      VectorXcd x(2);
      x(0) = 1.0;
      x(1) = std::polar(1.0, 2.0 * std::numbers::pi * i / steps);
      grid_best = std::min(grid_best, objective_power(map, x));
    }
    const double mm_obj = st.objective_trace.back();
    CHECK(mm_obj <= grid_best * (1.0 + 1e-4) + 1e-12);
  }
}

TEST_CASE("mm_loop bookkeeping") {
  SUBCASE("fixed point converges immediately with zero MSE") {
    ChannelSet ch;
    ch.h1 = MatrixXcd::Constant(1, 1, 1.0);
    ch.h2 = MatrixXcd::Constant(1, 1, 1.0);
    const auto map = build_reduced_map(ch, VectorXd());
    const auto st = mm_loop(map, VectorXcd::Ones(1), 1e-6, 50, MMKind::Spectral);
    CHECK(st.converged);
    CHECK(st.iterations <= 2);
    CHECK(st.mse_trace.back() == 0.0);
  }
  SUBCASE("identical inputs give identical traces") {
    const auto ch = random_channels(2, 3, 3, 800);
    const auto map = build_reduced_map(ch, VectorXd());
    Rng rng(801);
    const auto x0 = random_unit_modulus(3, rng);
    const auto a = mm_loop(map, x0, 1e-6, 100, MMKind::Spectral);
    const auto b = mm_loop(map, x0, 1e-6, 100, MMKind::Spectral);
    CHECK(a.objective_trace == b.objective_trace);
    CHECK(a.mse_trace == b.mse_trace);
  }
  SUBCASE("unit modulus preserved exactly at every iterate") {
    const auto ch = random_channels(3, 4, 4, 900);
    const auto map = build_reduced_map(ch, VectorXd());
    Rng rng(901);
    const auto x0 = random_unit_modulus(4, rng);
    const auto st = mm_loop(map, x0, 1e-10, 200, MMKind::Spectral);
    for (Eigen::Index i = 0; i < st.x.size(); ++i) {
      CHECK(std::abs(std::abs(st.x(i)) - 1.0) < 1e-15);
    }
  }
}

TEST_CASE("spectral MM converges within 200 iterations on large instances") {
  // Mirrors the convergence study scale: K=16, M=8, N=16.
  int converged = 0;
  const int runs = 20;
  for (int trial = 0; trial < runs; ++trial) {
    const auto ch = random_channels(16, 8, 16, 1000 + trial);
    const auto map = build_reduced_map(ch, VectorXd());
    Rng rng(1100 + trial);
    const auto x0 = random_unit_modulus(16, rng);
    const auto st = mm_loop(map, x0, 1e-4, 200, MMKind::Spectral);
    if (st.converged) ++converged;
  }
  CHECK(converged >= runs * 95 / 100);
}
