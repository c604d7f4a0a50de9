// SPDX-License-Identifier: Apache-2.0
#include "pim/phase_mm.hpp"

#include <cmath>
#include <complex>

namespace pim {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

ReducedMap build_reduced_map(const ChannelSet& ch, const VectorXd& user_powers,
                             double pinv_tol) {
  const Eigen::Index num_units = ch.h1.rows();
  const Eigen::Index num_antennas = ch.h1.cols();
  const Eigen::Index num_users = ch.h2.rows();

  const MatrixXcd h1_pinv = pseudo_inverse(ch.h1, pinv_tol);  // M x N
  MatrixXcd h2_pinv = pseudo_inverse(ch.h2, pinv_tol);        // N x K
  if (user_powers.size() > 0) {
    for (Eigen::Index k = 0; k < num_users; ++k) {
      h2_pinv.col(k) *= std::sqrt(user_powers(k));
    }
  }

  ReducedMap map;
  map.power_weighted = user_powers.size() > 0;
  map.b.resize(num_users * num_antennas, num_units);
  // Column i of b is vec( h1_pinv.col(i) * h2_pinv.row(i) ), column-major.
  for (Eigen::Index i = 0; i < num_units; ++i) {
    for (Eigen::Index k = 0; k < num_users; ++k) {
      for (Eigen::Index m = 0; m < num_antennas; ++m) {
        map.b(k * num_antennas + m, i) = h1_pinv(m, i) * h2_pinv(i, k);
      }
    }
  }
  return map;
}

double objective_power(const ReducedMap& map, const VectorXcd& x) {
  return (map.b * x).squaredNorm();
}

double Surrogate::evaluate(const VectorXcd& x) const {
  const double quad_part = (x.adjoint() * quad * x)(0).real();
  const double lin_part = 2.0 * (x.adjoint() * q_lin)(0).real();
  return quad_part + lin_part + const_term;
}

Surrogate build_surrogate_paper(const ReducedMap& map, const VectorXcd& x_t) {
  const Eigen::Index num_units = map.num_units();
  const MatrixXcd gram = map.b.adjoint() * map.b;  // R = b^H b

  const VectorXcd lifted = map.b * x_t;
  const Eigen::VectorXd c = lifted.cwiseAbs();
  const double c_max = c.size() > 0 ? c.maxCoeff() : 0.0;

  Surrogate s;
  s.kind = SurrogateKind::Paper;
  s.expansion = x_t;
  s.c_max = c_max;
  s.quad = c_max * gram;  // M
  const MatrixXcd big_l =
      map.b.adjoint() * c.asDiagonal() * map.b -
      static_cast<double>(num_units * num_units) * gram;  // L
  s.q_lin = (big_l - s.quad) * x_t;
  s.const_term = (x_t.adjoint() * (s.quad - big_l) * x_t)(0).real();
  return s;
}

Surrogate build_surrogate_spectral(const ReducedMap& map, const VectorXcd& x_t) {
  const Eigen::Index num_units = map.num_units();
  const MatrixXcd gram = map.b.adjoint() * map.b;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
  const double lambda_max = eig.eigenvalues().maxCoeff();

  Surrogate s;
  s.kind = SurrogateKind::Spectral;
  s.expansion = x_t;
  s.lambda_max = lambda_max;
  s.quad = lambda_max * MatrixXcd::Identity(num_units, num_units);
  s.q_lin = (gram - s.quad) * x_t;
  s.const_term = lambda_max * static_cast<double>(num_units) -
                 (x_t.adjoint() * gram * x_t)(0).real();
  return s;
}

VectorXcd minimize_surrogate(const ReducedMap& map, const Surrogate& s) {
  VectorXcd y;
  if (s.kind == SurrogateKind::Paper) {
    // Least-squares solve M y = (M - L) x_t; the Gram matrix can be singular
    // when K*M < N.
    y = pseudo_inverse(s.quad, 1e-12) * (-s.q_lin);
  } else {
    y = -s.q_lin;  // (lambda_max I - R) x_t
  }

  const Eigen::Index n = y.size();
  VectorXcd plus(n), minus(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(y(i)) <= 1e-14) {
      plus(i) = s.expansion(i);
      minus(i) = s.expansion(i);
    } else {
      const double a = std::arg(y(i));
      plus(i) = std::polar(1.0, a);
      minus(i) = std::polar(1.0, -a);
    }
  }
  // The listed update and the closed-form minimizer disagree on the sign of
  // the phase; score both against the true objective and keep the better.
  return objective_power(map, plus) <= objective_power(map, minus) ? plus : minus;
}

namespace {

// Spectral update with the Gram matrix and its largest eigenvalue hoisted
// out of the iteration loop.
VectorXcd spectral_step(const MatrixXcd& gram, double lambda_max,
                        const VectorXcd& x_t) {
  const VectorXcd y = lambda_max * x_t - gram * x_t;
  VectorXcd out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    out(i) = std::abs(y(i)) <= 1e-14 ? x_t(i) : std::polar(1.0, std::arg(y(i)));
  }
  return out;
}

}  // namespace

MMState mm_loop(const ReducedMap& map, const VectorXcd& x0, double mse_tol,
                int max_iter, MMKind kind) {
  MMState st;
  st.x = x0;
  double obj = objective_power(map, st.x);
  st.objective_trace.push_back(obj);

  SurrogateKind active =
      (kind == MMKind::Spectral) ? SurrogateKind::Spectral : SurrogateKind::Paper;
  const double n = static_cast<double>(x0.size());

  const MatrixXcd gram = map.b.adjoint() * map.b;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
  const double lambda_max = eig.eigenvalues().maxCoeff();

  for (int t = 1; t <= max_iter; ++t) {
    VectorXcd x_new;
    if (active == SurrogateKind::Paper) {
      const Surrogate s = build_surrogate_paper(map, st.x);
      x_new = minimize_surrogate(map, s);
    } else {
      x_new = spectral_step(gram, lambda_max, st.x);
    }
    double obj_new = objective_power(map, x_new);

    if (kind == MMKind::Auto && active == SurrogateKind::Paper &&
        obj_new > obj + 1e-12 * (1.0 + obj)) {
      active = SurrogateKind::Spectral;
      st.used_fallback = true;
      x_new = spectral_step(gram, lambda_max, st.x);
      obj_new = objective_power(map, x_new);
    }

    const double mse = (x_new - st.x).squaredNorm() / n;
    st.objective_trace.push_back(obj_new);
    st.mse_trace.push_back(mse);
    st.iterations = t;
    st.x = x_new;
    obj = obj_new;
    if (mse < mse_tol) {
      st.converged = true;
      break;
    }
  }
  return st;
}

}  // namespace pim
