// SPDX-License-Identifier: Apache-2.0
#include "pim/precoding.hpp"

#include <cmath>
#include <numbers>

namespace pim {

VectorXcd PhaseVector::coefficients() const {
  VectorXcd phi(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    phi(i) = std::polar(1.0, theta(i));
  }
  return phi;
}

VectorXcd PhaseVector::conjugate_coefficients() const {
  VectorXcd x(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    x(i) = std::polar(1.0, -theta(i));
  }
  return x;
}

PhaseVector PhaseVector::zeros(int n) { return {VectorXd::Zero(n)}; }

PhaseVector PhaseVector::random(int n, Rng& rng) {
  VectorXd th(n);
  for (int i = 0; i < n; ++i) th(i) = rng.uniform_phase();
  return {th};
}

PhaseVector PhaseVector::from_coefficients(const VectorXcd& phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  VectorXd th(phi.size());
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    double a = std::arg(phi(i));
    if (a < 0.0) a += two_pi;
    if (a >= two_pi) a -= two_pi;
    th(i) = a;
  }
  return {th};
}

MatrixXcd cascade(const ChannelSet& ch, const PhaseVector& phases) {
  return ch.h2 * phases.coefficients().asDiagonal() * ch.h1;
}

MatrixXcd pseudo_inverse(const MatrixXcd& a, double tol) {
  Eigen::JacobiSVD<MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? tol * s(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Precoder zf_precoder(const MatrixXcd& w, double zf_tol) {
  Precoder prec;
  Eigen::JacobiSVD<MatrixXcd> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  prec.max_singular_value = s.size() > 0 ? s(0) : 0.0;
  prec.min_singular_value = s.size() > 0 ? s(s.size() - 1) : 0.0;
  const double cutoff = zf_tol * prec.max_singular_value;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) {
      inv(i) = 1.0 / s(i);
      ++rank;
    }
  }
  prec.numerical_rank = rank;
  prec.rank_deficient = rank < w.rows();
  prec.g = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
  prec.effective_channel = w * prec.g;
  return prec;
}

double power_cost(const Precoder& prec, const VectorXd& p) {
  double cost = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    cost += p(k) * prec.g.col(k).squaredNorm();
  }
  return cost;
}

VectorXd sinr(const ChannelSet& ch, const PhaseVector& phases, const Precoder& prec,
              const VectorXd& p, double noise_power) {
  const MatrixXcd w = cascade(ch, phases);
  const MatrixXcd eff = w * prec.g;  // eff(k, i) = h_{2,k} Theta H1 g_i
  const Eigen::Index num_users = eff.rows();
  VectorXd gamma(num_users);
  for (Eigen::Index k = 0; k < num_users; ++k) {
    double signal = p(k) * std::norm(eff(k, k));
    double interference = 0.0;
    for (Eigen::Index i = 0; i < num_users; ++i) {
      if (i != k) interference += p(i) * std::norm(eff(k, i));
    }
    gamma(k) = signal / (interference + noise_power);
  }
  return gamma;
}

double sum_rate(const VectorXd& p, double noise_power) {
  double rate = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    rate += std::log2(1.0 + p(k) / noise_power);
  }
  return rate;
}

}  // namespace pim
