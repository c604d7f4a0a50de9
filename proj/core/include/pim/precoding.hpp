// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "pim/scenario.hpp"

namespace pim {

using Eigen::VectorXcd;

/// N mirror phases theta_i in [0, 2pi). The unit-modulus reflection
/// coefficients phi_i = exp(j*theta_i) are reconstructed on demand so the
/// modulus is exactly 1 by construction.
struct PhaseVector {
  VectorXd theta;

  VectorXcd coefficients() const;             // phi_i = exp(+j theta_i)
  VectorXcd conjugate_coefficients() const;   // exp(-j theta_i), the MM variable

  static PhaseVector zeros(int n);
  static PhaseVector random(int n, Rng& rng);
  /// Recovers phases from any nonzero complex vector, wrapped to [0, 2pi).
  static PhaseVector from_coefficients(const VectorXcd& phi);
};

/// Zero-forcing precoder through the cascaded channel, with a rank report.
struct Precoder {
  MatrixXcd g;                 // M x K, columns g_k
  MatrixXcd effective_channel; // K x K, W * g
  double min_singular_value = 0.0;
  double max_singular_value = 0.0;
  int numerical_rank = 0;
  bool rank_deficient = false; // rank < K; callers treat as ZF-infeasible
};

/// W = H2 * diag(exp(j theta)) * H1, the K x M cascaded channel.
MatrixXcd cascade(const ChannelSet& ch, const PhaseVector& phases);

/// Moore-Penrose pseudo-inverse of W by SVD. Singular values below
/// zf_tol * sigma_max are treated as zero.
Precoder zf_precoder(const MatrixXcd& w, double zf_tol);

/// Plain SVD pseudo-inverse (same cutoff rule), for matrices that are not
/// precoders.
MatrixXcd pseudo_inverse(const MatrixXcd& a, double tol);

/// tr(g P g^H) = sum_k p_k ||g_k||^2 -- the transmit power needed to send
/// per-user powers p through the precoder.
double power_cost(const Precoder& prec, const VectorXd& p);

/// Per-user SINR from the general interference formula; does not assume the
/// precoder zero-forces.
VectorXd sinr(const ChannelSet& ch, const PhaseVector& phases, const Precoder& prec,
              const VectorXd& p, double noise_power);

/// sum_k log2(1 + p_k / sigma^2).
double sum_rate(const VectorXd& p, double noise_power);

}  // namespace pim
