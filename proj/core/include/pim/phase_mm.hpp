// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pim/precoding.hpp"
#include "pim/scenario.hpp"

namespace pim {

/// Reduced linear map behind the phase objective.
///
/// The factored ZF transmit-power cost ||H1+ diag(x) H2+ P^(1/2)||_F^2, with
/// x_i = exp(-j theta_i), is a quadratic ||b x||^2 in the N diagonal entries
/// only: column i of b is the vectorized outer product of (column i of H1+)
/// and (row i of H2+ P^(1/2)). The power-weighted variant folds sqrt(p) into
/// the H2+ rows; the unweighted variant uses P = I.
struct ReducedMap {
  Eigen::MatrixXcd b;    // (K*M) x N
  bool power_weighted = false;

  Eigen::Index num_units() const { return b.cols(); }
};

enum class SurrogateKind { Paper, Spectral };

/// One MM majorizer built at an expansion point x_t: a quadratic
/// x^H Q x + 2 Re{x^H q_lin} + const_term. On the unit-modulus set only the
/// linear part moves the minimizer.
struct Surrogate {
  SurrogateKind kind = SurrogateKind::Spectral;
  Eigen::MatrixXcd quad;       // Q
  Eigen::VectorXcd q_lin;      // linear coefficient
  double const_term = 0.0;
  Eigen::VectorXcd expansion;  // x_t
  double lambda_max = 0.0;     // spectral kind
  double c_max = 0.0;          // paper kind

  /// Surrogate value at x.
  double evaluate(const Eigen::VectorXcd& x) const;
};

enum class MMKind { Paper, Spectral, Auto };

/// Trajectory of one MM run.
struct MMState {
  Eigen::VectorXcd x;                  // unit-modulus, x_i = exp(-j theta_i)
  std::vector<double> objective_trace;
  std::vector<double> mse_trace;
  int iterations = 0;
  bool converged = false;
  bool used_fallback = false;          // auto mode switched to spectral
};

/// Builds the reduced map from the channel pseudo-inverses. Pass an empty
/// vector for the unweighted (P = I) variant.
ReducedMap build_reduced_map(const ChannelSet& ch, const VectorXd& user_powers,
                             double pinv_tol = 1e-10);

/// ||b x||^2, the factored transmit-power cost at unit-modulus x.
double objective_power(const ReducedMap& map, const Eigen::VectorXcd& x);

/// Majorizer assembled from the reduced map with the literal coefficient
/// recipe: c_t = |b x_t| per component of the lifted vector,
/// c_max = max(c_t), Q = c_max b^H b, and the linear/constant terms induced
/// by L = b^H diag(c_t) b - N^2 b^H b. Tangency and dominance are *checked*
/// by callers, never assumed; mm_loop's auto mode falls back to the spectral
/// majorizer when descent fails.
Surrogate build_surrogate_paper(const ReducedMap& map, const Eigen::VectorXcd& x_t);

/// Majorizer with Q = lambda_max(R) * I, R = b^H b. Tangent at x_t and a
/// global upper bound by construction (lambda_max I - R is PSD).
Surrogate build_surrogate_spectral(const ReducedMap& map, const Eigen::VectorXcd& x_t);

/// Minimizes the surrogate over unit-modulus vectors. Both phase-sign
/// candidates exp(+/- j arg y) are scored against the true objective and the
/// better one returned; components with |y_i| <= 1e-14 keep x_t,i.
Eigen::VectorXcd minimize_surrogate(const ReducedMap& map, const Surrogate& s);

/// Full MM loop with the successive-iterate MSE stopping rule
/// ||x_{t+1} - x_t||^2 / N < mse_tol.
MMState mm_loop(const ReducedMap& map, const Eigen::VectorXcd& x0, double mse_tol,
                int max_iter, MMKind kind);

}  // namespace pim
