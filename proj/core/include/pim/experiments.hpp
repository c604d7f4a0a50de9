// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pim/alternating.hpp"
#include "pim/baselines.hpp"

namespace pim {

enum class ExperimentKind { SweepSnr, SweepN, Convergence, Single };
enum class Method { Algorithm1, RandomPhase, GlobalSearch, Grid };

std::string to_string(ExperimentKind k);
std::string to_string(Method m);
std::optional<ExperimentKind> experiment_from_string(const std::string& s);
std::optional<Method> method_from_string(const std::string& s);

/// One (K, M, N, SNR) cell of the scenario grid.
struct ScenarioPoint {
  int num_users = 1;
  int num_bs_antennas = 1;
  int num_pim_units = 1;
  double snr_db = 0.0;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::Single;
  std::vector<ScenarioPoint> grid;
  int realizations = 1;
  RateFloorMode floor_mode = RateFloorMode::fixed(0.0);
  std::vector<Method> methods = {Method::Algorithm1};
  SolveOptions solver;
  GlobalSearchOptions search;
  int grid_steps = 360;
  std::uint64_t master_seed = 0;
  std::string output_path;
  int threads = 0;  // 0 = hardware concurrency

  /// Throws std::invalid_argument on an invalid spec.
  void validate() const;
};

struct ResultRow {
  std::string experiment;
  int num_users = 0;
  int num_bs_antennas = 0;
  int num_pim_units = 0;
  double snr_db = 0.0;
  std::string r_min_mode;
  std::string method;
  std::uint64_t realization = 0;
  std::string status;  // ok | infeasible | rank_deficient | max_iterations | error
  double sum_rate = 0.0;
  double power_cost = 0.0;
  int mm_iterations = 0;
  int outer_iterations = 0;
  double wall_time_ms = 0.0;
};

/// Per-realization MM convergence trace for the convergence experiment.
struct ConvergenceTrace {
  ScenarioPoint point;
  std::uint64_t realization = 0;
  std::vector<double> mse;
  int iterations_to_tol = 0;  // first iteration with MSE < tol, or cap
  bool converged = false;
};

struct ConvergenceReport {
  std::vector<ResultRow> rows;
  std::vector<ConvergenceTrace> traces;
  /// Median iterations-to-tolerance keyed by num_pim_units.
  std::map<int, double> median_iterations;
};

struct SummaryRow {
  std::string group;
  int count = 0;
  int infeasible = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population convention
  double min = 0.0;
  double max = 0.0;
};

/// Runs every grid point x method x realization and returns one row each,
/// sorted by (scenario, method, realization). Realizations fan out to a
/// thread pool; rows land in preassigned slots so the output order does not
/// depend on scheduling.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

/// MM-only convergence study (the phase step in isolation, unweighted map).
ConvergenceReport convergence_report(const ExperimentSpec& spec);

/// Groups rows by the named columns (subset of: experiment, K, M, N, snr_db,
/// r_min_mode, method) and summarizes sum_rate per group, deterministically
/// ordered by group key. Groups with no usable rows are reported with
/// count = 0.
std::vector<SummaryRow> aggregate(const std::vector<ResultRow>& rows,
                                  const std::vector<std::string>& group_keys);

/// One header row, RFC 4180 quoting, fixed column order.
std::string rows_to_csv(const std::vector<ResultRow>& rows);
/// Same rows as a JSON array (used for the --format json mirror).
std::string rows_to_json(const std::vector<ResultRow>& rows);
std::string traces_to_csv(const std::vector<ConvergenceTrace>& traces);

}  // namespace pim
