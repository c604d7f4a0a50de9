// SPDX-License-Identifier: Apache-2.0
#include <sstream>

#include "doctest.h"
#include "pim/experiments.hpp"

using namespace pim;

namespace {

// Drops the trailing wall_time_ms field from every CSV line.
std::string strip_wall_time(const std::string& csv) {
  std::istringstream in(csv);
  std::string out, line;
  while (std::getline(in, line)) {
    const auto comma = line.find_last_of(',');
    out += line.substr(0, comma);
    out += '\n';
  }
  return out;
}

ExperimentSpec tiny_spec() {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::Single;
  spec.grid = {{1, 1, 1, 10.0}};
  spec.realizations = 1;
  spec.methods = {Method::Algorithm1, Method::RandomPhase, Method::GlobalSearch,
                  Method::Grid};
  spec.grid_steps = 8;
  spec.master_seed = 99;
  return spec;
}

}  // namespace

TEST_CASE("single K=M=N=1: every method reports the same sum rate") {
  const auto rows = run_experiment(tiny_spec());
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK(r.status == "ok");
    CHECK(r.sum_rate == doctest::Approx(rows.front().sum_rate).epsilon(1e-6));
  }
}

TEST_CASE("spec validation") {
  auto spec = tiny_spec();
  spec.realizations = 0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec = tiny_spec();
  spec.methods.clear();
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec = tiny_spec();
  spec.grid = {{2, 4, 4, 0.0}};  // N=4 with grid method
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("row count is grid x methods x realizations, failures included") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::SweepSnr;
  spec.grid = {{2, 4, 4, 0.0}, {2, 4, 4, 10.0}};
  spec.realizations = 3;
  spec.methods = {Method::Algorithm1, Method::RandomPhase};
  spec.master_seed = 1;
  const auto rows = run_experiment(spec);
  CHECK(rows.size() == 2 * 2 * 3);
  // deterministic ordering: (scenario, method, realization)
  CHECK(rows[0].snr_db == 0.0);
  CHECK(rows[0].method == "algorithm1");
  CHECK(rows[0].realization == 0);
  CHECK(rows[5].method == "random_phase");
  CHECK(rows[5].realization == 2);
}

TEST_CASE("CSV output is byte-identical across runs, wall time excluded") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::SweepSnr;
  spec.grid = {{2, 4, 4, 5.0}, {2, 4, 4, 15.0}};
  spec.realizations = 4;
  spec.methods = {Method::Algorithm1, Method::RandomPhase};
  spec.master_seed = 2718;
  spec.threads = 4;  // force parallel execution

  const auto a = rows_to_csv(run_experiment(spec));
  const auto b = rows_to_csv(run_experiment(spec));
  CHECK(strip_wall_time(a) == strip_wall_time(b));

  // header and column order are pinned
  std::istringstream in(a);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "experiment,K,M,N,snr_db,r_min_mode,method,realization,status,"
        "sum_rate_bps_hz,power_cost,mm_iterations,outer_iterations,wall_time_ms");
}

TEST_CASE("convergence report") {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::Convergence;
  spec.realizations = 5;
  spec.master_seed = 10;

  SUBCASE("N=1 reaches zero MSE immediately") {
    spec.grid = {{1, 2, 1, 20.0}};
    const auto report = convergence_report(spec);
    for (const auto& tr : report.traces) {
      CHECK(tr.iterations_to_tol <= 2);
      CHECK(tr.mse.back() == 0.0);
    }
  }

  SUBCASE("identical specs give identical tables") {
    spec.grid = {{4, 4, 6, 20.0}};
    const auto a = convergence_report(spec);
    const auto b = convergence_report(spec);
    REQUIRE(a.traces.size() == b.traces.size());
    for (std::size_t i = 0; i < a.traces.size(); ++i) {
      CHECK(a.traces[i].mse == b.traces[i].mse);
    }
    CHECK(a.median_iterations == b.median_iterations);
  }

  SUBCASE("median iterations grow with N") {
    spec.grid = {{4, 4, 8, 20.0}, {4, 4, 16, 20.0}};
    spec.realizations = 10;
    const auto report = convergence_report(spec);
    REQUIRE(report.median_iterations.count(8) == 1);
    REQUIRE(report.median_iterations.count(16) == 1);
    CHECK(report.median_iterations.at(16) >= report.median_iterations.at(8));
  }
}

TEST_CASE("aggregate") {
  ResultRow row;
  row.experiment = "single";
  row.method = "algorithm1";
  row.status = "ok";

  SUBCASE("one row") {
    row.sum_rate = 3.5;
    const auto summary = aggregate({row}, {"method"});
    REQUIRE(summary.size() == 1);
    CHECK(summary[0].count == 1);
    CHECK(summary[0].mean == 3.5);
    CHECK(summary[0].stddev == 0.0);
  }
  SUBCASE("two equal rows have zero std") {
    row.sum_rate = 2.0;
    const auto summary = aggregate({row, row}, {"method"});
    CHECK(summary[0].stddev == 0.0);
    CHECK(summary[0].count == 2);
  }
  SUBCASE("population std on (1,2,3)") {
    ResultRow a = row, b = row, c = row;
    a.sum_rate = 1.0;
    b.sum_rate = 2.0;
    c.sum_rate = 3.0;
    const auto summary = aggregate({a, b, c}, {"method"});
    CHECK(summary[0].mean == doctest::Approx(2.0));
    CHECK(summary[0].stddev == doctest::Approx(std::sqrt(2.0 / 3.0)));
    CHECK(summary[0].min == 1.0);
    CHECK(summary[0].max == 3.0);
  }
  SUBCASE("infeasible rows are counted, not averaged") {
    ResultRow bad = row;
    bad.status = "infeasible";
    bad.sum_rate = 999.0;
    row.sum_rate = 1.0;
    const auto summary = aggregate({row, bad}, {"method"});
    CHECK(summary[0].count == 1);
    CHECK(summary[0].infeasible == 1);
    CHECK(summary[0].mean == 1.0);
  }
  SUBCASE("empty input is rejected") {
    CHECK_THROWS_AS(aggregate({}, {"method"}), std::invalid_argument);
  }
}

TEST_CASE("JSON mirror carries the same values") {
  const auto rows = run_experiment(tiny_spec());
  const std::string json = rows_to_json(rows);
  CHECK(json.find("\"method\":\"algorithm1\"") != std::string::npos);
  CHECK(json.find("\"status\":\"ok\"") != std::string::npos);
}
