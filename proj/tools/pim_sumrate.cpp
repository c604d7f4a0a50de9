// SPDX-License-Identifier: Apache-2.0
//
// Batch experiment runner: SNR sweeps, PIM-unit sweeps, MM convergence
// studies and single solves, emitting CSV (or JSON) result rows.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pim/experiments.hpp"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

std::vector<double> as_list(const json& v) {
  if (v.is_array()) return v.get<std::vector<double>>();
  return {v.get<double>()};
}

// Grid entries allow scalar-or-array K/M/N/snr_db; arrays expand to the
// cartesian product.
void expand_grid(const json& entry, std::vector<pim::ScenarioPoint>& out) {
  const auto ks = as_list(entry.at("K"));
  const auto ms = as_list(entry.at("M"));
  const auto ns = as_list(entry.at("N"));
  const auto snrs = entry.contains("snr_db") ? as_list(entry.at("snr_db"))
                                             : std::vector<double>{0.0};
  for (double k : ks)
    for (double m : ms)
      for (double n : ns)
        for (double s : snrs) {
          out.push_back({static_cast<int>(k), static_cast<int>(m),
                         static_cast<int>(n), s});
        }
}

pim::ExperimentSpec parse_config(const std::string& path, const std::string& experiment) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json cfg = json::parse(in);

  pim::ExperimentSpec spec;
  const std::string kind_name =
      !experiment.empty() ? experiment : cfg.value("experiment", std::string("single"));
  const auto kind = pim::experiment_from_string(kind_name);
  if (!kind) throw std::invalid_argument("unknown experiment: " + kind_name);
  spec.kind = *kind;

  if (!cfg.contains("grid")) throw std::invalid_argument("config missing \"grid\"");
  for (const auto& entry : cfg.at("grid")) expand_grid(entry, spec.grid);

  spec.realizations = cfg.value("realizations", 1);
  spec.master_seed = cfg.value("master_seed", std::uint64_t{0});
  spec.output_path = cfg.value("output", std::string());
  spec.grid_steps = cfg.value("grid_steps", 360);
  spec.threads = cfg.value("threads", 0);

  if (cfg.contains("rate_floor")) {
    const auto& rf = cfg.at("rate_floor");
    const std::string mode = rf.value("mode", std::string("fixed"));
    if (mode == "snr_scaled") {
      spec.floor_mode = pim::RateFloorMode::snr_scaled();
    } else if (mode == "fixed") {
      spec.floor_mode = pim::RateFloorMode::fixed(rf.value("value", 0.0));
    } else {
      throw std::invalid_argument("unknown rate_floor mode: " + mode);
    }
  }

  if (cfg.contains("methods")) {
    spec.methods.clear();
    for (const auto& m : cfg.at("methods")) {
      const auto method = pim::method_from_string(m.get<std::string>());
      if (!method) throw std::invalid_argument("unknown method: " + m.get<std::string>());
      spec.methods.push_back(*method);
    }
  }

  if (cfg.contains("global_search")) {
    const auto& gs = cfg.at("global_search");
    spec.search.restarts = gs.value("restarts", spec.search.restarts);
    spec.search.max_evaluations = gs.value("max_evaluations", spec.search.max_evaluations);
  }

  const std::string surrogate = cfg.value("surrogate", std::string("spectral"));
  if (surrogate == "paper") spec.solver.surrogate = pim::MMKind::Paper;
  else if (surrogate == "spectral") spec.solver.surrogate = pim::MMKind::Spectral;
  else if (surrogate == "auto") spec.solver.surrogate = pim::MMKind::Auto;
  else throw std::invalid_argument("unknown surrogate: " + surrogate);

  const std::string weighting = cfg.value("weighting", std::string("weighted"));
  if (weighting == "weighted") spec.solver.weighting = pim::WeightingMode::Weighted;
  else if (weighting == "paper_literal")
    spec.solver.weighting = pim::WeightingMode::PaperLiteral;
  else throw std::invalid_argument("unknown weighting: " + weighting);

  const std::string waterfill = cfg.value("waterfill", std::string("exact"));
  if (waterfill == "exact") spec.solver.waterfill = pim::WaterfillSolver::Exact;
  else if (waterfill == "paper") spec.solver.waterfill = pim::WaterfillSolver::Paper;
  else throw std::invalid_argument("unknown waterfill solver: " + waterfill);

  return spec;
}

int write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file: " << path << "\n";
    return kExitIo;
  }
  out << content;
  if (!out) {
    std::cerr << "error: write failed: " << path << "\n";
    return kExitIo;
  }
  return 0;
}

std::string replace_extension(const std::string& path, const std::string& suffix) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return path + suffix;
  return path.substr(0, dot) + suffix;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PIM-assisted MISO downlink sum-rate experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::string surrogate, weighting, waterfill;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int realizations = 0;

  for (const std::string name : {"sweep_snr", "sweep_n", "convergence", "single"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--seed", seed, "master seed override")
        ->each([&](const std::string&) { seed_set = true; });
    sub->add_option("--realizations", realizations, "realization count override");
    sub->add_option("--out", out_path, "output path override");
    sub->add_option("--format", format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--surrogate", surrogate, "paper|spectral|auto")
        ->check(CLI::IsMember({"paper", "spectral", "auto"}));
    sub->add_option("--weighting", weighting, "weighted|paper_literal")
        ->check(CLI::IsMember({"weighted", "paper_literal"}));
    sub->add_option("--waterfill", waterfill, "exact|paper")
        ->check(CLI::IsMember({"exact", "paper"}));
  }

  CLI11_PARSE(app, argc, argv);
  const std::string experiment = app.get_subcommands().front()->get_name();

  pim::ExperimentSpec spec;
  try {
    spec = parse_config(config_path, experiment);
    if (seed_set) spec.master_seed = seed;
    if (realizations > 0) spec.realizations = realizations;
    if (!out_path.empty()) spec.output_path = out_path;
    if (surrogate == "paper") spec.solver.surrogate = pim::MMKind::Paper;
    else if (surrogate == "spectral") spec.solver.surrogate = pim::MMKind::Spectral;
    else if (surrogate == "auto") spec.solver.surrogate = pim::MMKind::Auto;
    if (weighting == "weighted") spec.solver.weighting = pim::WeightingMode::Weighted;
    else if (weighting == "paper_literal")
      spec.solver.weighting = pim::WeightingMode::PaperLiteral;
    if (waterfill == "exact") spec.solver.waterfill = pim::WaterfillSolver::Exact;
    else if (waterfill == "paper") spec.solver.waterfill = pim::WaterfillSolver::Paper;
    spec.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::vector<pim::ResultRow> rows;
  std::string extra_output;  // convergence traces
  try {
    if (spec.kind == pim::ExperimentKind::Convergence) {
      const pim::ConvergenceReport report = pim::convergence_report(spec);
      rows = report.rows;
      extra_output = pim::traces_to_csv(report.traces);
      for (const auto& [n, med] : report.median_iterations) {
        std::cout << "N=" << n << " median iterations to MSE tolerance: " << med << "\n";
      }
    } else {
      rows = pim::run_experiment(spec);
      const auto summary =
          pim::aggregate(rows, {"experiment", "K", "M", "N", "snr_db", "method"});
      for (const auto& s : summary) {
        std::cout << s.group << ": n=" << s.count << " mean=" << s.mean
                  << " std=" << s.stddev;
        if (s.infeasible > 0) std::cout << " (skipped/infeasible: " << s.infeasible << ")";
        std::cout << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "run error: " << e.what() << "\n";
    return kExitConfig;
  }

  const std::string body =
      format == "json" ? pim::rows_to_json(rows) : pim::rows_to_csv(rows);
  if (spec.output_path.empty()) {
    std::cout << body;
  } else {
    if (int rc = write_file(spec.output_path, body); rc != 0) return rc;
    if (!extra_output.empty()) {
      const std::string trace_path = replace_extension(spec.output_path, "_trace.csv");
      if (int rc = write_file(trace_path, extra_output); rc != 0) return rc;
    }
  }
  return 0;
}
