// SPDX-License-Identifier: Apache-2.0
#include "pim/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace pim {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string floor_mode_name(const RateFloorMode& mode) {
  if (mode.kind == RateFloorMode::Kind::SnrScaled) return "snr_scaled";
  return "fixed(" + fmt(mode.fixed_rate) + ")";
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const unsigned t = threads > 0 ? static_cast<unsigned>(threads) : hw;
  const unsigned workers = std::min<unsigned>(t, n > 0 ? static_cast<unsigned>(n) : 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

double baseline_power_cost(const ChannelSet& ch, const ScenarioConfig& cfg,
                           const PhaseVector& phases) {
  const MatrixXcd w = cascade(ch, phases);
  const Precoder prec = zf_precoder(w, cfg.tol.zf_tol);
  if (prec.rank_deficient) return 0.0;
  const PowerAllocation alloc = allocate_powers(w, prec, cfg, WaterfillSolver::Exact);
  if (!alloc.feasible) return 0.0;
  return power_cost(prec, alloc.p);
}

ResultRow run_one(const ExperimentSpec& spec, const ScenarioPoint& pt, Method method,
                  std::uint64_t realization) {
  ResultRow row;
  row.experiment = to_string(spec.kind);
  row.num_users = pt.num_users;
  row.num_bs_antennas = pt.num_bs_antennas;
  row.num_pim_units = pt.num_pim_units;
  row.snr_db = pt.snr_db;
  row.r_min_mode = floor_mode_name(spec.floor_mode);
  row.method = to_string(method);
  row.realization = realization;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const ScenarioConfig cfg = snr_config(pt.num_users, pt.num_bs_antennas,
                                          pt.num_pim_units, pt.snr_db, spec.floor_mode);
    const RngSeed seed{spec.master_seed, realization};
    const ChannelSet ch = generate_channels(cfg, seed);

    switch (method) {
      case Method::Algorithm1: {
        const Solution sol = solve(ch, cfg, seed, spec.solver);
        switch (sol.status) {
          case SolveStatus::Converged: row.status = "ok"; break;
          case SolveStatus::MaxIterations: row.status = "max_iterations"; break;
          case SolveStatus::Infeasible: row.status = "infeasible"; break;
          case SolveStatus::RankDeficient: row.status = "rank_deficient"; break;
        }
        if (sol.status == SolveStatus::Converged || sol.status == SolveStatus::MaxIterations) {
          row.sum_rate = sol.sum_rate;
          row.power_cost = sol.outer_trace.empty() ? 0.0 : sol.outer_trace.back().power_cost;
        }
        row.mm_iterations = sol.total_mm_iterations;
        row.outer_iterations = sol.outer_iterations;
        break;
      }
      case Method::RandomPhase: {
        const BaselineResult res = random_phase_baseline(ch, cfg, seed);
        row.status = res.rank_deficient ? "rank_deficient"
                                        : (res.feasible ? "ok" : "infeasible");
        if (res.feasible) {
          row.sum_rate = res.sum_rate;
          row.power_cost = baseline_power_cost(ch, cfg, res.phases);
        }
        break;
      }
      case Method::GlobalSearch: {
        const BaselineResult res = global_search(ch, cfg, seed, spec.search);
        row.status = res.feasible ? "ok" : "infeasible";
        if (res.feasible) {
          row.sum_rate = res.sum_rate;
          row.power_cost = baseline_power_cost(ch, cfg, res.phases);
        }
        break;
      }
      case Method::Grid: {
        const BaselineResult res = grid_oracle(ch, cfg, spec.grid_steps);
        row.status = res.feasible ? "ok" : "infeasible";
        if (res.feasible) {
          row.sum_rate = res.sum_rate;
          row.power_cost = baseline_power_cost(ch, cfg, res.phases);
        }
        break;
      }
    }
  } catch (const std::exception&) {
    row.status = "error";
  }
  row.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
  return row;
}

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::SweepSnr: return "sweep_snr";
    case ExperimentKind::SweepN: return "sweep_n";
    case ExperimentKind::Convergence: return "convergence";
    case ExperimentKind::Single: return "single";
  }
  return "?";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Algorithm1: return "algorithm1";
    case Method::RandomPhase: return "random_phase";
    case Method::GlobalSearch: return "global_search";
    case Method::Grid: return "grid";
  }
  return "?";
}

std::optional<ExperimentKind> experiment_from_string(const std::string& s) {
  if (s == "sweep_snr") return ExperimentKind::SweepSnr;
  if (s == "sweep_n") return ExperimentKind::SweepN;
  if (s == "convergence") return ExperimentKind::Convergence;
  if (s == "single") return ExperimentKind::Single;
  return std::nullopt;
}

std::optional<Method> method_from_string(const std::string& s) {
  if (s == "algorithm1") return Method::Algorithm1;
  if (s == "random_phase") return Method::RandomPhase;
  if (s == "global_search") return Method::GlobalSearch;
  if (s == "grid") return Method::Grid;
  return std::nullopt;
}

void ExperimentSpec::validate() const {
  if (realizations < 1) throw std::invalid_argument("realizations must be >= 1");
  if (methods.empty()) throw std::invalid_argument("at least one method required");
  if (grid.empty()) throw std::invalid_argument("scenario grid must be non-empty");
  for (const auto& pt : grid) {
    if (pt.num_users < 1 || pt.num_bs_antennas < 1 || pt.num_pim_units < 1) {
      throw std::invalid_argument("grid dimensions must be positive");
    }
    if (pt.num_users > pt.num_pim_units) {
      throw std::invalid_argument("grid requires K <= N");
    }
    for (Method m : methods) {
      if (m == Method::Grid && pt.num_pim_units > 3) {
        throw std::invalid_argument("grid method requires N <= 3");
      }
    }
  }
  if (grid_steps < 1 || grid_steps > 3600) {
    throw std::invalid_argument("grid_steps must be in [1, 3600]");
  }
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  struct Task {
    ScenarioPoint pt;
    Method method;
    std::uint64_t realization;
  };
  std::vector<Task> tasks;
  for (const auto& pt : spec.grid) {
    for (Method m : spec.methods) {
      for (int r = 0; r < spec.realizations; ++r) {
        tasks.push_back({pt, m, static_cast<std::uint64_t>(r)});
      }
    }
  }
  std::vector<ResultRow> rows(tasks.size());
  parallel_for(tasks.size(), spec.threads, [&](std::size_t i) {
    rows[i] = run_one(spec, tasks[i].pt, tasks[i].method, tasks[i].realization);
  });
  return rows;
}

ConvergenceReport convergence_report(const ExperimentSpec& spec) {
  spec.validate();
  ConvergenceReport report;
  struct Task {
    ScenarioPoint pt;
    std::uint64_t realization;
  };
  std::vector<Task> tasks;
  for (const auto& pt : spec.grid) {
    for (int r = 0; r < spec.realizations; ++r) {
      tasks.push_back({pt, static_cast<std::uint64_t>(r)});
    }
  }
  report.traces.resize(tasks.size());
  report.rows.resize(tasks.size());

  parallel_for(tasks.size(), spec.threads, [&](std::size_t i) {
    const auto& task = tasks[i];
    const ScenarioConfig cfg =
        snr_config(task.pt.num_users, task.pt.num_bs_antennas, task.pt.num_pim_units,
                   task.pt.snr_db, spec.floor_mode);
    const RngSeed seed{spec.master_seed, task.realization};
    const ChannelSet ch = generate_channels(cfg, seed);
    Rng rng = Rng::stream(seed, 1);
    const PhaseVector x0 = PhaseVector::random(cfg.num_pim_units, rng);

    const ReducedMap map = build_reduced_map(ch, VectorXd(), cfg.tol.zf_tol);
    const MMState st = mm_loop(map, x0.conjugate_coefficients(), cfg.tol.mm_mse_tol,
                               cfg.caps.mm_max_iter, spec.solver.surrogate);

    ConvergenceTrace& tr = report.traces[i];
    tr.point = task.pt;
    tr.realization = task.realization;
    tr.mse = st.mse_trace;
    tr.converged = st.converged;
    tr.iterations_to_tol = st.iterations;
    for (std::size_t t = 0; t < st.mse_trace.size(); ++t) {
      if (st.mse_trace[t] < cfg.tol.mm_mse_tol) {
        tr.iterations_to_tol = static_cast<int>(t + 1);
        break;
      }
    }

    ResultRow row;
    row.experiment = to_string(spec.kind);
    row.num_users = task.pt.num_users;
    row.num_bs_antennas = task.pt.num_bs_antennas;
    row.num_pim_units = task.pt.num_pim_units;
    row.snr_db = task.pt.snr_db;
    row.r_min_mode = floor_mode_name(spec.floor_mode);
    row.method = "algorithm1";
    row.realization = task.realization;
    row.status = st.converged ? "ok" : "max_iterations";
    row.sum_rate = 0.0;
    row.power_cost = st.objective_trace.empty() ? 0.0 : st.objective_trace.back();
    row.mm_iterations = tr.iterations_to_tol;
    row.outer_iterations = 1;
    report.rows[i] = row;
  });

  // Median iterations-to-tolerance per PIM-unit count.
  std::map<int, std::vector<double>> by_n;
  for (const auto& tr : report.traces) {
    by_n[tr.point.num_pim_units].push_back(static_cast<double>(tr.iterations_to_tol));
  }
  for (auto& [n, v] : by_n) {
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    report.median_iterations[n] =
        (v.size() % 2 == 1) ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
  }
  return report;
}

std::vector<SummaryRow> aggregate(const std::vector<ResultRow>& rows,
                                  const std::vector<std::string>& group_keys) {
  if (rows.empty()) throw std::invalid_argument("aggregate: no rows");
  const auto key_of = [&](const ResultRow& r) {
    std::string key;
    for (const auto& k : group_keys) {
      if (!key.empty()) key += ",";
      if (k == "experiment") key += r.experiment;
      else if (k == "K") key += std::to_string(r.num_users);
      else if (k == "M") key += std::to_string(r.num_bs_antennas);
      else if (k == "N") key += std::to_string(r.num_pim_units);
      else if (k == "snr_db") key += fmt(r.snr_db);
      else if (k == "r_min_mode") key += r.r_min_mode;
      else if (k == "method") key += r.method;
      else throw std::invalid_argument("aggregate: unknown group key " + k);
    }
    return key;
  };

  std::map<std::string, std::vector<const ResultRow*>> groups;
  for (const auto& r : rows) groups[key_of(r)].push_back(&r);

  std::vector<SummaryRow> out;
  for (const auto& [key, members] : groups) {
    SummaryRow s;
    s.group = key;
    std::vector<double> vals;
    for (const auto* r : members) {
      if (r->status == "ok" || r->status == "max_iterations") {
        vals.push_back(r->sum_rate);
      } else {
        ++s.infeasible;
      }
    }
    s.count = static_cast<int>(vals.size());
    if (!vals.empty()) {
      double sum = 0.0;
      for (double v : vals) sum += v;
      s.mean = sum / vals.size();
      double sq = 0.0;
      for (double v : vals) sq += (v - s.mean) * (v - s.mean);
      s.stddev = std::sqrt(sq / vals.size());  // population convention
      s.min = *std::min_element(vals.begin(), vals.end());
      s.max = *std::max_element(vals.begin(), vals.end());
    }
    out.push_back(s);
  }
  return out;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << "experiment,K,M,N,snr_db,r_min_mode,method,realization,status,"
        "sum_rate_bps_hz,power_cost,mm_iterations,outer_iterations,wall_time_ms\n";
  for (const auto& r : rows) {
    os << csv_escape(r.experiment) << ',' << r.num_users << ',' << r.num_bs_antennas
       << ',' << r.num_pim_units << ',' << fmt(r.snr_db) << ','
       << csv_escape(r.r_min_mode) << ',' << csv_escape(r.method) << ','
       << r.realization << ',' << csv_escape(r.status) << ',' << fmt(r.sum_rate) << ','
       << fmt(r.power_cost) << ',' << r.mm_iterations << ',' << r.outer_iterations
       << ',' << fmt(r.wall_time_ms) << '\n';
  }
  return os.str();
}

std::string rows_to_json(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << "[\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << "  {\"experiment\":\"" << r.experiment << "\",\"K\":" << r.num_users
       << ",\"M\":" << r.num_bs_antennas << ",\"N\":" << r.num_pim_units
       << ",\"snr_db\":" << fmt(r.snr_db) << ",\"r_min_mode\":\"" << r.r_min_mode
       << "\",\"method\":\"" << r.method << "\",\"realization\":" << r.realization
       << ",\"status\":\"" << r.status << "\",\"sum_rate_bps_hz\":" << fmt(r.sum_rate)
       << ",\"power_cost\":" << fmt(r.power_cost)
       << ",\"mm_iterations\":" << r.mm_iterations
       << ",\"outer_iterations\":" << r.outer_iterations
       << ",\"wall_time_ms\":" << fmt(r.wall_time_ms) << "}"
       << (i + 1 < rows.size() ? ",\n" : "\n");
  }
  os << "]\n";
  return os.str();
}

std::string traces_to_csv(const std::vector<ConvergenceTrace>& traces) {
  std::ostringstream os;
  os << "K,M,N,snr_db,realization,iteration,mse\n";
  for (const auto& tr : traces) {
    for (std::size_t t = 0; t < tr.mse.size(); ++t) {
      os << tr.point.num_users << ',' << tr.point.num_bs_antennas << ','
         << tr.point.num_pim_units << ',' << fmt(tr.point.snr_db) << ','
         << tr.realization << ',' << (t + 1) << ',' << fmt(tr.mse[t]) << '\n';
    }
  }
  return os.str();
}

}  // namespace pim
