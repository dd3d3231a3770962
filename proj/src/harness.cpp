#include "covertplan/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace covertplan {

namespace {

using json = nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::ofstream open_out(const std::filesystem::path& p) {
  if (!p.parent_path().empty())
    std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);  // binary: bit-identical reruns
  if (!out) throw std::runtime_error("cannot open output file " + p.string());
  return out;
}

json scenario_echo(const Scenario& s) {
  json j;
  j["alice_m"] = {s.alice.x, s.alice.y};
  j["bob_m"] = {s.bob.x, s.bob.y};
  j["willie_m"] = {s.willie.x, s.willie.y};
  j["uav_start_m"] = {s.uav_start.x, s.uav_start.y};
  j["uav_end_m"] = {s.uav_end.x, s.uav_end.y};
  j["altitude_m"] = s.altitude;
  j["v_max_mps"] = s.v_max;
  j["slot_s"] = s.slot_duration;
  j["n_slots"] = s.n_slots;
  j["T_s"] = s.flight_period();
  j["beta0_lin"] = s.beta0;
  j["alpha"] = s.alpha;
  j["noise_b_W"] = s.noise_bob;
  j["noise_w_W"] = s.noise_willie;
  j["rho_b"] = s.outage_cap;
  j["epsilon"] = s.covertness_eps;
  const bool constant_cap =
      std::all_of(s.jam_power_cap.begin(), s.jam_power_cap.end(),
                  [&](double c) { return c == s.jam_power_cap.front(); });
  if (constant_cap)
    j["p_hat_u_W"] = s.jam_power_cap.front();
  else
    j["p_hat_u_W"] = s.jam_power_cap;
  if (s.tx_power_cap)
    j["p_a_max_W"] = *s.tx_power_cap;
  else
    j["p_a_max_W"] = nullptr;
  return j;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

PlanResult run_plan(const Scenario& s, const std::string& method,
                    const GmOptions& gm_opt, const CiConfig& ci_cfg) {
  if (method == "gm") return plan(s, gm_opt);
  if (method == "ci") return bcd_solve(s, ci_cfg);
  throw std::invalid_argument("unknown method '" + method + "' (use gm or ci)");
}

RunPaths write_run_outputs(const Scenario& s, const PlanResult& result,
                           const std::filesystem::path& out_dir,
                           std::uint64_t seed) {
  const std::string& method = result.diagnostics.method;
  RunPaths paths;
  paths.plan_csv = out_dir / (method + "_plan.csv");
  paths.summary_json = out_dir / (method + "_summary.json");

  const DetectionReport report = detection_report(result.trajectory, result.power, s);
  {
    auto out = open_out(paths.plan_csv);
    out << "# covertplan plan-csv v1\n";
    out << "n,x,y,p_a_W,R_b_bps_hz,xi_star,covertness_gap\n";
    const Vec2& start = result.trajectory.waypoints[0];
    out << "0," << format_double(start.x) << ',' << format_double(start.y)
        << ",0,0,1,0\n";
    for (int n = 1; n <= s.n_slots; ++n) {
      const SlotDetection& d = report.slots[n - 1];
      if (d.covertness_gap > s.covertness_eps + 1e-9)
        throw std::runtime_error("refusing to write slot " + std::to_string(n) +
                                 ": covertness budget exceeded");
      const Vec2& q = result.trajectory.waypoints[n];
      out << n << ',' << format_double(q.x) << ',' << format_double(q.y) << ','
          << format_double(result.power.p_a[n - 1]) << ','
          << format_double(result.slot_rate[n - 1]) << ','
          << format_double(d.min_error) << ','
          << format_double(d.covertness_gap) << '\n';
    }
  }

  if (method == "ci") {
    paths.trace_csv = out_dir / "ci_iterations.csv";
    auto out = open_out(paths.trace_csv);
    out << "# covertplan trace-csv v1\n";
    out << "iter,objective,max_constraint_violation\n";
    for (const BcdTraceRow& row : result.diagnostics.trace)
      out << row.iter << ',' << format_double(row.objective) << ','
          << format_double(row.max_violation) << '\n';
  }

  {
    json j;
    j["schema"] = "covertplan-summary-v1";
    j["method"] = method;
    j["seed"] = seed;
    j["average_rate_bps_hz"] = result.average_rate;
    if (result.diagnostics.hover_slot >= 0)
      j["hover_slot"] = result.diagnostics.hover_slot;
    else
      j["hover_slot"] = nullptr;
    j["runtime_s"] = {{"trajectory", result.diagnostics.trajectory_seconds},
                      {"power", result.diagnostics.power_seconds},
                      {"total", result.diagnostics.total_seconds}};
    if (method == "ci") {
      j["bcd_iterations"] = result.diagnostics.bcd_iterations;
      j["converged"] = result.diagnostics.converged;
    }
    j["warnings"] = result.diagnostics.warnings;
    j["scenario"] = scenario_echo(s);
    auto out = open_out(paths.summary_json);
    out << j.dump(2) << '\n';
  }
  return paths;
}

void SweepSpec::validate() const {
  const bool positional = parameter == "q_w" || parameter == "q_b";
  const bool scalar = parameter == "T" || parameter == "epsilon" ||
                      parameter == "p_hat_u";
  if (!positional && !scalar)
    throw std::invalid_argument("sweep: unknown parameter '" + parameter +
                                "' (T, epsilon, p_hat_u, q_w, q_b)");
  if (scalar && values.empty())
    throw std::invalid_argument("sweep: value list must not be empty");
  if (positional && positions.empty())
    throw std::invalid_argument("sweep: position list must not be empty");
  if (methods.empty())
    throw std::invalid_argument("sweep: method list must not be empty");
  for (const auto& m : methods)
    if (m != "gm" && m != "ci")
      throw std::invalid_argument("sweep: unknown method '" + m + "'");
  if (workers < 0) throw std::invalid_argument("sweep: workers must be >= 0");
}

namespace {

Scenario apply_sweep_value(const Scenario& base, const std::string& param,
                           double value, const Vec2& pos) {
  Scenario s = base;
  if (param == "T") {
    const double ratio = value / s.slot_duration;
    const long n = std::lround(ratio);
    if (std::abs(ratio - static_cast<double>(n)) > 1e-9 || n < 1)
      throw std::invalid_argument("sweep: T value " + format_double(value) +
                                  " is not a multiple of slot_s");
    s.n_slots = static_cast<int>(n);
    const double cap = base.jam_power_cap.empty() ? 0.0 : base.jam_power_cap.front();
    s.jam_power_cap.assign(s.n_slots, cap);
  } else if (param == "epsilon") {
    s.covertness_eps = value;
  } else if (param == "p_hat_u") {
    s.jam_power_cap.assign(s.n_slots, value);
  } else if (param == "q_w") {
    s.willie = pos;
  } else if (param == "q_b") {
    s.bob = pos;
  }
  s.validate();
  return s;
}

}  // namespace

SweepResult run_sweep(const Scenario& base, const SweepSpec& spec,
                      const std::filesystem::path& out_dir,
                      const GmOptions& gm_opt, const CiConfig& ci_cfg) {
  spec.validate();
  base.validate();
  const bool positional = spec.parameter == "q_w" || spec.parameter == "q_b";
  const std::size_t n_values =
      positional ? spec.positions.size() : spec.values.size();

  struct Task {
    std::size_t value_index;
    std::string method;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < n_values; ++i)
    for (const auto& m : spec.methods) tasks.push_back({i, m});

  const auto run_one = [&](const Task& t) {
    SweepRow row;
    row.parameter = spec.parameter;
    row.method = t.method;
    const Vec2 pos = positional ? spec.positions[t.value_index] : Vec2{};
    const double value = positional ? 0.0 : spec.values[t.value_index];
    row.value = positional
                    ? format_double(pos.x) + ":" + format_double(pos.y)
                    : format_double(value);
    try {
      const Scenario s = apply_sweep_value(base, spec.parameter, value, pos);
      const auto t0 = std::chrono::steady_clock::now();
      const PlanResult result = run_plan(s, t.method, gm_opt, ci_cfg);
      row.runtime_s = seconds_since(t0);
      row.avg_rate = result.average_rate;
    } catch (const std::exception& err) {
      row.error = err.what();
    }
    return row;
  };

  const int workers = spec.workers > 0
                          ? spec.workers
                          : std::max(1u, std::thread::hardware_concurrency());
  std::vector<SweepRow> rows(tasks.size());
  for (std::size_t begin = 0; begin < tasks.size();
       begin += static_cast<std::size_t>(workers)) {
    const std::size_t end =
        std::min(tasks.size(), begin + static_cast<std::size_t>(workers));
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t i = begin; i < end; ++i)
      batch.push_back(std::async(std::launch::async, run_one, tasks[i]));
    for (std::size_t i = begin; i < end; ++i) rows[i] = batch[i - begin].get();
  }

  // pairwise delta where both methods ran a value
  for (std::size_t i = 0; i < n_values; ++i) {
    std::optional<double> gm_rate, ci_rate;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (tasks[r].value_index != i || !rows[r].avg_rate) continue;
      (rows[r].method == "gm" ? gm_rate : ci_rate) = rows[r].avg_rate;
    }
    if (gm_rate && ci_rate)
      for (std::size_t r = 0; r < rows.size(); ++r)
        if (tasks[r].value_index == i)
          rows[r].gm_minus_ci = *gm_rate - *ci_rate;
  }

  SweepResult result;
  result.rows = std::move(rows);
  result.csv_path = out_dir / "sweep.csv";
  auto out = open_out(result.csv_path);
  out << "# covertplan sweep-csv v1\n";
  out << "param,value,method,avg_rate,runtime_s,gm_minus_ci\n";
  for (const auto& row : result.rows) {
    out << row.parameter << ',' << row.value << ',' << row.method << ',';
    if (row.avg_rate) out << format_double(*row.avg_rate);
    out << ',' << format_double(row.runtime_s) << ',';
    if (row.gm_minus_ci) out << format_double(*row.gm_minus_ci);
    out << '\n';
  }
  return result;
}

Scenario with_slot_count(const Scenario& base, int n_slots) {
  Scenario s = base;
  s.n_slots = n_slots;
  s.slot_duration = base.flight_period() / n_slots;
  const double cap = base.jam_power_cap.empty() ? 0.0 : base.jam_power_cap.front();
  s.jam_power_cap.assign(n_slots, cap);
  s.validate();
  return s;
}

namespace {

std::optional<double> fit_loglog_slope(const std::vector<double>& n,
                                       const std::vector<double>& t) {
  if (n.size() < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    mx += std::log(n[i]);
    my += std::log(t[i]);
  }
  mx /= n.size();
  my /= n.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double dx = std::log(n[i]) - mx;
    sxy += dx * (std::log(t[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace

BenchResult bench_scaling(const Scenario& base, const std::vector<int>& n_list,
                          bool with_ci, int reps) {
  if (n_list.empty())
    throw std::invalid_argument("bench: slot count list must not be empty");
  if (!std::is_sorted(n_list.begin(), n_list.end()))
    throw std::invalid_argument("bench: slot count list must be ascending");
  if (reps < 1) throw std::invalid_argument("bench: reps must be >= 1");

  BenchResult bench;
  for (int n : n_list) {
    const Scenario s = with_slot_count(base, n);
    BenchRow row;
    row.n_slots = n;
    row.gm_traj_s = std::numeric_limits<double>::infinity();
    row.gm_total_s = std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < reps; ++rep) {
      const PlanResult r = plan(s);
      row.gm_traj_s = std::min(row.gm_traj_s, r.diagnostics.trajectory_seconds);
      row.gm_total_s = std::min(row.gm_total_s, r.diagnostics.total_seconds);
    }
    if (with_ci) {
      double best = std::numeric_limits<double>::infinity();
      for (int rep = 0; rep < reps; ++rep) {
        const PlanResult r = bcd_solve(s);
        best = std::min(best, r.diagnostics.total_seconds);
      }
      row.ci_total_s = best;
    }
    bench.rows.push_back(row);
  }

  std::vector<double> ns, traj, total, ci;
  for (const auto& row : bench.rows) {
    ns.push_back(row.n_slots);
    traj.push_back(row.gm_traj_s);
    total.push_back(row.gm_total_s);
    if (row.ci_total_s) ci.push_back(*row.ci_total_s);
  }
  bench.gm_traj_slope = fit_loglog_slope(ns, traj);
  bench.gm_total_slope = fit_loglog_slope(ns, total);
  if (ci.size() == ns.size()) bench.ci_total_slope = fit_loglog_slope(ns, ci);
  return bench;
}

std::filesystem::path write_bench_outputs(const BenchResult& bench,
                                          const std::filesystem::path& out_dir) {
  const auto csv_path = out_dir / "bench.csv";
  {
    auto out = open_out(csv_path);
    out << "# covertplan bench-csv v1\n";
    out << "n_slots,gm_traj_s,gm_total_s,ci_total_s\n";
    for (const auto& row : bench.rows) {
      out << row.n_slots << ',' << format_double(row.gm_traj_s) << ','
          << format_double(row.gm_total_s) << ',';
      if (row.ci_total_s) out << format_double(*row.ci_total_s);
      out << '\n';
    }
  }
  json j;
  j["schema"] = "covertplan-bench-v1";
  j["gm_traj_slope"] =
      bench.gm_traj_slope ? json(*bench.gm_traj_slope) : json(nullptr);
  j["gm_total_slope"] =
      bench.gm_total_slope ? json(*bench.gm_total_slope) : json(nullptr);
  j["ci_total_slope"] =
      bench.ci_total_slope ? json(*bench.ci_total_slope) : json(nullptr);
  auto out = open_out(out_dir / "bench_summary.json");
  out << j.dump(2) << '\n';
  return csv_path;
}

std::filesystem::path write_detector_csv(const RadiometerSim& sim,
                                         const std::filesystem::path& out_dir) {
  const auto path = out_dir / "detector.csv";
  auto out = open_out(path);
  out << "# covertplan detector-csv v1\n";
  out << "kind,threshold_W,false_alarm,miss_detection,total\n";
  for (std::size_t i = 0; i < sim.threshold.size(); ++i)
    out << "grid," << format_double(sim.threshold[i]) << ','
        << format_double(sim.false_alarm[i]) << ','
        << format_double(sim.miss_detection[i]) << ','
        << format_double(sim.false_alarm[i] + sim.miss_detection[i]) << '\n';
  out << "min," << format_double(sim.min_threshold) << ','
      << format_double(sim.false_alarm[sim.min_index]) << ','
      << format_double(sim.miss_detection[sim.min_index]) << ','
      << format_double(sim.min_total) << '\n';
  return path;
}

}  // namespace covertplan
