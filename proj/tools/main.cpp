#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "covertplan/ci_planner.hpp"
#include "covertplan/detection.hpp"
#include "covertplan/geometry.hpp"
#include "covertplan/gm_planner.hpp"
#include "covertplan/harness.hpp"
#include "covertplan/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace covertplan;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const auto end = text.find(sep, begin);
    parts.push_back(text.substr(begin, end - begin));
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  return parts;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(std::stod(part));
  return out;
}

std::vector<Vec2> parse_positions(const std::string& text) {
  std::vector<Vec2> out;
  for (const auto& part : split(text, ',')) {
    const auto pieces = split(part, ':');
    if (pieces.size() != 2)
      throw std::invalid_argument("position values use x:y, got '" + part + "'");
    out.push_back({std::stod(pieces[0]), std::stod(pieces[1])});
  }
  return out;
}

std::vector<std::string> method_list(const std::string& method) {
  if (method == "both") return {"gm", "ci"};
  if (method == "gm" || method == "ci") return {method};
  throw std::invalid_argument("unknown method '" + method + "' (gm|ci|both)");
}

void report_plan(const PlanResult& result, const RunPaths& paths) {
  std::cout << result.diagnostics.method
            << ": average covert rate = " << result.average_rate
            << " bit/s/Hz, total " << result.diagnostics.total_seconds
            << " s\n  wrote " << paths.plan_csv.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "covertplan: joint jamming-UAV trajectory and transmit-power planning\n"
      "for a covert link, with radiometer detection analysis"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;

  auto* plan_cmd =
      app.add_subcommand("plan", "Plan a trajectory and power schedule");
  std::string plan_method = "gm";
  std::string return_rule = "intersect";
  CiConfig ci_cfg;
  plan_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
  plan_cmd->add_option("--method", plan_method, "gm | ci | both");
  plan_cmd->add_option("--out", out_dir, "Output directory (default .)");
  plan_cmd->add_option("--seed", seed, "Seed recorded in the summary");
  plan_cmd->add_option("--return-rule", return_rule,
                       "Geometric return handling: intersect | direct");
  plan_cmd->add_option("--bcd-tol", ci_cfg.bcd_tolerance,
                       "Iterative method: stop on objective change below this");
  plan_cmd->add_option("--max-iters", ci_cfg.max_bcd_iters,
                       "Iterative method: outer iteration cap");
  plan_cmd->add_option("--cccp-tol", ci_cfg.cccp_tolerance,
                       "Iterative method: inner linearization tolerance");

  auto* sweep_cmd =
      app.add_subcommand("sweep", "Run a one-parameter comparison sweep");
  std::string sweep_param, sweep_values, sweep_method = "both";
  int workers = 0;
  sweep_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
  sweep_cmd
      ->add_option("--param", sweep_param, "T | epsilon | p_hat_u | q_w | q_b")
      ->required();
  sweep_cmd
      ->add_option("--values", sweep_values,
                   "Comma-separated values; positions as x:y")
      ->required();
  sweep_cmd->add_option("--method", sweep_method, "gm | ci | both");
  sweep_cmd->add_option("--out", out_dir, "Output directory (default .)");
  sweep_cmd->add_option("--seed", seed, "Seed recorded in the outputs");
  sweep_cmd->add_option("--workers", workers, "Concurrent runs (0 = all cores)");

  auto* det_cmd = app.add_subcommand(
      "simulate-detector",
      "Monte Carlo radiometer run against the closed forms");
  int slot = 1, grid = 2000;
  long channel_uses = 0, samples = 1000000;
  double p_a = 0.0;
  double uav_x = 0.0, uav_y = 0.0;
  det_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
  det_cmd->add_option("--slot", slot, "Slot index in [1, n_slots]");
  det_cmd->add_option("--p-a", p_a, "Transmit power under test [W]")->required();
  det_cmd->add_option("--m", channel_uses,
                      "Averaging window (channel uses); 0 = infinite");
  det_cmd->add_option("--samples", samples, "Monte Carlo samples per hypothesis");
  det_cmd->add_option("--seed", seed, "Generator seed");
  det_cmd->add_option("--grid", grid, "Threshold grid size");
  auto* opt_x = det_cmd->add_option("--uav-x", uav_x,
                                    "UAV x [m] (default: the hover point)");
  auto* opt_y = det_cmd->add_option("--uav-y", uav_y, "UAV y [m]");
  det_cmd->add_option("--out", out_dir, "Output directory (default .)");

  auto* bench_cmd =
      app.add_subcommand("bench", "Runtime scaling over slot counts");
  std::string n_list_text;
  int reps = 3;
  bool with_ci = false;
  bench_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
  bench_cmd
      ->add_option("--n-list", n_list_text,
                   "Ascending slot counts, comma-separated")
      ->required();
  bench_cmd->add_flag("--with-ci", with_ci, "Also time the iterative method");
  bench_cmd->add_option("--reps", reps, "Repetitions per timing (minimum kept)");
  bench_cmd->add_option("--out", out_dir, "Output directory (default .)");

  CLI11_PARSE(app, argc, argv);

  try {
    const Scenario scenario = load_scenario(scenario_path);
    const fs::path out{out_dir};

    if (*plan_cmd) {
      GmOptions gm_opt;
      if (return_rule == "direct")
        gm_opt.return_rule = ReturnRule::direct;
      else if (return_rule != "intersect")
        throw std::invalid_argument("unknown return rule '" + return_rule + "'");
      for (const auto& method : method_list(plan_method)) {
        const PlanResult result = run_plan(scenario, method, gm_opt, ci_cfg);
        const RunPaths paths = write_run_outputs(scenario, result, out, seed);
        report_plan(result, paths);
      }
    } else if (*sweep_cmd) {
      SweepSpec spec;
      spec.parameter = sweep_param;
      spec.methods = method_list(sweep_method);
      spec.seed = seed;
      spec.workers = workers;
      if (spec.parameter == "q_w" || spec.parameter == "q_b")
        spec.positions = parse_positions(sweep_values);
      else
        spec.values = parse_values(sweep_values);
      const SweepResult result = run_sweep(scenario, spec, out, {}, ci_cfg);
      int failures = 0;
      for (const auto& row : result.rows)
        if (!row.error.empty()) {
          ++failures;
          std::cerr << "sweep run failed (" << row.parameter << " = "
                    << row.value << ", " << row.method << "): " << row.error
                    << '\n';
        }
      std::cout << "sweep: " << result.rows.size() - failures << '/'
                << result.rows.size() << " runs ok, wrote "
                << result.csv_path.string() << '\n';
    } else if (*det_cmd) {
      Vec2 uav{uav_x, uav_y};
      if (!*opt_x && !*opt_y)
        uav = hover_point(scenario.bob, scenario.willie, scenario.altitude);
      const RadiometerSim sim = simulate_radiometer(
          scenario, uav, slot, p_a, channel_uses, samples, seed, grid);
      const auto csv = write_detector_csv(sim, out);
      const SlotCoefficients c = scenario.slot_coeffs(uav, slot);
      nlohmann::json j;
      j["schema"] = "covertplan-detector-v1";
      j["seed"] = seed;
      j["m"] = channel_uses;
      j["samples"] = samples;
      j["slot"] = slot;
      j["p_a_W"] = p_a;
      j["uav_m"] = {uav.x, uav.y};
      j["empirical_min_error"] = sim.min_total;
      j["empirical_threshold_W"] = sim.min_threshold;
      if (p_a > 0.0 && c.gamma > 0.0) {
        j["closed_form_min_error"] = min_error_rate(p_a, c);
        j["closed_form_threshold_W"] = c.gamma + scenario.noise_willie;
        j["abs_error"] = std::abs(sim.min_total - min_error_rate(p_a, c));
      }
      std::ofstream summary(out / "detector_summary.json");
      summary << j.dump(2) << '\n';
      std::cout << "detector: empirical min error " << sim.min_total
                << ", wrote " << csv.string() << '\n';
    } else if (*bench_cmd) {
      std::vector<int> n_list;
      for (double v : parse_values(n_list_text))
        n_list.push_back(static_cast<int>(v));
      const BenchResult bench = bench_scaling(scenario, n_list, with_ci, reps);
      const auto csv = write_bench_outputs(bench, out);
      std::cout << "bench: wrote " << csv.string();
      if (bench.gm_traj_slope)
        std::cout << " (trajectory-stage log-log slope " << *bench.gm_traj_slope
                  << ")";
      std::cout << '\n';
    }
  } catch (const ScenarioFileError& err) {
    std::cerr << err.what() << '\n';
    std::cout << nlohmann::json{{"error", "scenario"}, {"reason", err.what()}}
              << '\n';
    return 2;
  } catch (const std::invalid_argument& err) {
    std::cerr << "invalid input: " << err.what() << '\n';
    std::cout << nlohmann::json{{"error", "validation"}, {"reason", err.what()}}
              << '\n';
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 4;
  }
  return 0;
}
