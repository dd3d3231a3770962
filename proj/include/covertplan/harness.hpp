#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "covertplan/ci_planner.hpp"
#include "covertplan/detection.hpp"
#include "covertplan/gm_planner.hpp"
#include "covertplan/model.hpp"

namespace covertplan {

/// One-parameter experiment sweep over a base scenario.
struct SweepSpec {
  std::string parameter;             // T | epsilon | p_hat_u | q_w | q_b
  std::vector<double> values;        // scalar parameters
  std::vector<Vec2> positions;       // q_w / q_b sweeps
  std::vector<std::string> methods;  // subset of {gm, ci}
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct RunPaths {
  std::filesystem::path plan_csv;
  std::filesystem::path summary_json;
  std::filesystem::path trace_csv;  // iterative benchmark only
};

/// Run one planner on a scenario and write the plan CSV, summary JSON and
/// (for the iterative method) the iteration-trace CSV. Every emitted slot row
/// is re-validated against the covertness budget before writing.
RunPaths write_run_outputs(const Scenario& s, const PlanResult& result,
                           const std::filesystem::path& out_dir,
                           std::uint64_t seed);

PlanResult run_plan(const Scenario& s, const std::string& method,
                    const GmOptions& gm_opt = {}, const CiConfig& ci_cfg = {});

struct SweepRow {
  std::string parameter;
  std::string value;  // formatted; positions as "x:y"
  std::string method;
  std::optional<double> avg_rate;    // empty on a failed run
  double runtime_s = 0.0;
  std::optional<double> gm_minus_ci; // filled when both methods ran the value
  std::string error;                 // failure reason, empty on success
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::filesystem::path csv_path;
};

/// Run the sweep (concurrently up to the worker limit), aggregate the
/// long-format comparison table and write it under out_dir. Per-run failures
/// are recorded in their row; the sweep continues.
SweepResult run_sweep(const Scenario& base, const SweepSpec& spec,
                      const std::filesystem::path& out_dir,
                      const GmOptions& gm_opt = {}, const CiConfig& ci_cfg = {});

struct BenchRow {
  int n_slots = 0;
  double gm_traj_s = 0.0;
  double gm_total_s = 0.0;
  std::optional<double> ci_total_s;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::optional<double> gm_traj_slope;  // fitted log-log slopes; empty for a single N
  std::optional<double> gm_total_slope;
  std::optional<double> ci_total_slope;
};

/// Runtime scaling over slot counts at a fixed flight period (slot duration
/// shrinks as n grows). Each timing is the minimum over `reps` repetitions.
BenchResult bench_scaling(const Scenario& base, const std::vector<int>& n_list,
                          bool with_ci, int reps = 3);

/// Write the radiometer grid plus its empirical-minimum summary row.
std::filesystem::path write_detector_csv(const RadiometerSim& sim,
                                         const std::filesystem::path& out_dir);

std::filesystem::path write_bench_outputs(const BenchResult& bench,
                                          const std::filesystem::path& out_dir);

/// Scale slot count at a fixed flight period; jam caps are resized with the
/// constant per-slot value.
Scenario with_slot_count(const Scenario& base, int n_slots);

/// Deterministic float formatting used by every CSV writer (17 significant
/// digits round-trip).
std::string format_double(double v);

}  // namespace covertplan
