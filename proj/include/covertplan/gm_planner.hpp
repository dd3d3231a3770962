#pragma once

#include <string>
#include <vector>

#include "covertplan/model.hpp"

namespace covertplan {

/// How the geometric planner guarantees the return to uav_end.
/// intersect (default): each slot maximizes the ratio over the reachability
/// disk intersected with the return-feasibility disk. direct: accept the
/// unconstrained slot optimum while the candidate can still return, then fly
/// straight to uav_end at full speed.
enum class ReturnRule { intersect, direct };

struct GmOptions {
  ReturnRule return_rule = ReturnRule::intersect;
};

struct BcdTraceRow {
  int iter = 0;
  double objective = 0.0;       // average covert rate [bit/s/Hz]
  double max_violation = 0.0;   // worst exact covertness-gap excess
};

struct PlanDiagnostics {
  std::string method;
  int hover_slot = -1;  // first slot parked at the unconstrained optimum, -1 if none
  double trajectory_seconds = 0.0;
  double power_seconds = 0.0;
  double total_seconds = 0.0;
  int bcd_iterations = 0;  // iterative benchmark only
  bool converged = true;
  std::vector<std::string> warnings;
  std::vector<BcdTraceRow> trace;  // iterative benchmark only
};

struct PlanResult {
  Trajectory trajectory;
  PowerSchedule power;
  std::vector<double> slot_rate;  // [bit/s/Hz], size n_slots
  double average_rate = 0.0;
  PlanDiagnostics diagnostics;
};

/// Root x* of covert_gap(x) == eps, by bisection on [eps, 1/(2(1-eps))] to
/// 1e-12. The admissible per-slot budget for p_a * tau. Rejects eps outside
/// (0, 1).
double covert_budget(double eps);

/// Greedy slot-by-slot trajectory: each waypoint maximizes the slant-distance
/// ratio subject to reachability and the configured return rule.
Trajectory plan_trajectory(const Scenario& s, const GmOptions& opt = {});

/// Covertness-tight power: p_a[n] = x*/tau[n] per slot (0 where the jammer
/// is off), capped by tx_power_cap when configured.
PowerSchedule solve_power(const Trajectory& traj, const Scenario& s);

/// Full geometric plan: trajectory, power, per-slot rates, diagnostics with
/// separate trajectory/power stage timings.
PlanResult plan(const Scenario& s, const GmOptions& opt = {});

}  // namespace covertplan
