#pragma once

#include "covertplan/gm_planner.hpp"
#include "covertplan/model.hpp"

namespace covertplan {

/// Tunables of the iterative benchmark: block-coordinate outer loop,
/// convex-minorant inner loops, and the trajectory ascent sweeps.
struct CiConfig {
  double bcd_tolerance = 1e-4;  // stop when the objective change drops below [bit/s/Hz]
  int max_bcd_iters = 25;
  double cccp_tolerance = 1e-6;  // relative, power iterates and trajectory objective
  int cccp_max_iters = 12;
  double feasibility_tolerance = 1e-6;  // exact-constraint slack the iterates must respect
  int max_sweeps = 200;  // coordinate sweeps per trajectory linearization

  void validate() const;  // all tolerances/limits must be positive
};

/// Turning slot and turning point of the deadline-limited outbound leg
/// (law-of-cosines slot count, floored, clamped to keep the return feasible).
struct TurnPoint {
  int slots = 0;
  Vec2 point;
};
TurnPoint turn_point(const Scenario& s);

/// Best-effort initial trajectory: reach the point above Willie and loiter
/// when the slot budget allows, otherwise fly toward Willie for as many slots
/// as the return deadline permits, then turn to uav_end.
Trajectory init_trajectory(const Scenario& s);

/// One block update of the transmit powers: per slot, iterate the linearized
/// covertness constraint (tangent of the convex part at the previous power)
/// to its maximal feasible power. Requires a strictly positive previous power
/// on every slot with an active jammer.
PowerSchedule power_step(const Trajectory& traj, const PowerSchedule& p_prev,
                         const Scenario& s, const CiConfig& cfg);

struct TrajStepResult {
  Trajectory trajectory;
  double objective = 0.0;  // average covert rate at the returned trajectory
  int cccp_iterations = 0;
  bool converged = true;
};

/// One block update of the trajectory: minorize the covertness constraint
/// around the previous waypoints (per-slot disks about Willie) and ascend the
/// separable rate objective by exact per-waypoint coordinate sweeps over each
/// waypoint's chain balls and covertness disk. Iterates stay feasible to
/// machine precision and the objective never decreases.
TrajStepResult trajectory_step(const PowerSchedule& power,
                               const Trajectory& prev, const Scenario& s,
                               const CiConfig& cfg);

/// Full benchmark: alternate power_step and trajectory_step from
/// init_trajectory until the objective change falls within bcd_tolerance.
/// The diagnostics trace holds one row per half-step (objective and the
/// worst exact covertness violation).
PlanResult bcd_solve(const Scenario& s, const CiConfig& cfg = {});

}  // namespace covertplan
