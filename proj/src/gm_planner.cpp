#include "covertplan/gm_planner.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "covertplan/detection.hpp"
#include "covertplan/geometry.hpp"

namespace covertplan {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

double covert_budget(double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument(
        "covert_budget: eps must lie in (0,1); the gap never reaches 1");
  double lo = eps;                        // gap(x) < x
  double hi = 1.0 / (2.0 * (1.0 - eps));  // gap(x) >= 1 - 1/(2x)
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (covert_gap(mid) < eps ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Trajectory plan_trajectory(const Scenario& s, const GmOptions& opt) {
  s.validate();
  const double step = s.max_step();
  const int n_slots = s.n_slots;
  std::vector<Vec2> wp(n_slots + 1);
  wp[0] = s.uav_start;
  for (int n = 1; n < n_slots; ++n) {
    const double remaining = (n_slots - n) * step;
    if (opt.return_rule == ReturnRule::intersect) {
      if (distance(wp[n - 1], s.uav_end) + step <= remaining) {
        wp[n] = slot_argmax(wp[n - 1], s.bob, s.willie, s.altitude, step).point;
      } else {
        const std::array<DiskConstraint, 2> disks{
            DiskConstraint{wp[n - 1], step},
            DiskConstraint{s.uav_end, remaining}};
        wp[n] = max_ratio_in_disks(disks, s.bob, s.willie, s.altitude).point;
      }
    } else {
      const Vec2 cand =
          slot_argmax(wp[n - 1], s.bob, s.willie, s.altitude, step).point;
      if (distance(cand, s.uav_end) <= remaining * (1.0 + 1e-12)) {
        wp[n] = cand;
      } else {
        // return leg: full speed straight toward the end point
        const double dist = distance(wp[n - 1], s.uav_end);
        wp[n] = dist <= step
                    ? s.uav_end
                    : wp[n - 1] + (s.uav_end - wp[n - 1]) * (step / dist);
      }
    }
  }
  wp[n_slots] = s.uav_end;
  return Trajectory{std::move(wp)};
}

PowerSchedule solve_power(const Trajectory& traj, const Scenario& s) {
  const int n_slots = s.n_slots;
  if (static_cast<int>(traj.waypoints.size()) != n_slots + 1)
    throw std::invalid_argument("solve_power: trajectory/slot count mismatch");
  const double budget = covert_budget(s.covertness_eps);  // x*: gap(x*) = eps
  PowerSchedule ps;
  ps.p_a.resize(n_slots, 0.0);
  ps.gap.resize(n_slots, 0.0);
  for (int n = 1; n <= n_slots; ++n) {
    const SlotCoefficients c = s.slot_coeffs(traj.waypoints[n], n);
    if (c.jam_cap <= 0.0) continue;  // no jamming, no covert budget
    double p = budget / c.tau;
    if (s.tx_power_cap) p = std::min(p, *s.tx_power_cap);
    ps.p_a[n - 1] = p;
    ps.gap[n - 1] = covertness_gap(p, c);
  }
  return ps;
}

PlanResult plan(const Scenario& s, const GmOptions& opt) {
  PlanResult out;
  out.diagnostics.method = "gm";
  const auto t0 = std::chrono::steady_clock::now();
  out.trajectory = plan_trajectory(s, opt);
  out.diagnostics.trajectory_seconds = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  out.power = solve_power(out.trajectory, s);
  out.diagnostics.power_seconds = seconds_since(t1);

  out.slot_rate.resize(s.n_slots);
  for (int n = 1; n <= s.n_slots; ++n) {
    const SlotCoefficients c = s.slot_coeffs(out.trajectory.waypoints[n], n);
    out.slot_rate[n - 1] = rate_bound(out.power.p_a[n - 1], c);
    if (c.jam_cap <= 0.0)
      out.diagnostics.warnings.push_back("slot " + std::to_string(n) +
                                         ": jammer off, transmit power forced to 0");
  }
  out.average_rate = average_covert_rate(out.trajectory, out.power, s);

  if (!(s.bob == s.willie)) {
    const Vec2 hover = hover_point(s.bob, s.willie, s.altitude);
    for (int n = 1; n <= s.n_slots; ++n) {
      if (distance(out.trajectory.waypoints[n], hover) <= 1e-6) {
        out.diagnostics.hover_slot = n;
        break;
      }
    }
  }
  out.diagnostics.total_seconds = seconds_since(t0);
  return out;
}

}  // namespace covertplan
