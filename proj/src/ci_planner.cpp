#include "covertplan/ci_planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "covertplan/detection.hpp"

namespace covertplan {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

long ceil_slots(double dist, double step) {
  return static_cast<long>(std::ceil(dist / step - 1e-9));
}

double objective_eval(const Trajectory& traj, const PowerSchedule& power,
                      const Scenario& s) {
  double sum = 0.0;
  for (int n = 1; n <= s.n_slots; ++n)
    sum += rate_bound(power.p_a[n - 1], s.slot_coeffs(traj.waypoints[n], n));
  return sum / s.n_slots;
}

double worst_gap_excess(const Trajectory& traj, const PowerSchedule& power,
                        const Scenario& s) {
  double worst = 0.0;
  for (int n = 1; n <= s.n_slots; ++n) {
    const double p = power.p_a[n - 1];
    if (p <= 0.0) continue;
    const double gap =
        covertness_gap(p, s.slot_coeffs(traj.waypoints[n], n));
    worst = std::max(worst, gap - s.covertness_eps);
  }
  return worst;
}

}  // namespace

void CiConfig::validate() const {
  if (!(bcd_tolerance > 0.0) || !(cccp_tolerance > 0.0) ||
      !(feasibility_tolerance > 0.0))
    throw std::invalid_argument("ci config: tolerances must be positive");
  if (max_bcd_iters < 1 || cccp_max_iters < 1 || max_sweeps < 1)
    throw std::invalid_argument("ci config: iteration limits must be positive");
}

TurnPoint turn_point(const Scenario& s) {
  const double step = s.max_step();
  const int n_slots = s.n_slots;
  const double d_out = distance(s.willie, s.uav_start);
  if (d_out == 0.0) return {0, s.uav_start};
  const Vec2 theta_out = (s.willie - s.uav_start) / d_out;
  const double reach = n_slots * step;
  const double dist_end = distance(s.uav_end, s.uav_start);
  const double numer = reach * reach - dist_end * dist_end;
  double cosang = 0.0;
  const double d_back = distance(s.uav_end, s.willie);
  if (d_back > 0.0) cosang = dot(theta_out, (s.uav_end - s.willie) / d_back);
  const double denom = 2.0 * step * (reach - dist_end * cosang);
  long slots = 0;
  if (numer > 0.0 && denom > 0.0)
    slots = static_cast<long>(std::floor(numer / denom + 1e-9));
  slots = std::clamp<long>(slots, 0, n_slots);
  // never turn later than the return deadline allows
  while (slots > 0 &&
         distance(s.uav_start + theta_out * (slots * step), s.uav_end) >
             (n_slots - slots) * step * (1.0 + 1e-12))
    --slots;
  return {static_cast<int>(slots), s.uav_start + theta_out * (slots * step)};
}

Trajectory init_trajectory(const Scenario& s) {
  s.validate();
  const double step = s.max_step();
  const int n_slots = s.n_slots;
  std::vector<Vec2> wp(n_slots + 1);

  const double d_out = distance(s.willie, s.uav_start);
  const double d_back = distance(s.uav_end, s.willie);
  const long n_out = d_out > 0.0 ? ceil_slots(d_out, step) : 0;
  const long n_back = d_back > 0.0 ? ceil_slots(d_back, step) : 0;

  if (n_out + n_back <= n_slots) {
    // enough slots: fly above Willie, loiter, return
    const long n3 = n_slots - n_back;
    const Vec2 theta_out =
        d_out > 0.0 ? (s.willie - s.uav_start) / d_out : Vec2{};
    const Vec2 theta_back =
        d_back > 0.0 ? (s.uav_end - s.willie) / d_back : Vec2{};
    for (int n = 0; n <= n_slots; ++n) {
      if (n < n_out)
        wp[n] = s.uav_start + theta_out * (n * step);
      else if (n < n3)
        wp[n] = s.willie;
      else
        wp[n] = s.willie + theta_back * ((n - n3) * step);
    }
  } else {
    // deadline-limited: head for Willie, turn at the computed slot
    const auto turn = turn_point(s);
    const Vec2 theta_out = (s.willie - s.uav_start) / d_out;
    const double leg = distance(turn.point, s.uav_end);
    const Vec2 theta_in =
        leg > 0.0 ? (s.uav_end - turn.point) / leg : Vec2{};
    for (int n = 0; n <= n_slots; ++n) {
      if (n <= turn.slots)
        wp[n] = s.uav_start + theta_out * (n * step);
      else
        wp[n] = turn.point + theta_in * std::min((n - turn.slots) * step, leg);
    }
  }
  wp[n_slots] = s.uav_end;
  Trajectory traj{std::move(wp)};
  traj.validate(s);
  return traj;
}

PowerSchedule power_step(const Trajectory& traj, const PowerSchedule& p_prev,
                         const Scenario& s, const CiConfig& cfg) {
  cfg.validate();
  const int n_slots = s.n_slots;
  if (static_cast<int>(p_prev.p_a.size()) != n_slots)
    throw std::invalid_argument("power_step: power/slot count mismatch");
  const double eps = s.covertness_eps;
  PowerSchedule out;
  out.p_a.resize(n_slots, 0.0);
  out.gap.resize(n_slots, 0.0);
  for (int n = 1; n <= n_slots; ++n) {
    const SlotCoefficients c = s.slot_coeffs(traj.waypoints[n], n);
    if (c.jam_cap <= 0.0) continue;
    double x = p_prev.p_a[n - 1] * c.tau;
    if (!(x > 0.0))
      throw std::invalid_argument(
          "power_step: Taylor point must be strictly positive at slot " +
          std::to_string(n));
    // Maximize p subject to the tangent minorant of the gap at the previous
    // point; affine in x = p*tau, solved in closed form and iterated.
    for (int it = 0; it < cfg.cccp_max_iters; ++it) {
      const double e = std::exp(-1.0 / x);
      const double v = x * e;
      const double dv = e * (1.0 + 1.0 / x);
      const double slope = 1.0 - dv;  // derivative of the exact gap, > 0
      if (!(slope > 0.0))
        throw std::runtime_error(
            "power_step: nonpositive linearized slope at slot " +
            std::to_string(n));
      double xn = (eps + v - dv * x) / slope;
      if (s.tx_power_cap) xn = std::min(xn, *s.tx_power_cap * c.tau);
      const bool done = std::abs(xn - x) <= cfg.cccp_tolerance * xn;
      x = xn;
      if (done) break;
    }
    out.p_a[n - 1] = x / c.tau;
    out.gap[n - 1] = covertness_gap(out.p_a[n - 1], c);
  }
  return out;
}

namespace {

/// Constants of the rate objective per slot: rate = log1p(C/(A/w + B))/ln2
/// with w the squared slant distance to Bob. The objective is separable per
/// waypoint and increasing in w.
struct RateConsts {
  double A = 0.0, C = 0.0;
};

struct DiskSet {
  Vec2 center[3];
  double radius[3];
  int count = 0;

  void add(const Vec2& c, double r) {
    center[count] = c;
    radius[count] = r;
    ++count;
  }
  bool contains(const Vec2& q) const {
    for (int i = 0; i < count; ++i)
      if (distance(q, center[i]) > radius[i] * (1.0 + 1e-12) + 1e-12)
        return false;
    return true;
  }
};

/// Farthest point from `bob` over an intersection of disks. The maximum of a
/// convex function over a convex set sits on the boundary: per-disk farthest
/// points and pairwise circle corners exhaust the candidates. `fallback`
/// must be feasible.
Vec2 farthest_in_disks(const DiskSet& disks, const Vec2& bob,
                       const Vec2& fallback) {
  Vec2 best = fallback;
  double best_d2 = (fallback - bob).norm2();
  const auto consider = [&](const Vec2& q) {
    const double d2 = (q - bob).norm2();
    if (d2 > best_d2 && disks.contains(q)) {
      best = q;
      best_d2 = d2;
    }
  };
  for (int i = 0; i < disks.count; ++i) {
    const Vec2 away = disks.center[i] - bob;
    const double dn = away.norm();
    const Vec2 dir = dn > 1e-14 ? away / dn : Vec2{1.0, 0.0};
    consider(disks.center[i] + dir * disks.radius[i]);
  }
  for (int i = 0; i < disks.count; ++i)
    for (int j = i + 1; j < disks.count; ++j) {
      const Vec2 d = disks.center[j] - disks.center[i];
      const double dist = d.norm();
      if (dist < 1e-14) continue;
      const double r1 = disks.radius[i], r2 = disks.radius[j];
      const double a = (dist * dist + r1 * r1 - r2 * r2) / (2.0 * dist);
      double h2 = r1 * r1 - a * a;
      if (h2 < 0.0) {
        if (h2 < -1e-9 * std::max(r1 * r1, 1e-30)) continue;
        h2 = 0.0;  // tangent circles
      }
      const Vec2 base = disks.center[i] + d * (a / dist);
      const Vec2 off = Vec2{-d.y, d.x} * (std::sqrt(h2) / dist);
      consider(base + off);
      consider(base - off);
    }
  return best;
}

struct TrajProblem {
  const Scenario* s = nullptr;
  std::vector<RateConsts> consts;  // index n in [1, N]
  std::vector<double> rcov;        // index n; < 0 when inactive
  double step = 0.0;
  double h2 = 0.0;

  double objective(const std::vector<Vec2>& q) const {
    const double B = s->noise_bob;
    double sum = 0.0;
    for (std::size_t n = 1; n < q.size(); ++n) {
      const auto& rc = consts[n];
      if (rc.C == 0.0) continue;
      const double w = (q[n] - s->bob).norm2() + h2;
      sum += std::log1p(rc.C / (rc.A / w + B));
    }
    return sum / (std::numbers::ln2 * (q.size() - 1));
  }

  /// One exact coordinate sweep: each free waypoint moves to the farthest
  /// point from Bob inside its two chain balls and its covertness disk.
  /// Keeps the chain feasible to machine precision.
  bool sweep(std::vector<Vec2>& q) const {
    bool improved = false;
    const int last = static_cast<int>(q.size()) - 1;
    for (int n = 1; n < last; ++n) {
      if (consts[n].C == 0.0) continue;  // this slot's rate ignores q[n]
      DiskSet disks;
      disks.add(q[n - 1], step);
      disks.add(q[n + 1], step);
      if (rcov[n] >= 0.0) disks.add(s->willie, rcov[n]);
      const Vec2 moved = farthest_in_disks(disks, s->bob, q[n]);
      if ((moved - s->bob).norm2() >
          (q[n] - s->bob).norm2() * (1.0 + 1e-14) + 1e-18) {
        q[n] = moved;
        improved = true;
      }
    }
    return improved;
  }
};

}  // namespace

TrajStepResult trajectory_step(const PowerSchedule& power,
                               const Trajectory& prev, const Scenario& s,
                               const CiConfig& cfg) {
  cfg.validate();
  const int n_slots = s.n_slots;
  if (static_cast<int>(prev.waypoints.size()) != n_slots + 1 ||
      static_cast<int>(power.p_a.size()) != n_slots)
    throw std::invalid_argument("trajectory_step: size mismatch");

  TrajProblem prob;
  prob.s = &s;
  prob.step = s.max_step();
  prob.h2 = s.altitude * s.altitude;
  prob.consts.resize(n_slots + 1);
  const double log_rel = -std::log1p(-s.outage_cap);
  const double gain_ab = s.beta0 / std::pow(s.dist_alice_bob(), s.alpha);
  for (int n = 1; n <= n_slots; ++n) {
    prob.consts[n].A = s.jam_cap(n) * s.beta0;
    prob.consts[n].C = log_rel * gain_ab * power.p_a[n - 1];
  }

  std::vector<Vec2> q = prev.waypoints;
  double obj = prob.objective(q);
  const double d_aw_alpha = std::pow(s.dist_alice_willie(), s.alpha);

  TrajStepResult out;
  out.converged = false;
  if (n_slots < 2) {  // no free waypoint
    out.trajectory = prev;
    out.objective = obj;
    out.converged = true;
    return out;
  }

  for (int outer = 1; outer <= cfg.cccp_max_iters; ++outer) {
    out.cccp_iterations = outer;
    // minorize the covertness gap about the current waypoints: per-slot
    // admissible disks about Willie
    prob.rcov.assign(n_slots + 1, -1.0);
    for (int n = 1; n < n_slots; ++n) {
      const double p = power.p_a[n - 1];
      const double cap = s.jam_power_cap[n - 1];
      if (p <= 0.0 || cap <= 0.0) continue;
      const double a = p / (cap * d_aw_alpha);
      const double wl = (q[n] - s.willie).norm2() + prob.h2;
      const double xl = a * wl;
      const double e = std::exp(-1.0 / xl);
      const double v = xl * e;
      const double dvdw = e * (a + 1.0 / wl);
      const double slope = a - dvdw;  // a * gap'(xl) > 0
      const double w_max = (s.covertness_eps + v - dvdw * wl) / slope;
      double radius = std::sqrt(std::max(0.0, w_max - prob.h2));
      // the expansion point itself stays feasible under rounding
      radius = std::max(radius, (q[n] - s.willie).norm());
      prob.rcov[n] = radius;
    }

    for (int it = 0; it < cfg.max_sweeps; ++it)
      if (!prob.sweep(q)) break;

    const double obj_after = prob.objective(q);
    const bool settled =
        obj_after - obj <= cfg.cccp_tolerance * std::max(1.0, std::abs(obj_after));
    obj = obj_after;
    if (settled) {
      out.converged = true;
      break;
    }
  }

  // verify the iterate against the exact constraints, not the linearization
  const double step_limit = prob.step * (1.0 + 1e-9);
  for (int n = 1; n <= n_slots; ++n) {
    if (distance(q[n], q[n - 1]) > step_limit)
      throw std::logic_error("trajectory_step: speed constraint broken at slot " +
                             std::to_string(n));
    const double p = power.p_a[n - 1];
    if (p <= 0.0) continue;
    const double gap = covertness_gap(p, s.slot_coeffs(q[n], n));
    if (gap > s.covertness_eps + cfg.feasibility_tolerance)
      throw std::logic_error(
          "trajectory_step: covertness budget exceeded at slot " +
          std::to_string(n));
  }

  out.trajectory = Trajectory{std::move(q)};
  out.objective = obj;
  return out;
}

PlanResult bcd_solve(const Scenario& s, const CiConfig& cfg) {
  s.validate();
  cfg.validate();
  PlanResult out;
  out.diagnostics.method = "ci";
  const auto t0 = std::chrono::steady_clock::now();

  Trajectory traj = init_trajectory(s);
  // strictly feasible starting power with margin below the budget
  auto t_power = std::chrono::steady_clock::now();
  PowerSchedule power = solve_power(traj, s);
  for (int n = 1; n <= s.n_slots; ++n) {
    power.p_a[n - 1] *= 0.5;
    if (power.p_a[n - 1] > 0.0)
      power.gap[n - 1] =
          covertness_gap(power.p_a[n - 1], s.slot_coeffs(traj.waypoints[n], n));
  }
  out.diagnostics.power_seconds += seconds_since(t_power);

  double obj_prev = objective_eval(traj, power, s);
  out.diagnostics.trace.push_back(
      {0, obj_prev, worst_gap_excess(traj, power, s)});

  bool converged = false;
  int iter = 0;
  while (iter < cfg.max_bcd_iters && !converged) {
    ++iter;
    t_power = std::chrono::steady_clock::now();
    power = power_step(traj, power, s, cfg);
    out.diagnostics.power_seconds += seconds_since(t_power);
    const double obj_p = objective_eval(traj, power, s);
    out.diagnostics.trace.push_back(
        {static_cast<int>(out.diagnostics.trace.size()), obj_p,
         worst_gap_excess(traj, power, s)});
    if (std::abs(obj_p - obj_prev) <= cfg.bcd_tolerance) {
      obj_prev = obj_p;
      converged = true;
      break;
    }

    const auto t_traj = std::chrono::steady_clock::now();
    const TrajStepResult ts = trajectory_step(power, traj, s, cfg);
    out.diagnostics.trajectory_seconds += seconds_since(t_traj);
    if (!ts.converged)
      out.diagnostics.warnings.push_back(
          "trajectory step hit its iteration cap at outer iteration " +
          std::to_string(iter));
    traj = ts.trajectory;
    const double obj_q = objective_eval(traj, power, s);
    out.diagnostics.trace.push_back(
        {static_cast<int>(out.diagnostics.trace.size()), obj_q,
         worst_gap_excess(traj, power, s)});
    if (std::abs(obj_q - obj_prev) <= cfg.bcd_tolerance) converged = true;
    obj_prev = obj_q;
  }

  out.diagnostics.bcd_iterations = iter;
  out.diagnostics.converged = converged;
  if (!converged)
    out.diagnostics.warnings.push_back(
        "outer loop stopped at max_bcd_iters without meeting bcd_tolerance");

  out.trajectory = std::move(traj);
  out.power = std::move(power);
  out.slot_rate.resize(s.n_slots);
  for (int n = 1; n <= s.n_slots; ++n) {
    out.slot_rate[n - 1] = rate_bound(
        out.power.p_a[n - 1], s.slot_coeffs(out.trajectory.waypoints[n], n));
    if (s.jam_power_cap[n - 1] <= 0.0)
      out.diagnostics.warnings.push_back(
          "slot " + std::to_string(n) + ": jammer off, transmit power forced to 0");
  }
  out.average_rate = average_covert_rate(out.trajectory, out.power, s);
  out.diagnostics.total_seconds = seconds_since(t0);
  return out;
}

}  // namespace covertplan
