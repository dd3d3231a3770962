#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "covertplan/detection.hpp"
#include "covertplan/geometry.hpp"
#include "covertplan/gm_planner.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace covertplan;
namespace ct = covertplan::testing;

TEST_CASE("covert budget root: frozen value, bisection oracle, edge cases") {
  const double budget = covert_budget(0.1);
  CHECK(covert_gap(budget) == doctest::Approx(0.1).epsilon(1e-10));
  const double oracle =
      ct::bisect_increasing([](double x) { return covert_gap(x); }, 0.1, 1e-6,
                            10.0, 1e-13);
  CHECK(budget == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(budget == doctest::Approx(0.100005).epsilon(1e-4));

  CHECK(covert_budget(1e-9) < 2e-9);  // vanishing budget with the tolerance
  CHECK_THROWS_AS(covert_budget(1.0), std::invalid_argument);
  CHECK_THROWS_AS(covert_budget(0.0), std::invalid_argument);
}

TEST_CASE("solve_power pins the covertness gap to the budget") {
  const Scenario s = ct::sec5_scenario();
  const Trajectory traj = plan_trajectory(s);
  const PowerSchedule power = solve_power(traj, s);
  for (int n = 1; n <= s.n_slots; ++n) {
    REQUIRE(power.p_a[n - 1] > 0.0);
    CHECK(std::abs(power.gap[n - 1] - s.covertness_eps) <= 1e-9);
  }
}

TEST_CASE("doubling the jam ceiling doubles the transmit power exactly") {
  const Scenario s = ct::sec5_scenario();
  Scenario doubled = s;
  for (double& cap : doubled.jam_power_cap) cap *= 2.0;
  const Trajectory traj = plan_trajectory(s);
  const PowerSchedule base = solve_power(traj, s);
  const PowerSchedule twice = solve_power(traj, doubled);
  for (int n = 0; n < s.n_slots; ++n)
    CHECK(std::abs(twice.p_a[n] - 2.0 * base.p_a[n]) <= 1e-9 * twice.p_a[n]);
}

TEST_CASE("vanishing budget sends the power to zero") {
  Scenario s = ct::sec5_scenario();
  s.covertness_eps = 1e-8;
  const Trajectory traj = plan_trajectory(s);
  const PowerSchedule power = solve_power(traj, s);
  for (double p : power.p_a) CHECK(p < 1e-6);
}

TEST_CASE("just-enough slots force the straight line") {
  Scenario s = ct::sec5_scenario();
  s.uav_start = {0.0, 0.0};
  s.uav_end = {30.0, 0.0};
  s.n_slots = 20;  // 20 * 1.5 m exactly covers the 30 m
  s.jam_power_cap.assign(20, 0.01);
  s.willie = {15.0, 40.0};
  s.validate();
  for (ReturnRule rule : {ReturnRule::intersect, ReturnRule::direct}) {
    const Trajectory traj = plan_trajectory(s, {rule});
    traj.validate(s);
    for (int n = 0; n <= s.n_slots; ++n) {
      CHECK(traj.waypoints[n].x == doctest::Approx(1.5 * n).epsilon(1e-9));
      CHECK(std::abs(traj.waypoints[n].y) < 1e-6);
    }
  }
}

TEST_CASE("reference geometry: hover on the focal ray, longer flights hover more") {
  const Vec2 analytic{200.0, 100.0 + 100.0 * std::sqrt(2.0)};
  int previous_count = -1;
  for (double period : {250.0, 300.0, 350.0}) {
    const Scenario s = ct::sec5_scenario(period);
    const Trajectory traj = plan_trajectory(s);
    traj.validate(s);

    int hover_count = 0;
    double best = 1e18;
    Vec2 best_wp;
    for (int n = 1; n <= s.n_slots; ++n) {
      const double d = distance(traj.waypoints[n], analytic);
      if (d < 5.0) ++hover_count;
      if (d < best) {
        best = d;
        best_wp = traj.waypoints[n];
      }
      // return stays feasible at every slot
      CHECK(distance(traj.waypoints[n], s.uav_end) <=
            (s.n_slots - n) * s.max_step() * (1 + 1e-9));
    }
    CHECK(best < 0.1);  // analytic hover point reached
    // collinear with the focal ray and beyond the warden
    CHECK(std::abs(cross(best_wp - s.bob, s.willie - s.bob)) /
              (s.willie - s.bob).norm() <
          1.0);
    CHECK(dot(best_wp - s.willie, s.willie - s.bob) > 0.0);
    CHECK(hover_count >= previous_count);
    previous_count = hover_count;
  }
}

TEST_CASE("per-slot ratio climbs until the hover phase") {
  const Scenario s = ct::sec5_scenario();
  const PlanResult result = plan(s);
  REQUIRE(result.diagnostics.hover_slot > 0);
  double prev = 0.0;
  for (int n = 1; n <= result.diagnostics.hover_slot; ++n) {
    const double r =
        ct::ratio_at(result.trajectory.waypoints[n], s.bob, s.willie, s.altitude);
    CHECK(r >= prev - 1e-12);
    prev = r;
  }
}

TEST_CASE("full plan: diagnostics, covertness cross-check, average identity") {
  const Scenario s = ct::sec5_scenario();
  const PlanResult result = plan(s);
  CHECK(result.diagnostics.method == "gm");
  CHECK(result.diagnostics.hover_slot > 0);
  CHECK(result.average_rate > 0.0);

  double mean = 0.0;
  for (double r : result.slot_rate) mean += r;
  mean /= result.slot_rate.size();
  CHECK(result.average_rate == doctest::Approx(mean).epsilon(1e-12));

  // detection-module cross-check of the covertness constraint
  const DetectionReport report = detection_report(result.trajectory, result.power, s);
  for (int n = 0; n < s.n_slots; ++n)
    CHECK(report.slots[n].min_error >= 1.0 - s.covertness_eps - 1e-9);
}

TEST_CASE("degenerate single-slot plan") {
  Scenario s = ct::sec5_scenario();
  s.n_slots = 1;
  s.jam_power_cap.assign(1, 0.01);
  s.uav_end = {-99.0, 100.5};
  s.validate();
  const PlanResult result = plan(s);
  CHECK(result.trajectory.waypoints.size() == 2);
  CHECK(result.trajectory.waypoints[0] == s.uav_start);
  CHECK(result.trajectory.waypoints[1] == s.uav_end);
  CHECK(std::abs(result.power.gap[0] - s.covertness_eps) <= 1e-9);
}

TEST_CASE("jammer-off slots carry zero power and a warning") {
  Scenario s = ct::sec5_scenario(60.0);
  s.uav_start = {0.0, 0.0};
  s.uav_end = {30.0, 0.0};
  s.n_slots = 120;
  s.jam_power_cap.assign(120, 0.01);
  s.jam_power_cap[5] = 0.0;
  s.validate();
  const PlanResult result = plan(s);
  CHECK(result.power.p_a[5] == 0.0);
  CHECK(result.slot_rate[5] == 0.0);
  bool warned = false;
  for (const auto& w : result.diagnostics.warnings)
    warned = warned || w.find("slot 6") != std::string::npos;
  CHECK(warned);
}

TEST_CASE("transmit power cap binds when configured") {
  Scenario s = ct::sec5_scenario();
  s.tx_power_cap = 0.5;
  const Trajectory traj = plan_trajectory(s);
  const PowerSchedule power = solve_power(traj, s);
  for (int n = 0; n < s.n_slots; ++n) {
    CHECK(power.p_a[n] <= 0.5 + 1e-15);
    CHECK(power.gap[n] <= s.covertness_eps + 1e-12);
  }
}

TEST_CASE("randomized scenarios: plans stay feasible and tight") {
  std::mt19937_64 rng(4242);
  for (int rep = 0; rep < 25; ++rep) {
    Scenario s = ct::sec5_scenario();
    s.uav_start = ct::uniform_point(rng, -150.0, 150.0);
    s.uav_end = rep % 5 == 0 ? s.uav_start  // closed loop
                             : ct::uniform_point(rng, -150.0, 150.0);
    s.willie = ct::uniform_point(rng, -250.0, 250.0);
    s.bob = ct::uniform_point(rng, -250.0, 250.0);
    s.altitude = ct::uniform(rng, 20.0, 200.0);
    s.covertness_eps = ct::uniform(rng, 0.02, 0.8);
    const double need = distance(s.uav_start, s.uav_end) / s.max_step();
    s.n_slots = std::max(1, static_cast<int>(std::ceil(need)) +
                                static_cast<int>(ct::uniform(rng, 0.0, 200.0)));
    s.jam_power_cap.assign(s.n_slots,
                           0.01 * std::pow(10.0, ct::uniform(rng, -1.0, 1.0)));
    s.validate();

    const PlanResult result = plan(s);
    result.trajectory.validate(s);
    for (int n = 1; n <= s.n_slots; ++n) {
      CHECK(std::abs(result.power.gap[n - 1] - s.covertness_eps) <= 1e-9);
      CHECK(distance(result.trajectory.waypoints[n], s.uav_end) <=
            (s.n_slots - n) * s.max_step() * (1 + 1e-9));
    }
    CHECK(result.average_rate >= 0.0);
  }
}

TEST_CASE("return rules: both feasible, intersection rule never worse") {
  const Scenario s = ct::sec5_scenario(250.0);
  const PlanResult with_intersect = plan(s, {ReturnRule::intersect});
  const PlanResult with_direct = plan(s, {ReturnRule::direct});
  with_intersect.trajectory.validate(s);
  with_direct.trajectory.validate(s);
  CHECK(with_intersect.average_rate >= with_direct.average_rate - 1e-9);
}
