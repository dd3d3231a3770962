#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <utility>

#include "covertplan/ci_planner.hpp"
#include "covertplan/detection.hpp"
#include "covertplan/geometry.hpp"
#include "covertplan/gm_planner.hpp"
#include "covertplan/harness.hpp"
#include "covertplan/scenario_io.hpp"

namespace py = pybind11;
using namespace covertplan;

namespace {

using XY = std::pair<double, double>;

Vec2 to_vec(const XY& p) { return {p.first, p.second}; }
XY from_vec(const Vec2& v) { return {v.x, v.y}; }

std::vector<XY> waypoints_of(const Trajectory& t) {
  std::vector<XY> out;
  out.reserve(t.waypoints.size());
  for (const Vec2& w : t.waypoints) out.push_back(from_vec(w));
  return out;
}

Scenario make_scenario(const XY& alice, const XY& bob, const XY& willie,
                       const XY& uav_start, const XY& uav_end, double altitude,
                       double v_max, double slot_duration, int n_slots,
                       double beta0, double alpha, double noise_bob,
                       double noise_willie, double outage_cap,
                       double covertness_eps, const py::object& jam_power_cap,
                       const std::optional<double>& tx_power_cap) {
  Scenario s;
  s.alice = to_vec(alice);
  s.bob = to_vec(bob);
  s.willie = to_vec(willie);
  s.uav_start = to_vec(uav_start);
  s.uav_end = to_vec(uav_end);
  s.altitude = altitude;
  s.v_max = v_max;
  s.slot_duration = slot_duration;
  s.n_slots = n_slots;
  s.beta0 = beta0;
  s.alpha = alpha;
  s.noise_bob = noise_bob;
  s.noise_willie = noise_willie;
  s.outage_cap = outage_cap;
  s.covertness_eps = covertness_eps;
  if (py::isinstance<py::float_>(jam_power_cap) ||
      py::isinstance<py::int_>(jam_power_cap))
    s.jam_power_cap.assign(n_slots, jam_power_cap.cast<double>());
  else
    s.jam_power_cap = jam_power_cap.cast<std::vector<double>>();
  s.tx_power_cap = tx_power_cap;
  s.validate();
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Joint jamming-UAV trajectory and transmit-power planning for a covert "
      "link, with closed-form radiometer detection analysis.";

  py::register_exception<ScenarioFileError>(m, "ScenarioFileError",
                                            PyExc_ValueError);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init(&make_scenario), py::arg("alice"), py::arg("bob"),
           py::arg("willie"), py::arg("uav_start"), py::arg("uav_end"),
           py::arg("altitude"), py::arg("v_max"), py::arg("slot_duration"),
           py::arg("n_slots"), py::arg("beta0"), py::arg("alpha") = 3.0,
           py::arg("noise_bob") = 1e-14, py::arg("noise_willie") = 1e-14,
           py::arg("outage_cap") = 0.1, py::arg("covertness_eps") = 0.1,
           py::arg("jam_power_cap") = py::float_(0.01),
           py::arg("tx_power_cap") = std::nullopt)
      .def_property_readonly("alice", [](const Scenario& s) { return from_vec(s.alice); })
      .def_property_readonly("bob", [](const Scenario& s) { return from_vec(s.bob); })
      .def_property_readonly("willie", [](const Scenario& s) { return from_vec(s.willie); })
      .def_property_readonly("uav_start", [](const Scenario& s) { return from_vec(s.uav_start); })
      .def_property_readonly("uav_end", [](const Scenario& s) { return from_vec(s.uav_end); })
      .def_readonly("altitude", &Scenario::altitude)
      .def_readonly("v_max", &Scenario::v_max)
      .def_readonly("slot_duration", &Scenario::slot_duration)
      .def_readonly("n_slots", &Scenario::n_slots)
      .def_readonly("beta0", &Scenario::beta0)
      .def_readonly("alpha", &Scenario::alpha)
      .def_readonly("noise_bob", &Scenario::noise_bob)
      .def_readonly("noise_willie", &Scenario::noise_willie)
      .def_readonly("outage_cap", &Scenario::outage_cap)
      .def_readonly("covertness_eps", &Scenario::covertness_eps)
      .def_readonly("jam_power_cap", &Scenario::jam_power_cap)
      .def_readonly("tx_power_cap", &Scenario::tx_power_cap)
      .def("max_step", &Scenario::max_step)
      .def("flight_period", &Scenario::flight_period)
      .def(
          "slot_coeffs",
          [](const Scenario& s, const XY& uav, int slot) {
            return s.slot_coeffs(to_vec(uav), slot);
          },
          py::arg("uav"), py::arg("slot"));

  py::class_<SlotCoefficients>(m, "SlotCoefficients")
      .def_readonly("dist2_bob", &SlotCoefficients::dist2_bob)
      .def_readonly("dist2_willie", &SlotCoefficients::dist2_willie)
      .def_readonly("jam_cap", &SlotCoefficients::jam_cap)
      .def_readonly("gamma", &SlotCoefficients::gamma)
      .def_readonly("phi", &SlotCoefficients::phi)
      .def_readonly("tau", &SlotCoefficients::tau)
      .def_readonly("eta", &SlotCoefficients::eta)
      .def_readonly("psi", &SlotCoefficients::psi)
      .def_readonly("kappa", &SlotCoefficients::kappa);

  py::class_<Trajectory>(m, "Trajectory")
      .def_property_readonly("waypoints", &waypoints_of)
      .def("validate", &Trajectory::validate);

  py::class_<PowerSchedule>(m, "PowerSchedule")
      .def_readonly("p_a", &PowerSchedule::p_a)
      .def_readonly("gap", &PowerSchedule::gap);

  py::class_<BcdTraceRow>(m, "BcdTraceRow")
      .def_readonly("iter", &BcdTraceRow::iter)
      .def_readonly("objective", &BcdTraceRow::objective)
      .def_readonly("max_violation", &BcdTraceRow::max_violation);

  py::class_<PlanDiagnostics>(m, "PlanDiagnostics")
      .def_readonly("method", &PlanDiagnostics::method)
      .def_readonly("hover_slot", &PlanDiagnostics::hover_slot)
      .def_readonly("trajectory_seconds", &PlanDiagnostics::trajectory_seconds)
      .def_readonly("power_seconds", &PlanDiagnostics::power_seconds)
      .def_readonly("total_seconds", &PlanDiagnostics::total_seconds)
      .def_readonly("bcd_iterations", &PlanDiagnostics::bcd_iterations)
      .def_readonly("converged", &PlanDiagnostics::converged)
      .def_readonly("warnings", &PlanDiagnostics::warnings)
      .def_readonly("trace", &PlanDiagnostics::trace);

  py::class_<PlanResult>(m, "PlanResult")
      .def_readonly("trajectory", &PlanResult::trajectory)
      .def_readonly("power", &PlanResult::power)
      .def_readonly("slot_rate", &PlanResult::slot_rate)
      .def_readonly("average_rate", &PlanResult::average_rate)
      .def_readonly("diagnostics", &PlanResult::diagnostics);

  py::class_<RadiometerSim>(m, "RadiometerSim")
      .def_readonly("threshold", &RadiometerSim::threshold)
      .def_readonly("false_alarm", &RadiometerSim::false_alarm)
      .def_readonly("miss_detection", &RadiometerSim::miss_detection)
      .def_readonly("min_total", &RadiometerSim::min_total)
      .def_readonly("min_threshold", &RadiometerSim::min_threshold)
      .def_readonly("seed", &RadiometerSim::seed)
      .def_readonly("channel_uses", &RadiometerSim::channel_uses)
      .def_readonly("samples", &RadiometerSim::samples);

  m.def("load_scenario", &load_scenario, py::arg("path"),
        "Parse a scenario file (see the README for the key list).");

  m.def(
      "plan_gm",
      [](const Scenario& s, const std::string& return_rule) {
        GmOptions opt;
        if (return_rule == "direct")
          opt.return_rule = ReturnRule::direct;
        else if (return_rule != "intersect")
          throw std::invalid_argument("return_rule must be intersect or direct");
        return plan(s, opt);
      },
      py::arg("scenario"), py::arg("return_rule") = "intersect",
      "Geometric plan: greedy ratio-optimal trajectory + covertness-tight power.");

  m.def(
      "plan_ci",
      [](const Scenario& s, double bcd_tolerance, int max_bcd_iters,
         double cccp_tolerance, int cccp_max_iters) {
        CiConfig cfg;
        cfg.bcd_tolerance = bcd_tolerance;
        cfg.max_bcd_iters = max_bcd_iters;
        cfg.cccp_tolerance = cccp_tolerance;
        cfg.cccp_max_iters = cccp_max_iters;
        return bcd_solve(s, cfg);
      },
      py::arg("scenario"), py::arg("bcd_tolerance") = 1e-4,
      py::arg("max_bcd_iters") = 25, py::arg("cccp_tolerance") = 1e-6,
      py::arg("cccp_max_iters") = 12,
      "Iterative benchmark plan: block-coordinate descent with linearized "
      "covertness constraints.");

  m.def(
      "hover_point",
      [](const XY& bob, const XY& willie, double altitude) {
        return from_vec(hover_point(to_vec(bob), to_vec(willie), altitude));
      },
      py::arg("bob"), py::arg("willie"), py::arg("altitude"),
      "Unconstrained maximizer of the slant-distance ratio.");

  m.def(
      "slot_argmax",
      [](const XY& prev, const XY& bob, const XY& willie, double altitude,
         double step) {
        const SlotMax best =
            slot_argmax(to_vec(prev), to_vec(bob), to_vec(willie), altitude, step);
        return py::make_tuple(from_vec(best.point), best.ratio, best.interior);
      },
      py::arg("prev"), py::arg("bob"), py::arg("willie"), py::arg("altitude"),
      py::arg("step"),
      "Per-slot ratio maximizer over the reachable disk: (point, ratio, interior).");

  m.def(
      "uav_gain",
      [](const XY& uav, const XY& ground, double altitude, double beta0) {
        return uav_gain(to_vec(uav), to_vec(ground), altitude, beta0);
      },
      py::arg("uav"), py::arg("ground"), py::arg("altitude"), py::arg("beta0"));

  m.def("rate_bound", &rate_bound, py::arg("p_a"), py::arg("coeffs"));
  m.def("outage_probability", &outage_probability, py::arg("p_a"),
        py::arg("p_u"), py::arg("rate"), py::arg("coeffs"), py::arg("scenario"));
  m.def("false_alarm", &false_alarm, py::arg("threshold"), py::arg("coeffs"),
        py::arg("scenario"));
  m.def("miss_detection", &miss_detection, py::arg("threshold"), py::arg("p_a"),
        py::arg("coeffs"), py::arg("scenario"));
  m.def("min_error_rate", &min_error_rate, py::arg("p_a"), py::arg("coeffs"));
  m.def("covertness_gap", &covertness_gap, py::arg("p_a"), py::arg("coeffs"));
  m.def("covert_budget", &covert_budget, py::arg("eps"),
        "Root of the covertness gap: the admissible per-slot p_a * tau.");
  m.def(
      "average_covert_rate",
      [](const Trajectory& t, const PowerSchedule& p, const Scenario& s) {
        return average_covert_rate(t, p, s);
      },
      py::arg("trajectory"), py::arg("power"), py::arg("scenario"));

  m.def(
      "simulate_radiometer",
      [](const Scenario& s, const XY& uav, int slot, double p_a,
         long channel_uses, long samples, std::uint64_t seed, int grid) {
        return simulate_radiometer(s, to_vec(uav), slot, p_a, channel_uses,
                                   samples, seed, grid);
      },
      py::arg("scenario"), py::arg("uav"), py::arg("slot"), py::arg("p_a"),
      py::arg("channel_uses") = 0, py::arg("samples") = 1000000,
      py::arg("seed") = 0, py::arg("grid") = 2000,
      "Monte Carlo radiometer run; channel_uses = 0 uses the infinite-"
      "averaging statistic.");

  m.attr("__version__") = "0.1.0";
}
