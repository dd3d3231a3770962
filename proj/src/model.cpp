#include "covertplan/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "covertplan/detection.hpp"

namespace covertplan {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("scenario: " + what);
}

}  // namespace

void Scenario::validate() const {
  require(altitude > 0.0, "altitude must be positive");
  require(v_max > 0.0, "v_max must be positive");
  require(slot_duration > 0.0, "slot_duration must be positive");
  require(n_slots >= 1, "n_slots must be at least 1");
  require(beta0 > 0.0, "beta0 must be positive");
  require(alpha > 0.0, "alpha must be positive");
  require(noise_bob > 0.0, "noise_bob must be positive");
  require(noise_willie > 0.0, "noise_willie must be positive");
  require(outage_cap > 0.0 && outage_cap < 1.0, "outage_cap must lie in (0,1)");
  require(covertness_eps > 0.0 && covertness_eps < 1.0,
          "covertness_eps must lie in (0,1)");
  require(static_cast<int>(jam_power_cap.size()) == n_slots,
          "jam_power_cap must have one entry per slot");
  for (double cap : jam_power_cap)
    require(cap >= 0.0 && std::isfinite(cap), "jam_power_cap entries must be finite and >= 0");
  if (tx_power_cap) require(*tx_power_cap > 0.0, "tx_power_cap must be positive");
  const double reach = n_slots * v_max * slot_duration;
  require(distance(uav_start, uav_end) <= reach * (1.0 + 1e-9),
          "uav_end unreachable from uav_start within n_slots at v_max");
}

SlotCoefficients Scenario::slot_coeffs(const Vec2& uav_pos, int slot) const {
  if (slot < 1 || slot > n_slots)
    throw std::out_of_range("slot index out of range: " + std::to_string(slot));
  SlotCoefficients c;
  const double h2 = altitude * altitude;
  c.dist2_bob = (uav_pos - bob).norm2() + h2;
  c.dist2_willie = (uav_pos - willie).norm2() + h2;
  c.jam_cap = jam_power_cap[slot - 1];
  const double d_aw_alpha = std::pow(dist_alice_willie(), alpha);
  const double d_ab_alpha = std::pow(dist_alice_bob(), alpha);
  const double log_rel = -std::log1p(-outage_cap);  // -ln(1 - outage_cap) > 0
  c.gamma = c.jam_cap * beta0 / c.dist2_willie;
  c.phi = beta0 / d_aw_alpha;
  c.gain_bob = beta0 / d_ab_alpha;
  c.tau = c.dist2_willie / (c.jam_cap * d_aw_alpha);
  c.eta = log_rel / d_ab_alpha;
  c.psi = log_rel * c.gain_bob / (c.jam_cap * beta0 / c.dist2_bob + noise_bob);
  c.kappa = log_rel * d_aw_alpha / (d_ab_alpha * c.jam_cap);
  c.psi_bar_scale = log_rel * c.gain_bob;
  return c;
}

void Trajectory::validate(const Scenario& s) const {
  if (static_cast<int>(waypoints.size()) != s.n_slots + 1)
    throw std::invalid_argument("trajectory: expected n_slots + 1 waypoints");
  if (!(waypoints.front() == s.uav_start))
    throw std::invalid_argument("trajectory: must start at uav_start");
  if (!(waypoints.back() == s.uav_end))
    throw std::invalid_argument("trajectory: must end at uav_end");
  const double limit = s.max_step() * (1.0 + 1e-9);
  for (std::size_t n = 1; n < waypoints.size(); ++n) {
    if (distance(waypoints[n], waypoints[n - 1]) > limit)
      throw std::invalid_argument("trajectory: speed limit exceeded at slot " +
                                  std::to_string(n));
  }
}

double uav_gain(const Vec2& uav_pos, const Vec2& ground, double altitude,
                double beta0) {
  return beta0 / ((uav_pos - ground).norm2() + altitude * altitude);
}

double outage_exponent(double p_a, double p_u, double rate,
                       const SlotCoefficients& c, const Scenario& s) {
  const double gain_ub = s.beta0 / c.dist2_bob;
  return (std::exp2(rate) - 1.0) * (p_u * gain_ub + s.noise_bob) /
         (p_a * c.gain_bob);
}

double outage_probability(double p_a, double p_u, double rate,
                          const SlotCoefficients& c, const Scenario& s) {
  if (!(p_a > 0.0))
    throw std::invalid_argument("outage_probability: p_a must be positive");
  return -std::expm1(-outage_exponent(p_a, p_u, rate, c, s));
}

double rate_bound(double p_a, const SlotCoefficients& c) {
  if (p_a < 0.0) throw std::invalid_argument("rate_bound: p_a must be >= 0");
  return std::log1p(c.psi * p_a) / std::numbers::ln2;
}

double average_covert_rate(const Trajectory& traj, const PowerSchedule& power,
                           const Scenario& s) {
  const int n_slots = s.n_slots;
  if (static_cast<int>(traj.waypoints.size()) != n_slots + 1 ||
      static_cast<int>(power.p_a.size()) != n_slots)
    throw std::invalid_argument("average_covert_rate: size mismatch");
  double sum = 0.0;
  for (int n = 1; n <= n_slots; ++n) {
    const SlotCoefficients c = s.slot_coeffs(traj.waypoints[n], n);
    const double p = power.p_a[n - 1];
    if (p > 0.0) {
      const double gap = covertness_gap(p, c);
      if (gap > s.covertness_eps + 1e-6)
        throw std::domain_error("average_covert_rate: covertness violated at slot " +
                                std::to_string(n));
    }
    sum += rate_bound(p, c);
  }
  return sum / n_slots;
}

}  // namespace covertplan
