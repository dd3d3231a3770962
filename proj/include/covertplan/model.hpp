#pragma once

#include <optional>
#include <vector>

#include "covertplan/vec2.hpp"

namespace covertplan {

struct SlotCoefficients;

/// Immutable problem definition: node geometry, UAV kinematics, channel
/// constants and the reliability/covertness targets. All powers and gains are
/// linear watts; dB values are converted once at the config boundary
/// (scenario_io). Safe to share across threads after validate().
struct Scenario {
  Vec2 alice, bob, willie;  // fixed ground positions [m]
  Vec2 uav_start, uav_end;  // flight endpoints [m]
  double altitude = 0.0;    // fixed flight altitude [m]
  double v_max = 0.0;       // max UAV speed [m/s]
  double slot_duration = 0.0;  // [s]
  int n_slots = 0;
  double beta0 = 0.0;  // channel power gain at the 1 m reference
  double alpha = 3.0;  // ground-to-ground path-loss exponent
  double noise_bob = 0.0;     // receiver noise power [W]
  double noise_willie = 0.0;  // warden noise power [W]
  double outage_cap = 0.0;    // max tolerated outage probability at Bob
  double covertness_eps = 0.0;  // detection-error budget at Willie
  std::vector<double> jam_power_cap;   // per-slot UAV power ceiling [W], size n_slots
  std::optional<double> tx_power_cap;  // optional transmitter power cap [W]

  /// Throws std::invalid_argument on any violated invariant, including
  /// endpoint reachability within n_slots at v_max.
  void validate() const;

  double max_step() const { return v_max * slot_duration; }
  double flight_period() const { return n_slots * slot_duration; }
  double dist_alice_bob() const { return distance(alice, bob); }
  double dist_alice_willie() const { return distance(alice, willie); }
  double jam_cap(int slot) const { return jam_power_cap.at(slot - 1); }

  /// Channel/objective constants for a UAV position in slot n (1-based).
  SlotCoefficients slot_coeffs(const Vec2& uav_pos, int slot) const;
};

/// Per-slot constants derived from a UAV position. Pure values; a slot index
/// only enters through the jamming cap.
struct SlotCoefficients {
  double dist2_bob = 0.0;     // ||q_u - bob||^2 + altitude^2 [m^2]
  double dist2_willie = 0.0;  // ||q_u - willie||^2 + altitude^2 [m^2]
  double jam_cap = 0.0;       // UAV power ceiling for the slot [W]
  double gamma = 0.0;         // max jamming power seen by Willie [W]
  double phi = 0.0;           // mean ground gain Alice->Willie
  double gain_bob = 0.0;      // mean ground gain Alice->Bob
  double tau = 0.0;           // covertness scale: dist2_willie / (cap * d_aw^alpha)
  double eta = 0.0;           // -ln(1-outage_cap) * d_ab^-alpha
  double psi = 0.0;           // rate slope per watt of transmit power
  double kappa = 0.0;         // decoupled-objective weight

  /// Rate-loss coefficient of the trajectory objective; negative for p_a > 0.
  double psi_bar(double p_a) const { return -psi_bar_scale * p_a; }

  double psi_bar_scale = 0.0;  // -ln(1-outage_cap) * mean gain Alice->Bob
};

/// Discrete flight plan: n_slots + 1 waypoints, slot n occupies waypoints[n].
struct Trajectory {
  std::vector<Vec2> waypoints;

  int n_segments() const { return static_cast<int>(waypoints.size()) - 1; }
  /// Endpoint and per-slot speed constraints (1e-9 relative slack); throws.
  void validate(const Scenario& s) const;
};

/// Transmit power per slot plus the covertness gap actually achieved.
struct PowerSchedule {
  std::vector<double> p_a;  // [W], size n_slots
  std::vector<double> gap;  // covertness gap per slot, size n_slots
};

/// Line-of-sight channel power gain from the UAV to a ground node.
double uav_gain(const Vec2& uav_pos, const Vec2& ground, double altitude,
                double beta0);

/// Exponent of the outage expression for a given jamming power draw.
double outage_exponent(double p_a, double p_u, double rate,
                       const SlotCoefficients& c, const Scenario& s);

/// P(channel capacity <= rate) under Rayleigh fading for a fixed jamming
/// power. Rejects p_a <= 0.
double outage_probability(double p_a, double p_u, double rate,
                          const SlotCoefficients& c, const Scenario& s);

/// Largest rate whose outage stays within the cap for every jamming power up
/// to the slot ceiling: log2(1 + psi * p_a).
double rate_bound(double p_a, const SlotCoefficients& c);

/// Mean of the per-slot rate bounds along a plan. Throws std::domain_error if
/// any slot violates the covertness budget by more than 1e-6.
double average_covert_rate(const Trajectory& traj, const PowerSchedule& power,
                           const Scenario& s);

}  // namespace covertplan
