#pragma once

#include <cstdint>
#include <vector>

#include "covertplan/model.hpp"

namespace covertplan {

/// Closed-form radiometer analysis for one slot.
struct SlotDetection {
  double false_alarm = 0.0;
  double miss_detection = 0.0;
  double min_error = 1.0;          // best total error over all thresholds
  double optimal_threshold = 0.0;  // gamma + noise_willie
  double covertness_gap = 0.0;     // 1 - min_error
};

struct DetectionReport {
  std::vector<SlotDetection> slots;  // size n_slots
};

/// Warden advantage as a function of x = p_a * tau: x * (1 - e^(-1/x)).
/// Strictly increasing, 0 at x = 0, -> 1 as x -> inf.
double covert_gap(double x);

/// False alarm rate of the radiometer at a threshold (m -> inf statistic).
double false_alarm(double threshold, const SlotCoefficients& c,
                   const Scenario& s);

/// Miss detection rate at a threshold. Rejects p_a <= 0.
double miss_detection(double threshold, double p_a, const SlotCoefficients& c,
                      const Scenario& s);

/// Minimum total detection error over all thresholds; attained at
/// threshold = gamma + noise_willie. Rejects gamma == 0 (inactive jammer).
double min_error_rate(double p_a, const SlotCoefficients& c);

/// Covertness gap of a transmit power: covert_gap(p_a * tau). The covertness
/// constraint holds iff this stays within the budget.
double covertness_gap(double p_a, const SlotCoefficients& c);

/// Closed-form per-slot detection records for a full plan, evaluated at the
/// optimal threshold.
DetectionReport detection_report(const Trajectory& traj,
                                 const PowerSchedule& power, const Scenario& s);

/// Empirical radiometer run: FA/MD over a threshold grid plus the empirical
/// minimum total error.
struct RadiometerSim {
  std::vector<double> threshold;       // grid [W]
  std::vector<double> false_alarm;     // per threshold
  std::vector<double> miss_detection;  // per threshold
  double min_total = 2.0;
  double min_threshold = 0.0;
  std::size_t min_index = 0;
  std::uint64_t seed = 0;
  long channel_uses = 0;  // 0 = infinite-averaging statistic
  long samples = 0;
};

/// Monte Carlo draw of the warden's test statistic under both hypotheses.
/// Jamming power is uniform on [0, cap]; the ground fade is unit-mean
/// exponential; finite channel_uses m adds the chi-squared(2m)/(2m)
/// averaging noise, channel_uses <= 0 uses the infinite-m limit. The grid
/// spans [noise, noise + 3*gamma]. Deterministic for a fixed seed, with
/// fixed per-chunk substreams.
RadiometerSim simulate_radiometer(const Scenario& s, const Vec2& uav_pos,
                                  int slot, double p_a, long channel_uses,
                                  long samples, std::uint64_t seed,
                                  int grid_points = 2000);

}  // namespace covertplan
