#include "covertplan/detection.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace covertplan {

double covert_gap(double x) {
  if (x < 0.0) throw std::invalid_argument("covert_gap: x must be >= 0");
  if (x < 1e-8) return x;  // series: e^(-1/x) underflows, 1 - e^(-1/x) == 1
  return -x * std::expm1(-1.0 / x);
}

double false_alarm(double threshold, const SlotCoefficients& c,
                   const Scenario& s) {
  if (threshold < 0.0)
    throw std::invalid_argument("false_alarm: threshold must be >= 0");
  const double t = threshold - s.noise_willie;
  if (t <= 0.0) return 1.0;
  if (t <= c.gamma) return 1.0 - t / c.gamma;
  return 0.0;
}

double miss_detection(double threshold, double p_a, const SlotCoefficients& c,
                      const Scenario& s) {
  if (threshold < 0.0)
    throw std::invalid_argument("miss_detection: threshold must be >= 0");
  if (!(p_a > 0.0))
    throw std::invalid_argument("miss_detection: p_a must be positive");
  const double t = threshold - s.noise_willie;
  if (t <= 0.0) return 0.0;
  const double scale = c.phi * p_a;  // mean received power of the covert signal
  if (c.gamma == 0.0) return -std::expm1(-t / scale);
  if (t <= c.gamma)
    return t / c.gamma + (scale / c.gamma) * std::expm1(-t / scale);
  return 1.0 - (scale / c.gamma) *
                   (std::exp((c.gamma - t) / scale) - std::exp(-t / scale));
}

double min_error_rate(double p_a, const SlotCoefficients& c) {
  if (p_a < 0.0)
    throw std::invalid_argument("min_error_rate: p_a must be >= 0");
  if (!(c.gamma > 0.0))
    throw std::invalid_argument("min_error_rate: inactive jammer (gamma == 0)");
  if (p_a == 0.0) return 1.0;  // nothing to detect
  const double x = c.phi * p_a / c.gamma;
  return 1.0 + x * std::expm1(-1.0 / x);
}

double covertness_gap(double p_a, const SlotCoefficients& c) {
  if (p_a < 0.0)
    throw std::invalid_argument("covertness_gap: p_a must be >= 0");
  if (p_a == 0.0) return 0.0;  // tau is infinite when the jammer is off
  return covert_gap(p_a * c.tau);
}

DetectionReport detection_report(const Trajectory& traj,
                                 const PowerSchedule& power,
                                 const Scenario& s) {
  DetectionReport report;
  report.slots.reserve(s.n_slots);
  for (int n = 1; n <= s.n_slots; ++n) {
    const SlotCoefficients c = s.slot_coeffs(traj.waypoints[n], n);
    SlotDetection d;
    d.optimal_threshold = c.gamma + s.noise_willie;
    const double p = power.p_a[n - 1];
    if (p > 0.0) {
      d.false_alarm = false_alarm(d.optimal_threshold, c, s);
      d.miss_detection = miss_detection(d.optimal_threshold, p, c, s);
      d.min_error = min_error_rate(p, c);
      d.covertness_gap = covertness_gap(p, c);
    } else {
      d.false_alarm = 0.0;
      d.miss_detection = 1.0;
      d.min_error = 1.0;
      d.covertness_gap = 0.0;
    }
    report.slots.push_back(d);
  }
  return report;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RadiometerSim simulate_radiometer(const Scenario& s, const Vec2& uav_pos,
                                  int slot, double p_a, long channel_uses,
                                  long samples, std::uint64_t seed,
                                  int grid_points) {
  if (samples < 1)
    throw std::invalid_argument("simulate_radiometer: samples must be >= 1");
  if (grid_points < 2)
    throw std::invalid_argument("simulate_radiometer: grid needs >= 2 points");
  if (p_a < 0.0)
    throw std::invalid_argument("simulate_radiometer: p_a must be >= 0");
  const SlotCoefficients c = s.slot_coeffs(uav_pos, slot);
  const double gain_uw = s.beta0 / c.dist2_willie;
  const double cap = c.jam_cap;
  const double noise = s.noise_willie;

  RadiometerSim sim;
  sim.seed = seed;
  sim.channel_uses = channel_uses > 0 ? channel_uses : 0;
  sim.samples = samples;
  sim.threshold.resize(grid_points);
  // [noise, noise + 3*gamma] covers all three branches of the error curves
  const double span = c.gamma > 0.0 ? 3.0 * c.gamma : 3.0 * noise;
  for (int i = 0; i < grid_points; ++i)
    sim.threshold[i] = noise + span * i / (grid_points - 1);

  // Counts per grid cell; merged deterministically across fixed substreams.
  std::vector<std::int64_t> bins_h0(grid_points + 1, 0);
  std::vector<std::int64_t> bins_h1(grid_points + 1, 0);

  const int n_chunks = 64;
  for (int chunk = 0; chunk < n_chunks; ++chunk) {
    const long lo = samples * static_cast<long>(chunk) / n_chunks;
    const long hi = samples * static_cast<long>(chunk + 1) / n_chunks;
    std::mt19937_64 rng(splitmix64(seed ^ (0xA0761D6478BD642FULL * (chunk + 1))));
    std::uniform_real_distribution<double> jam(0.0, cap);
    std::exponential_distribution<double> fade(1.0);
    std::gamma_distribution<double> averaging(
        channel_uses > 0 ? static_cast<double>(channel_uses) : 1.0, 1.0);
    for (long i = lo; i < hi; ++i) {
      const double jam_power = cap > 0.0 ? jam(rng) : 0.0;
      double mean_h0 = noise + jam_power * gain_uw;
      double mean_h1 = mean_h0 + c.phi * p_a * fade(rng);
      double stat_h0 = mean_h0, stat_h1 = mean_h1;
      if (channel_uses > 0) {
        stat_h0 = mean_h0 * averaging(rng) / channel_uses;
        stat_h1 = mean_h1 * averaging(rng) / channel_uses;
      }
      const auto cell = [&](double v) {
        return std::upper_bound(sim.threshold.begin(), sim.threshold.end(), v) -
               sim.threshold.begin();
      };
      ++bins_h0[cell(stat_h0)];
      ++bins_h1[cell(stat_h1)];
    }
  }

  // bins[j] counts statistics in (threshold[j-1], threshold[j]]; a sample in
  // cell j exceeds thresholds 0..j-1 and lies below thresholds j..end.
  sim.false_alarm.resize(grid_points);
  sim.miss_detection.resize(grid_points);
  std::int64_t above_h0 = 0;
  for (int j = grid_points; j >= 1; --j) {
    above_h0 += bins_h0[j];
    sim.false_alarm[j - 1] = static_cast<double>(above_h0) / samples;
  }
  std::int64_t below_h1 = 0;
  for (int j = 0; j < grid_points; ++j) {
    below_h1 += bins_h1[j];
    sim.miss_detection[j] = static_cast<double>(below_h1) / samples;
  }

  sim.min_total = 2.0;
  for (int j = 0; j < grid_points; ++j) {
    const double total = sim.false_alarm[j] + sim.miss_detection[j];
    if (total < sim.min_total) {
      sim.min_total = total;
      sim.min_index = static_cast<std::size_t>(j);
    }
  }
  sim.min_threshold = sim.threshold[sim.min_index];
  return sim;
}

}  // namespace covertplan
