#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

#include "covertplan/model.hpp"

namespace covertplan::testing {

/// Reference scenario used across the suites (flight period in seconds).
inline Scenario sec5_scenario(double period_s = 350.0, double eps = 0.1,
                              double jam_cap = 0.01) {
  Scenario s;
  s.alice = {0.0, 0.0};
  s.bob = {200.0, 0.0};
  s.willie = {200.0, 200.0};
  s.uav_start = {-100.0, 100.0};
  s.uav_end = {500.0, 100.0};
  s.altitude = 100.0;
  s.v_max = 3.0;
  s.slot_duration = 0.5;
  s.n_slots = static_cast<int>(std::lround(period_s / s.slot_duration));
  s.beta0 = 1e-6;           // -60 dB
  s.alpha = 3.0;
  s.noise_bob = 1e-14;      // beta0 / sigma^2 = 80 dB
  s.noise_willie = 1e-14;
  s.outage_cap = 0.1;
  s.covertness_eps = eps;
  s.jam_power_cap.assign(s.n_slots, jam_cap);
  return s;
}

inline std::filesystem::path repo_root() {
  if (const char* env = std::getenv("COVERTPLAN_SOURCE_DIR")) return env;
  return std::filesystem::current_path();
}

inline std::filesystem::path scenario_file() {
  return repo_root() / "scenarios" / "paper_sec5.scn";
}

inline std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() /
             ("covertplan_test_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vec2 uniform_point(std::mt19937_64& rng, double lo, double hi) {
  return {uniform(rng, lo, hi), uniform(rng, lo, hi)};
}

}  // namespace covertplan::testing
