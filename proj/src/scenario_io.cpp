#include "covertplan/scenario_io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace covertplan {

namespace {

struct RawEntry {
  std::string value;
  int line = 0;
};

[[noreturn]] void fail(const std::string& name, int line, const std::string& msg) {
  throw ScenarioFileError(name + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& name, int line, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || !std::isfinite(v))
    fail(name, line, "expected a number, got '" + text + "'");
  return v;
}

Vec2 parse_vec2(const std::string& name, int line, const std::string& text) {
  std::istringstream ss(text);
  std::string a, b, extra;
  ss >> a >> b;
  if (ss >> extra || a.empty() || b.empty())
    fail(name, line, "expected two numbers 'x y', got '" + text + "'");
  return {parse_number(name, line, a), parse_number(name, line, b)};
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

const char* const kKnownKeys[] = {
    "alice_m",     "bob_m",       "willie_m",   "uav_start_m", "uav_end_m",
    "altitude_m",  "v_max_mps",   "slot_s",     "T_s",         "n_slots",
    "beta0_dB",    "beta0_lin",   "noise_b_dBm", "noise_b_W",
    "noise_w_dBm", "noise_w_W",   "rho_b",      "epsilon",     "alpha",
    "p_hat_u_W",   "p_hat_u_dBm", "p_a_max_W",
};

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& name) {
  std::map<std::string, RawEntry> entries;
  std::string line_text;
  int line_no = 0;
  while (std::getline(in, line_text)) {
    ++line_no;
    const auto hash = line_text.find('#');
    if (hash != std::string::npos) line_text.erase(hash);
    const std::string line = trim(line_text);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(name, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(name, line_no, "missing key before '='");
    if (value.empty()) fail(name, line_no, "missing value for key '" + key + "'");
    bool known = false;
    for (const char* k : kKnownKeys) known = known || key == k;
    if (!known) fail(name, line_no, "unknown key '" + key + "'");
    if (entries.count(key))
      fail(name, line_no, "duplicate key '" + key + "' (first at line " +
                              std::to_string(entries[key].line) + ")");
    entries[key] = {value, line_no};
  }

  const auto take = [&](const std::string& key) -> const RawEntry* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  const auto require_scalar = [&](const std::string& key) {
    const RawEntry* e = take(key);
    if (!e) throw ScenarioFileError(name + ": missing required key '" + key + "'");
    return parse_number(name, e->line, e->value);
  };
  const auto require_vec2 = [&](const std::string& key) {
    const RawEntry* e = take(key);
    if (!e) throw ScenarioFileError(name + ": missing required key '" + key + "'");
    return parse_vec2(name, e->line, e->value);
  };
  // exactly one spelling of a quantity; returns the converted value
  const auto one_of = [&](const std::string& key_a, const std::string& key_b,
                          auto conv_a, auto conv_b, bool required,
                          double fallback) {
    const RawEntry* a = take(key_a);
    const RawEntry* b = take(key_b);
    if (a && b)
      fail(name, b->line, "give either '" + key_a + "' or '" + key_b + "', not both");
    if (a) return conv_a(parse_number(name, a->line, a->value));
    if (b) return conv_b(parse_number(name, b->line, b->value));
    if (required)
      throw ScenarioFileError(name + ": missing required key '" + key_a +
                              "' (or '" + key_b + "')");
    return fallback;
  };
  const auto identity = [](double v) { return v; };

  Scenario s;
  s.alice = require_vec2("alice_m");
  s.bob = require_vec2("bob_m");
  s.willie = require_vec2("willie_m");
  s.uav_start = require_vec2("uav_start_m");
  s.uav_end = require_vec2("uav_end_m");
  s.altitude = require_scalar("altitude_m");
  s.v_max = require_scalar("v_max_mps");
  s.slot_duration = require_scalar("slot_s");
  s.beta0 = one_of("beta0_dB", "beta0_lin", db_to_linear, identity, true, 0.0);
  s.noise_bob = one_of("noise_b_dBm", "noise_b_W", dbm_to_watt, identity, true, 0.0);
  s.noise_willie = one_of("noise_w_dBm", "noise_w_W", dbm_to_watt, identity, true, 0.0);
  s.outage_cap = require_scalar("rho_b");
  s.covertness_eps = require_scalar("epsilon");
  if (const RawEntry* e = take("alpha"))
    s.alpha = parse_number(name, e->line, e->value);

  // slot count: n_slots directly, or derived from the flight period
  const RawEntry* t_entry = take("T_s");
  const RawEntry* n_entry = take("n_slots");
  if (!t_entry && !n_entry)
    throw ScenarioFileError(name + ": missing required key 'T_s' (or 'n_slots')");
  long n_from_t = -1;
  if (t_entry) {
    const double period = parse_number(name, t_entry->line, t_entry->value);
    if (!(s.slot_duration > 0.0))
      fail(name, t_entry->line, "slot_s must be positive to derive n_slots");
    const double ratio = period / s.slot_duration;
    n_from_t = std::lround(ratio);
    if (std::abs(ratio - static_cast<double>(n_from_t)) > 1e-9)
      fail(name, t_entry->line,
           "T_s must be an integer multiple of slot_s (got ratio " +
               std::to_string(ratio) + ")");
  }
  if (n_entry) {
    const double n_raw = parse_number(name, n_entry->line, n_entry->value);
    const long n = std::lround(n_raw);
    if (std::abs(n_raw - static_cast<double>(n)) > 1e-9 || n < 1)
      fail(name, n_entry->line, "n_slots must be a positive integer");
    if (t_entry && n != n_from_t)
      fail(name, n_entry->line, "n_slots disagrees with T_s / slot_s");
    s.n_slots = static_cast<int>(n);
  } else {
    s.n_slots = static_cast<int>(n_from_t);
  }

  const double jam_cap = one_of("p_hat_u_W", "p_hat_u_dBm", identity,
                                dbm_to_watt, false, 0.01);
  s.jam_power_cap.assign(s.n_slots, jam_cap);
  if (const RawEntry* e = take("p_a_max_W"))
    s.tx_power_cap = parse_number(name, e->line, e->value);

  try {
    s.validate();
  } catch (const std::invalid_argument& err) {
    throw ScenarioFileError(name + ": " + err.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ScenarioFileError(path.string() + ": cannot open scenario file");
  return parse_scenario(in, path.string());
}

}  // namespace covertplan
