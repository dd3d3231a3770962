#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "covertplan/harness.hpp"
#include "covertplan/scenario_io.hpp"
#include "helpers.hpp"

using namespace covertplan;
namespace ct = covertplan::testing;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scenario parse_text(const std::string& text) {
  std::istringstream ss(text);
  return parse_scenario(ss, "inline");
}

const char* kSmallScn = R"(alice_m = 0 0
bob_m = 20 0
willie_m = 20 20
uav_start_m = -10 10
uav_end_m = 50 10
altitude_m = 10
v_max_mps = 3
slot_s = 0.5
T_s = 35
beta0_dB = -60
noise_b_dBm = -110
noise_w_dBm = -110
rho_b = 0.1
epsilon = 0.1
p_hat_u_W = 0.01
)";

}  // namespace

TEST_CASE("bundled reference scenario parses to the expected values") {
  const Scenario s = load_scenario(ct::scenario_file());
  CHECK(s.uav_start.x == -100.0);
  CHECK(s.uav_start.y == 100.0);
  CHECK(s.uav_end.x == 500.0);
  CHECK(s.bob.x == 200.0);
  CHECK(s.willie.y == 200.0);
  CHECK(s.altitude == 100.0);
  CHECK(s.v_max == 3.0);
  CHECK(s.slot_duration == 0.5);
  CHECK(s.n_slots == 700);
  CHECK(s.beta0 == doctest::Approx(1e-6).epsilon(1e-12));
  CHECK(s.noise_bob == doctest::Approx(1e-14).epsilon(1e-12));
  CHECK(s.noise_willie == doctest::Approx(1e-14).epsilon(1e-12));
  CHECK(s.outage_cap == 0.1);
  CHECK(s.covertness_eps == 0.1);
  CHECK(s.alpha == 3.0);
  REQUIRE(s.jam_power_cap.size() == 700);
  CHECK(s.jam_power_cap.front() == 0.01);
  CHECK_FALSE(s.tx_power_cap.has_value());
}

TEST_CASE("scenario parsing errors are precise") {
  // missing key names the key
  {
    std::string text = kSmallScn;
    const auto pos = text.find("rho_b");
    text.erase(pos, text.find('\n', pos) - pos + 1);
    CHECK_THROWS_WITH_AS(parse_text(text),
                         doctest::Contains("missing required key 'rho_b'"),
                         ScenarioFileError);
  }
  // period must be a whole number of slots
  {
    std::string text = kSmallScn;
    text.replace(text.find("T_s = 35"), 8, "T_s = 35.2");
    CHECK_THROWS_WITH_AS(parse_text(text), doctest::Contains("multiple"),
                         ScenarioFileError);
  }
  // unknown key is rejected with its line number
  {
    std::string text = kSmallScn;
    text += "speed_of_light = 3e8\n";
    CHECK_THROWS_WITH_AS(parse_text(text),
                         doctest::Contains("unknown key 'speed_of_light'"),
                         ScenarioFileError);
  }
  // duplicates are rejected
  {
    std::string text = kSmallScn;
    text += "rho_b = 0.2\n";
    CHECK_THROWS_WITH_AS(parse_text(text), doctest::Contains("duplicate"),
                         ScenarioFileError);
  }
  // n_slots may replace T_s but must agree when both are present
  {
    std::string text = kSmallScn;
    text += "n_slots = 71\n";
    CHECK_THROWS_WITH_AS(parse_text(text), doctest::Contains("disagrees"),
                         ScenarioFileError);
    std::string ok = kSmallScn;
    ok += "n_slots = 70\n";
    CHECK(parse_text(ok).n_slots == 70);
  }
  // dBm and W spellings are exclusive
  {
    std::string text = kSmallScn;
    text += "noise_b_W = 1e-14\n";
    CHECK_THROWS_WITH_AS(parse_text(text), doctest::Contains("not both"),
                         ScenarioFileError);
  }
}

TEST_CASE("plan outputs: schema and re-run determinism") {
  const Scenario s = parse_text(kSmallScn);
  const auto dir_a = ct::temp_dir("runa");
  const auto dir_b = ct::temp_dir("runb");
  for (const std::string method : {"gm", "ci"}) {
    const PlanResult first = run_plan(s, method);
    const PlanResult second = run_plan(s, method);
    const RunPaths pa = write_run_outputs(s, first, dir_a, 7);
    const RunPaths pb = write_run_outputs(s, second, dir_b, 7);
    const std::string csv_a = slurp(pa.plan_csv);
    CHECK(csv_a == slurp(pb.plan_csv));
    CHECK(csv_a.rfind("# covertplan plan-csv v1\n", 0) == 0);
    CHECK(csv_a.find("n,x,y,p_a_W,R_b_bps_hz,xi_star,covertness_gap") !=
          std::string::npos);
    if (method == "ci") {
      CHECK(slurp(pa.trace_csv) == slurp(pb.trace_csv));
      CHECK(slurp(pa.trace_csv).find("iter,objective,max_constraint_violation") !=
            std::string::npos);
    }
    // one header comment, one column row, then start point + one row per slot
    int lines = 0;
    for (char c : csv_a) lines += c == '\n';
    CHECK(lines == 2 + 1 + s.n_slots);
  }
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("radiometer csv carries the grid and the summary row") {
  const Scenario s = parse_text(kSmallScn);
  const auto dir = ct::temp_dir("det");
  const auto sim = simulate_radiometer(s, {20.0, 25.0}, 1, 0.05, 0, 20000, 11);
  const auto path = write_detector_csv(sim, dir);
  const std::string text = slurp(path);
  CHECK(text.rfind("# covertplan detector-csv v1\n", 0) == 0);
  CHECK(text.find("kind,threshold_W,false_alarm,miss_detection,total") !=
        std::string::npos);
  CHECK(text.find("\nmin,") != std::string::npos);
  const auto sim2 = simulate_radiometer(s, {20.0, 25.0}, 1, 0.05, 0, 20000, 11);
  const auto dir2 = ct::temp_dir("det2");
  CHECK(slurp(write_detector_csv(sim2, dir2)) == text);
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST_CASE("sweep: validation, epsilon monotonicity, pairwise delta") {
  const Scenario s = parse_text(kSmallScn);

  SweepSpec empty_methods;
  empty_methods.parameter = "epsilon";
  empty_methods.values = {0.1};
  CHECK_THROWS_AS(empty_methods.validate(), std::invalid_argument);

  SweepSpec bad_param;
  bad_param.parameter = "wavelength";
  bad_param.values = {1.0};
  bad_param.methods = {"gm"};
  CHECK_THROWS_AS(bad_param.validate(), std::invalid_argument);

  SweepSpec spec;
  spec.parameter = "epsilon";
  spec.values = {0.05, 0.10, 0.15};
  spec.methods = {"gm", "ci"};
  spec.workers = 2;
  const auto dir = ct::temp_dir("sweep");
  const SweepResult result = run_sweep(s, spec, dir);
  REQUIRE(result.rows.size() == 6);

  double prev = -1.0;
  for (const auto& row : result.rows) {
    if (row.method != "gm") continue;
    REQUIRE(row.avg_rate.has_value());
    CHECK(*row.avg_rate >= prev - 1e-12);
    prev = *row.avg_rate;
    REQUIRE(row.gm_minus_ci.has_value());  // both methods ran each value
  }
  const std::string csv = slurp(result.csv_path);
  CHECK(csv.rfind("# covertplan sweep-csv v1\n", 0) == 0);
  CHECK(csv.find("param,value,method,avg_rate,runtime_s,gm_minus_ci") !=
        std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("flight-period sweep keeps the geometric method ahead") {
  const Scenario s = parse_text(kSmallScn);
  SweepSpec spec;
  spec.parameter = "T";
  spec.values = {25.0, 30.0, 35.0};
  spec.methods = {"gm", "ci"};
  const auto dir = ct::temp_dir("sweept");
  const SweepResult result = run_sweep(s, spec, dir);
  for (const auto& row : result.rows) {
    REQUIRE(row.gm_minus_ci.has_value());
    CHECK(*row.gm_minus_ci >= 0.0);
  }
  fs::remove_all(dir);
}

TEST_CASE("sweep records per-run failures and continues") {
  const Scenario s = parse_text(kSmallScn);
  SweepSpec spec;
  spec.parameter = "T";
  spec.values = {15.0, 35.0};  // 15 s cannot reach the end point
  spec.methods = {"gm"};
  const auto dir = ct::temp_dir("sweepfail");
  const SweepResult result = run_sweep(s, spec, dir);
  REQUIRE(result.rows.size() == 2);
  CHECK_FALSE(result.rows[0].avg_rate.has_value());
  CHECK(result.rows[0].error.find("unreachable") != std::string::npos);
  CHECK(result.rows[1].avg_rate.has_value());
  fs::remove_all(dir);
}

TEST_CASE("jam-ceiling sweep raises the rate monotonically") {
  const Scenario s = parse_text(kSmallScn);
  SweepSpec spec;
  spec.parameter = "p_hat_u";
  spec.values = {0.005, 0.01, 0.02};
  spec.methods = {"gm"};
  const auto dir = ct::temp_dir("sweepcap");
  const SweepResult result = run_sweep(s, spec, dir);
  double prev = -1.0;
  for (const auto& row : result.rows) {
    REQUIRE(row.avg_rate.has_value());
    CHECK(*row.avg_rate >= prev);
    prev = *row.avg_rate;
  }
  fs::remove_all(dir);
}

TEST_CASE("position sweeps move the warden") {
  const Scenario s = parse_text(kSmallScn);
  SweepSpec spec;
  spec.parameter = "q_w";
  spec.positions = {{20.0, 20.0}, {25.0, 15.0}};
  spec.methods = {"gm"};
  const auto dir = ct::temp_dir("sweeppos");
  const SweepResult result = run_sweep(s, spec, dir);
  REQUIRE(result.rows.size() == 2);
  for (const auto& row : result.rows) {
    CHECK(row.avg_rate.has_value());
    CHECK(row.value.find(':') != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("bench: single point has no slope, multiple points fit one") {
  const Scenario s = parse_text(kSmallScn);
  const BenchResult single = bench_scaling(s, {40}, false, 1);
  REQUIRE(single.rows.size() == 1);
  CHECK_FALSE(single.gm_traj_slope.has_value());

  const BenchResult pair = bench_scaling(s, {40, 80}, false, 2);
  REQUIRE(pair.rows.size() == 2);
  CHECK(pair.gm_traj_slope.has_value());
  CHECK_THROWS_AS(bench_scaling(s, {80, 40}, false, 1), std::invalid_argument);

  const auto dir = ct::temp_dir("bench");
  const auto csv = write_bench_outputs(pair, dir);
  CHECK(slurp(csv).rfind("# covertplan bench-csv v1\n", 0) == 0);
  fs::remove_all(dir);
}
