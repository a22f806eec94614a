#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "holevac/reports.hpp"

using namespace holevac;
using namespace holevac::reports;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig scratch_config(const std::string& name) {
  RunConfig c = default_config();
  c.output_dir = (fs::temp_directory_path() / ("holevac_test_" + name)).string();
  fs::remove_all(c.output_dir);
  return c;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

}  // namespace

TEST_CASE("config defaults and JSON round trip") {
  const RunConfig c = default_config();
  CHECK_NOTHROW(c.validate());
  CHECK(c.model().R == 300);
  CHECK(momentum(c.w, c.model()) == doctest::Approx(0.5));
  const RunConfig back = config_from_json(to_json(c));
  CHECK(to_json(back) == to_json(c));
  CHECK(c.tolerance("engine_vs_closed") == 0.02);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(config_from_json(json{{"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"m", -1.0}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"m", "heavy"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"format", "xml"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"tolerances", {{"made_up", 1.0}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"tolerances", {{"slater", -1.0}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"L", 10.0}, {"L_over_pi", 20}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::array()), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"k_w", 0.3}}), ConfigError);
  try {
    config_from_json(json{{"w", 10}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("k_w = 2πw/L < m") != std::string::npos);
  }
  // R defaults to p_R = 30 m
  CHECK(config_from_json(json{{"L_over_pi", 40}}).R == 600);
  CHECK(config_from_json(json{{"q", 0.0}, {"amplitude", 0.0}}).q == 0.0);
  CHECK_THROWS_AS(load_config("/nonexistent/holevac.json"), ConfigError);
}

TEST_CASE("spectrum report") {
  RunConfig c = scratch_config("spectrum");
  c.R = 2;
  c.w = 1;
  const CommandResult res = cmd_spectrum(c);
  REQUIRE(res.files.size() == 1);
  const std::string first = slurp(res.files[0]);
  const auto lines = data_lines(first);
  REQUIRE(lines.size() == 11);  // header + 10 rows
  CHECK(lines[0] == "lambda,r,p,E,eps");
  CHECK(lines[1].rfind("-1,-2,", 0) == 0);
  CHECK(lines[10].rfind("1,2,", 0) == 0);
  CHECK(first.rfind("# holevac config {", 0) == 0);
  CHECK(first.find('\r') == std::string::npos);
  cmd_spectrum(c);
  CHECK(slurp(res.files[0]) == first);

  RunConfig wide = scratch_config("spectrum_wide");
  wide.format = "json";
  const json doc = json::parse(slurp(cmd_spectrum(wide).files[0]));
  CHECK(doc["config"]["R"] == 300);
  bool found = false;
  for (const auto& row : doc["modes"]) {
    if (row["lambda"] == -1 && row["r"] == 5) {
      CHECK(row["E"].get<double>() == doctest::Approx(1.118034).epsilon(1e-6));
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("shift report: mirror rows and zero-charge oracle column") {
  RunConfig c = scratch_config("shift");
  c.oracle_q = 0.0;
  const CommandResult res = cmd_shift(c, {sea_mode(10), positive_mode(10), sea_mode(0)});
  CHECK(res.exit_code == ok);
  const auto rows = shift_rows(c, {sea_mode(10), positive_mode(10), sea_mode(0)});
  CHECK(rows[0].shift_closed == -rows[1].shift_closed);
  CHECK(rows[2].shift_closed == doctest::Approx(-8.82766).epsilon(5e-6));
  for (const auto& row : rows) {
    CHECK(row.shift_oracle == 0.0);
    CHECK(row.dev_engine <= 0.02);
  }
  CHECK_THROWS_AS(cmd_shift(c, {sea_mode(296)}), ConfigError);

  // a tight tolerance turns the same run into a breach that names the row
  c.tolerances["engine_vs_closed"] = 1e-6;
  const CommandResult tight = cmd_shift(c, {sea_mode(10)});
  CHECK(tight.exit_code == tolerance_breach);
  CHECK(tight.summary.find("-1:10 engine") != std::string::npos);
}

TEST_CASE("vacuum report") {
  RunConfig c = scratch_config("vacuum");
  const CommandResult res = cmd_vacuum(c);
  CHECK(res.exit_code == ok);
  REQUIRE(res.files.size() == 2);
  const json doc = json::parse(slurp(res.files[0]));
  CHECK(doc["limit"].get<double>() == doctest::Approx(-1.973921).epsilon(1e-6));
  CHECK(doc["integral_finite_B"].get<double>() == doctest::Approx(-1.973823).epsilon(1e-6));
  for (const char* key : {"discrete_partial_sum", "integral_finite_B", "integral_quadrature_B",
                          "hole_theory_total", "density_weighted_sum"}) {
    CAPTURE(key);
    CHECK(doc[key].get<double>() < 0.0);
  }
  CHECK(doc["exact_tail"].get<double>() <= doc["tail_bound"].get<double>());
  for (const auto& pt : doc["sum_ladder"]) CHECK(pt["monotone"] == true);
  const auto lines = data_lines(slurp(res.files[1]));
  CHECK(lines[0] == "kind,cutoff,value,relative_deviation,monotone");
}

TEST_CASE("slater check") {
  const RunConfig c = scratch_config("slater");
  const CommandResult res = cmd_slater_check(c);
  CHECK(res.exit_code == ok);
  const json doc = json::parse(slurp(res.files[0]));
  CHECK(doc["includes_k5_n3"] == true);
  CHECK(doc["fixtures"] == 100);
  CHECK(doc["seed"] == c.seed);
  CHECK(doc["max_deviation"].get<double>() <= 1e-12);
}

TEST_CASE("evolve with a single charge skips the fit") {
  RunConfig c = scratch_config("evolve");
  c.T = 200.0;
  const CommandResult res = cmd_evolve(c, sea_mode(0), {0.02});
  CHECK(res.exit_code == ok);
  const json doc = json::parse(slurp(res.files[0]));
  CHECK(doc["fit_status"] == "insufficient points");
  CHECK(doc["fitted_order"].is_null());
  CHECK(doc["shifts"].size() == 1);
  CHECK_THROWS_AS(cmd_evolve(c, sea_mode(0), {0.02, 0.04}), ConfigError);
}

TEST_CASE("verify: clean build passes, corrupted overlap fails only its suite") {
  RunConfig c = scratch_config("verify");
  const CommandResult res = cmd_verify(c);
  CHECK(res.exit_code == ok);
  const std::string first = slurp(res.files[0]);
  cmd_verify(c);
  CHECK(slurp(res.files[0]) == first);

  VerifyHooks mutated;
  mutated.overlap = [](EnergySign s, int r, int dir, int w, const ModelParams& p) {
    // drop the m^2 term from the numerator
    const double e = energy_magnitude(r, p), ee = energy_magnitude(r + dir * w, p);
    const double m = p.m;
    return spinor_overlap_sq(s, r, dir, w, p) - m * m / (2.0 * e * ee * p.L * p.L);
  };
  const auto suites = run_verify_suites(c, mutated);
  for (const auto& suite : suites) {
    CAPTURE(suite.name);
    if (suite.name == "spinor_sum") {
      CHECK_FALSE(suite.passed);
      CHECK(suite.counterexamples.size() == 10);
    } else {
      CHECK(suite.passed);
    }
  }
}
