// End-to-end scenario runs: registry contents, report emission, and the
// degenerate-parameter branches that change which checks appear.
#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <vector>

#include "prequant/scenarios.hpp"

using namespace prequant;

namespace {

std::filesystem::path scratch_dir(const std::string& leaf) {
  const auto dir = std::filesystem::temp_directory_path() / "prequant-scenarios" / leaf;
  std::filesystem::remove_all(dir);
  return dir;
}

Report run_into_scratch(ScenarioConfig cfg, const std::string& leaf) {
  cfg.out_dir = scratch_dir(leaf).string();
  return run_scenario(std::move(cfg));
}

bool has_check(const Report& rep, const std::string& name) {
  for (const auto& c : rep.checks)
    if (c.name == name) return true;
  return false;
}

}  // namespace

TEST_CASE("the registry lists every scenario in sorted order", "[scenarios]") {
  const std::vector<std::string> expected = {
      "bs-independence", "bs-sphere",     "darboux-local", "gauge-necessity",
      "moser-sphere",    "riemann-roch",  "torus-periods", "weinstein-rotation"};
  REQUIRE(scenario_names() == expected);
}

TEST_CASE("unknown scenarios are rejected with a hint", "[scenarios]") {
  ScenarioConfig cfg;
  cfg.scenario = "moser-shpere";
  CHECK_THROWS_MATCHES(run_scenario(cfg), ConfigError,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("unknown scenario 'moser-shpere'") &&
                           Catch::Matchers::ContainsSubstring("list")));
}

TEST_CASE("torus period scenario passes and writes its artifacts", "[scenarios]") {
  ScenarioConfig cfg;
  cfg.scenario = "torus-periods";
  const Report rep = run_into_scratch(cfg, "torus-periods");
  CAPTURE(rep.to_json().dump(2));
  REQUIRE(rep.pass());
  REQUIRE(has_check(rep, "theta1_period"));
  REQUIRE(has_check(rep, "h1_obstruction_raised"));
  REQUIRE(has_check(rep, "circle_map_pullback_c1"));
  REQUIRE(rep.params.at("c") == 0.3);  // scenario default recorded in the report
  const auto dir = std::filesystem::temp_directory_path() / "prequant-scenarios" / "torus-periods";
  REQUIRE(std::filesystem::exists(dir / "torus-periods.report.json"));
  REQUIRE(rep.spectra.size() == 1);
  int csvs = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().string().ends_with(".spectrum.csv")) ++csvs;
  REQUIRE(csvs == 1);
}

TEST_CASE("gauge necessity scenario passes", "[scenarios]") {
  ScenarioConfig cfg;
  cfg.scenario = "gauge-necessity";
  const Report rep = run_into_scratch(cfg, "gauge-necessity");
  CAPTURE(rep.to_json().dump(2));
  REQUIRE(rep.pass());
  REQUIRE(has_check(rep, "gauge_equation"));
  REQUIRE(has_check(rep, "holonomy_gauge_invariance"));
}

TEST_CASE("sphere spectrum scenario reports the closed-form levels", "[scenarios]") {
  ScenarioConfig cfg;
  cfg.scenario = "bs-sphere";
  const Report rep = run_into_scratch(cfg, "bs-sphere");
  CAPTURE(rep.to_json().dump(2));
  REQUIRE(rep.pass());
  REQUIRE(rep.spectra.size() == 3);
  const BSSpectrum& two = rep.spectra[1];  // k = 2
  REQUIRE(two.regular.size() == 3);
  CHECK(two.regular[0].value == Catch::Approx(-0.5).margin(1e-6));
  CHECK(two.regular[1].value == Catch::Approx(0.0).margin(1e-6));
  CHECK(two.regular[2].value == Catch::Approx(0.5).margin(1e-6));
}

TEST_CASE("surface index scenario passes", "[scenarios]") {
  ScenarioConfig cfg;
  cfg.scenario = "riemann-roch";
  const Report rep = run_into_scratch(cfg, "riemann-roch");
  CAPTURE(rep.to_json().dump(2));
  REQUIRE(rep.pass());
  REQUIRE(has_check(rep, "index_equals_level_count_k3"));
  REQUIRE(has_check(rep, "non_integral_class_rejected"));
}

TEST_CASE("floor-deep residuals trade the ratio check for an absolute one", "[scenarios]") {
  ScenarioConfig cfg;
  cfg.scenario = "moser-sphere";
  cfg.params["epsilon"] = 3e-7;  // truncation far below the rounding floor
  cfg.params["steps"] = 40;
  const Report rep = run_into_scratch(cfg, "moser-floor");
  CAPTURE(rep.to_json().dump(2));
  REQUIRE(rep.pass());
  REQUIRE(has_check(rep, "residual_below_measurement_floor"));
  REQUIRE_FALSE(has_check(rep, "doubling_steps_shrinks_residual_4x"));
  REQUIRE_FALSE(has_check(rep, "identity_regime_residual"));
}

TEST_CASE("degenerate deformation collapses to the identity regime", "[scenarios]") {
  ScenarioConfig cfg;
  cfg.scenario = "moser-sphere";
  cfg.params["epsilon"] = 0.0;
  cfg.params["steps"] = 40;  // the flow is the identity; no need for fine stepping
  const Report rep = run_into_scratch(cfg, "moser-identity");
  CAPTURE(rep.to_json().dump(2));
  REQUIRE(rep.pass());
  REQUIRE(has_check(rep, "identity_regime_residual"));
  REQUIRE_FALSE(has_check(rep, "doubling_steps_shrinks_residual_4x"));
}
