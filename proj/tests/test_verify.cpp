#include "otdr/verify.hpp"

#include <doctest.h>

#include <algorithm>
#include <string>

using namespace otdr;

namespace {

ScenarioConfig small_scenario() {
  ScenarioConfig config;
  config.fiber = FiberSpec::uniform(6, 0.95, 0.5, 2.0);
  config.attacks = {AttackSpec{3, 0.4, 0.5}};
  config.numerics.xi_grid = 8192;
  config.numerics.quadrature_nodes = 1024;
  config.numerics.dense_n_limit = 256;
  config.numerics.n_list = {16, 32, 64};
  config.mc.samples = 30000;
  config.mc.seed = 11;
  config.mc.workers = 2;
  return config;
}

}  // namespace

TEST_CASE("verify suite passes on a healthy scenario") {
  const std::vector<VerifyCheck> checks = run_verify_suite(small_scenario());
  for (const VerifyCheck& check : checks) {
    INFO(check.name, ": observed ", check.observed, " bound ", check.bound);
    CHECK(check.passed);
  }
  CHECK(all_passed(checks));

  for (const char* name :
       {"config_round_trip", "lemma2_ratio", "energy_scaling", "exponent_ordering",
        "szego_monotone_approach", "determinant_vs_mc", "mc_reproducibility",
        "helstrom_povm_exponent", "povm_exponent_vs_f0"}) {
    CHECK(std::any_of(checks.begin(), checks.end(),
                      [name](const VerifyCheck& c) { return c.name == name; }));
  }
}

TEST_CASE("verify needs an attack to test against") {
  ScenarioConfig config = small_scenario();
  config.attacks.clear();
  CHECK_THROWS_AS(run_verify_suite(config), std::invalid_argument);
}

TEST_CASE("verify suite passes on a null-attack scenario") {
  ScenarioConfig config = small_scenario();
  config.attacks = {AttackSpec{3, config.fiber.tau[2], config.fiber.theta[2]}};
  config.mc.samples = 20000;
  const std::vector<VerifyCheck> checks = run_verify_suite(config);
  for (const VerifyCheck& check : checks) {
    INFO(check.name, ": observed ", check.observed, " bound ", check.bound);
    CHECK(check.passed);
  }
}
