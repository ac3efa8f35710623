#include "otdr/scenario.hpp"

#include <doctest.h>

#include <string>

using namespace otdr;

namespace {

const char* kMinimal = R"({
  "fiber": {"L": 2, "tau": 0.9, "theta": 0.5, "energy": 1},
  "attacks": [{"position": 1, "tau": 0.5, "theta": 0.5}]
})";

}  // namespace

TEST_CASE("minimal config expands scalars") {
  const ScenarioConfig config = parse_config(kMinimal);
  REQUIRE(config.fiber.blocks() == 2);
  CHECK(config.fiber.tau == std::vector<double>{0.9, 0.9});
  CHECK(config.fiber.theta == std::vector<double>{0.5, 0.5});
  CHECK(config.fiber.energy == 1.0);
  REQUIRE(config.attacks.size() == 1);
  CHECK(config.attacks[0] == AttackSpec{1, 0.5, 0.5});
  // defaults applied
  CHECK(config.numerics == NumericsOptions{});
  CHECK(config.mc == MCOptions{});
  CHECK(config.output_dir == "out");
}

TEST_CASE("attack grids expand to the cross product") {
  const std::string text = R"({
    "fiber": {"L": 3, "tau": [0.9, 0.8, 0.7], "theta": 0.5, "energy": 2.0},
    "attacks": [{"position": 2, "tau": [0.1, 0.4], "theta": [0.3, 0.6, 0.9]}]
  })";
  const ScenarioConfig config = parse_config(text);
  REQUIRE(config.attacks.size() == 6);
  CHECK(config.attacks.front() == AttackSpec{2, 0.1, 0.3});
  CHECK(config.attacks.back() == AttackSpec{2, 0.4, 0.9});
}

TEST_CASE("constraint violations carry field paths") {
  const auto path_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.path();
    }
    return std::string("no error");
  };

  CHECK(path_of(R"({"fiber": {"L": 2, "tau": 0.99, "theta": 0.5, "energy": 1},
                    "attacks": [{"position": 1, "tau": 0.999, "theta": 0.5}]})") ==
        "attacks[0].tau");
  CHECK(path_of(R"({"fiber": {"L": 2, "tau": 1.2, "theta": 0.5, "energy": 1}})") ==
        "fiber.tau[0]");
  CHECK(path_of(R"({"fiber": {"L": 2, "tau": [0.9, 0.9, 0.9], "theta": 0.5,
                    "energy": 1}})") == "fiber.tau");
  CHECK(path_of(R"({"fiber": {"L": 2, "tau": 0.9, "theta": 0.5, "energy": 1},
                    "attacks": [{"position": 5, "tau": 0.5, "theta": 0.5}]})") ==
        "attacks[0].position");
  CHECK(path_of(R"({"fiber": {"L": 2, "tau": 0.9, "theta": 0.5, "energy": 1},
                    "mc": {"samples": 0}})") == "mc.samples");
  CHECK(path_of(R"({"fiber": {"L": 2, "tau": 0.9, "theta": 0.5, "energy": 1},
                    "bogus": 1})") == "bogus");
  CHECK(path_of(R"({"fiber": {"L": 2, "tau": 0.9, "theta": 0.5, "energy": 1,
                    "typo": 3}})") == "fiber.typo");
  CHECK(path_of("{") == "");  // malformed JSON
}

TEST_CASE("round trip") {
  const char* text = R"({
    "fiber": {"L": 4, "tau": [0.9, 0.85, 0.8, 0.75], "theta": 0.25, "energy": 100.5},
    "attacks": [{"position": 3, "tau": [0.2, 0.5], "theta": 0.1}],
    "numerics": {"xi_grid": 8192, "quadrature_nodes": 1024, "dense_n_limit": 256,
                 "n_list": [10, 20]},
    "mc": {"samples": 5000, "seed": 987654321, "workers": 3},
    "output": "results"
  })";
  const ScenarioConfig config = parse_config(text);
  CHECK(parse_config(emit_config(config)) == config);
}

TEST_CASE("shipped default config matches the reference scenario") {
  const ScenarioConfig config =
      load_config(std::string(OTDR_SOURCE_DIR) + "/configs/default.json");
  CHECK(config.fiber.blocks() == 100);
  for (double t : config.fiber.tau) CHECK(t == 0.99);
  for (double t : config.fiber.theta) CHECK(t == 0.5);
  CHECK(config.fiber.energy == 1e7);
  REQUIRE(config.attacks.size() == 1);
  CHECK(config.attacks[0] == AttackSpec{50, 0.4, 0.5});
}
