#pragma once

#include "otdr/fiber_model.hpp"
#include "otdr/spectral.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace otdr {

struct MCOptions {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  int workers = 1;

  bool operator==(const MCOptions&) const = default;
};

// A fully validated scenario: fiber, the explicit attack list (grids already
// expanded), numerics, Monte Carlo controls and the output directory.
struct ScenarioConfig {
  FiberSpec fiber;
  std::vector<AttackSpec> attacks;
  NumericsOptions numerics;
  MCOptions mc;
  std::string output_dir = "out";

  bool operator==(const ScenarioConfig&) const = default;
};

// Schema or constraint violation, carrying the path of the offending field
// (e.g. "attacks[0].tau").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Parses the JSON scenario text. Scalar tau/theta expand to length-L lists,
// attack entries may carry value lists that expand to their cross product,
// unknown keys are rejected, and every constraint is checked with a
// field-precise diagnostic.
ScenarioConfig parse_config(const std::string& text);

ScenarioConfig load_config(const std::filesystem::path& file);

// Normalized JSON emission; parse(emit(config)) == config.
std::string emit_config(const ScenarioConfig& config);

}  // namespace otdr
