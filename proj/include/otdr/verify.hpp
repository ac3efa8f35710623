#pragma once

#include "otdr/scenario.hpp"

#include <string>
#include <vector>

namespace otdr {

struct VerifyCheck {
  std::string name;
  bool passed = false;
  double observed = 0.0;
  double bound = 0.0;  // threshold the observation was held against
  std::string note;
};

// Runs every cross-module consistency check with the scenario's numerics:
// closed forms against quadrature, Toeplitz spectra against the symbol,
// determinants against Monte Carlo, and the exact exponent identities.
std::vector<VerifyCheck> run_verify_suite(const ScenarioConfig& config);

bool all_passed(const std::vector<VerifyCheck>& checks);

}  // namespace otdr
