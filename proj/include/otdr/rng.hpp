#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace otdr {

// splitmix64 finalizer over (master, stream). Worker w of a Monte Carlo run
// draws from mix_seed(seed, w), so streams are decorrelated and the whole
// run is reproducible for a fixed (seed, workers) pair.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream);

// mt19937_64 plus hand-rolled uniform and Box-Muller transforms. The
// standard pins the engine's output but not the library distributions, so
// the transforms live here to keep streams bit-stable.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  // 53-bit uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal; generates pairs and caches the second.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace otdr
