#pragma once

#include "otdr/fiber_model.hpp"
#include "otdr/spectral.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace otdr {

// Gordon function (x+1)log2(x+1) - x log2 x, the capacity in bits of the
// lossy bosonic channel at mean photon number x.
double gordon(double mean_photons);

// g(eta E) for the fiber's total forward loss, bits per use.
double capacity_quantum(const FiberSpec& fiber);

// Best of the heterodyne and homodyne Shannon rates of the induced Gaussian
// channel: max(log2(1 + eta E), (1/2) log2(1 + 4 eta E)), bits per use.
double capacity_classical(const FiberSpec& fiber);

// Chernoff information of two normal distributions with common variance,
// (mu1 - mu0)^2 / (8 sigma^2), in nats.
double chernoff_gaussian(double mu0, double mu1, double variance);

enum class Strategy { quantum, classical };
enum class Provenance { detection_optimal, rate_optimal, time_share, paper_formula_f0 };

const char* to_string(Strategy s);
const char* to_string(Provenance p);

struct RatePoint {
  double rate_bits = 0.0;
  double detection_nats = 0.0;
  Strategy strategy = Strategy::quantum;
  Provenance provenance = Provenance::detection_optimal;
  double lambda = 0.0;  // time-share weight toward the rate-optimal corner
};

// Exponent ingredients of a single attack.
struct AttackExponents {
  double sup_xi = 0.0;
  double sup_f = 0.0;          // sup_xi f(xi, s)
  double f0 = 0.0;             // f(0, s) = (sum_k c_k)^2
  double rate_integral = 0.0;  // (1/2pi) int ln(E f(xi, s) + 1) dxi
};

AttackExponents attack_exponents(const FiberSpec& fiber, const AttackSpec& attack,
                                 const NumericsOptions& opts = {});

// Detection-optimal operating point. The headline value is E min_s sup_xi f;
// the closed-form E min_s f(0) is carried alongside because the two differ
// once the difference taps change sign past the tapped block.
struct DetectionOptimum {
  RatePoint point;
  RatePoint f0_point;
  std::size_t worst_attack = 0;     // argmin over attacks for sup f
  std::size_t worst_attack_f0 = 0;  // argmin over attacks for f(0)
  std::vector<AttackExponents> per_attack;
};

DetectionOptimum d_maxD_quantum(const FiberSpec& fiber,
                                std::span<const AttackSpec> attacks,
                                const NumericsOptions& opts = {});

// Homodyne detection pays exactly a factor two in the exponent.
DetectionOptimum d_maxD_classical(const FiberSpec& fiber,
                                  std::span<const AttackSpec> attacks,
                                  const NumericsOptions& opts = {});

// Detection exponent sustained at the full data rate g(eta E), from the
// Gaussian-codebook average error via the Szego limit.
struct RateOptimum {
  RatePoint point;
  std::size_t worst_attack = 0;
  std::vector<AttackExponents> per_attack;
};

RateOptimum d_maxR_quantum(const FiberSpec& fiber,
                           std::span<const AttackSpec> attacks,
                           const NumericsOptions& opts = {});

struct RegionOptions {
  NumericsOptions numerics;
  int lambda_grid = 101;  // samples along each time-sharing segment
};

struct RegionReport {
  FiberSpec fiber;
  std::vector<AttackSpec> attacks;
  std::vector<RatePoint> points;    // proven corner points
  std::vector<RatePoint> boundary;  // time-sharing segments, both strategies
  std::map<std::string, std::size_t> worst_attack;  // quantity -> argmin attack
};

RegionReport assemble_region(const FiberSpec& fiber,
                             std::span<const AttackSpec> attacks,
                             const RegionOptions& opts = {});

}  // namespace otdr
