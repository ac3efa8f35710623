#include "otdr/rate_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace otdr {

double gordon(double mean_photons) {
  if (!(mean_photons >= 0.0))
    throw std::invalid_argument("Gordon function needs a non-negative argument");
  if (mean_photons == 0.0) return 0.0;  // continuity limit of -x log x
  // (x+1)log2(x+1) - x log2 x, rearranged so the two large terms never cancel
  constexpr double kLn2 = 0.6931471805599453094172321214581766;
  return (mean_photons * std::log1p(1.0 / mean_photons) + std::log1p(mean_photons)) /
         kLn2;
}

double capacity_quantum(const FiberSpec& fiber) {
  return gordon(forward_loss(fiber) * fiber.energy);
}

double capacity_classical(const FiberSpec& fiber) {
  const double received = forward_loss(fiber) * fiber.energy;
  const double heterodyne = std::log2(1.0 + received);
  const double homodyne = 0.5 * std::log2(1.0 + 4.0 * received);
  return std::max(heterodyne, homodyne);
}

double chernoff_gaussian(double mu0, double mu1, double variance) {
  if (!(variance > 0.0))
    throw std::invalid_argument("Chernoff information needs a positive variance");
  const double shift = mu1 - mu0;
  return shift * shift / (8.0 * variance);
}

const char* to_string(Strategy s) {
  return s == Strategy::quantum ? "quantum" : "classical";
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::detection_optimal: return "detection_optimal";
    case Provenance::rate_optimal: return "rate_optimal";
    case Provenance::time_share: return "time_share";
    case Provenance::paper_formula_f0: return "paper_formula_f0";
  }
  return "unknown";
}

AttackExponents attack_exponents(const FiberSpec& fiber, const AttackSpec& attack,
                                 const NumericsOptions& opts) {
  const BackscatterResponse baseline = backscatter_coefficients(fiber);
  const BackscatterResponse attacked = backscatter_coefficients(fiber, attack);
  const GramSymbol sym = gram_symbol(baseline, attacked);

  AttackExponents out;
  const SymbolExtremum sup = symbol_supremum(sym, opts.xi_grid);
  out.sup_xi = sup.xi;
  out.sup_f = sup.value;
  out.f0 = sym.f0();
  out.rate_integral = szego_functional(sym, SzegoFunctional::log1p_scaled,
                                       fiber.energy, opts.quadrature_nodes);
  return out;
}

namespace {

std::vector<AttackExponents> evaluate_attacks(const FiberSpec& fiber,
                                              std::span<const AttackSpec> attacks,
                                              const NumericsOptions& opts) {
  if (attacks.empty()) throw std::invalid_argument("attack list is empty");
  std::vector<AttackExponents> per_attack;
  per_attack.reserve(attacks.size());
  for (const AttackSpec& attack : attacks)
    per_attack.push_back(attack_exponents(fiber, attack, opts));
  return per_attack;
}

std::size_t argmin(const std::vector<AttackExponents>& xs,
                   double AttackExponents::* field) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i].*field < xs[best].*field) best = i;
  return best;
}

}  // namespace

DetectionOptimum d_maxD_quantum(const FiberSpec& fiber,
                                std::span<const AttackSpec> attacks,
                                const NumericsOptions& opts) {
  DetectionOptimum out;
  out.per_attack = evaluate_attacks(fiber, attacks, opts);
  out.worst_attack = argmin(out.per_attack, &AttackExponents::sup_f);
  out.worst_attack_f0 = argmin(out.per_attack, &AttackExponents::f0);

  out.point = RatePoint{0.0, fiber.energy * out.per_attack[out.worst_attack].sup_f,
                        Strategy::quantum, Provenance::detection_optimal, 0.0};
  out.f0_point =
      RatePoint{0.0, fiber.energy * out.per_attack[out.worst_attack_f0].f0,
                Strategy::quantum, Provenance::paper_formula_f0, 0.0};
  return out;
}

DetectionOptimum d_maxD_classical(const FiberSpec& fiber,
                                  std::span<const AttackSpec> attacks,
                                  const NumericsOptions& opts) {
  DetectionOptimum out = d_maxD_quantum(fiber, attacks, opts);
  out.point.detection_nats *= 0.5;
  out.point.strategy = Strategy::classical;
  out.f0_point.detection_nats *= 0.5;
  out.f0_point.strategy = Strategy::classical;
  return out;
}

RateOptimum d_maxR_quantum(const FiberSpec& fiber, std::span<const AttackSpec> attacks,
                           const NumericsOptions& opts) {
  RateOptimum out;
  out.per_attack = evaluate_attacks(fiber, attacks, opts);
  out.worst_attack = argmin(out.per_attack, &AttackExponents::rate_integral);
  out.point = RatePoint{capacity_quantum(fiber),
                        out.per_attack[out.worst_attack].rate_integral,
                        Strategy::quantum, Provenance::rate_optimal, 1.0};
  return out;
}

RegionReport assemble_region(const FiberSpec& fiber,
                             std::span<const AttackSpec> attacks,
                             const RegionOptions& opts) {
  if (opts.lambda_grid < 2)
    throw std::invalid_argument("time-sharing grid needs at least two points");

  RegionReport report;
  report.fiber = fiber;
  report.attacks.assign(attacks.begin(), attacks.end());

  const DetectionOptimum quantum_det = d_maxD_quantum(fiber, attacks, opts.numerics);
  const RateOptimum quantum_rate = d_maxR_quantum(fiber, attacks, opts.numerics);
  const double d_maxD = quantum_det.point.detection_nats;
  const double d_maxD_c = 0.5 * d_maxD;
  const double d_maxR = quantum_rate.point.detection_nats;
  const double r_max_q = quantum_rate.point.rate_bits;
  const double r_max_c = capacity_classical(fiber);

  report.worst_attack["d_maxD_quantum"] = quantum_det.worst_attack;
  report.worst_attack["d_maxD_quantum_f0"] = quantum_det.worst_attack_f0;
  report.worst_attack["d_maxD_classical"] = quantum_det.worst_attack;
  report.worst_attack["d_maxR_quantum"] = quantum_rate.worst_attack;

  report.points.push_back(quantum_det.point);
  report.points.push_back(quantum_rate.point);
  report.points.push_back(RatePoint{0.0, d_maxD_c, Strategy::classical,
                                    Provenance::detection_optimal, 0.0});
  report.points.push_back(RatePoint{r_max_c, 0.0, Strategy::classical,
                                    Provenance::rate_optimal, 1.0});
  report.points.push_back(quantum_det.f0_point);

  // Block time sharing combines rates and exponents linearly, so the segment
  // between two proven corners is achievable. The classical segment ends at
  // (r_max_c, 0): no positive classical exponent is proven at full rate.
  for (int i = 0; i < opts.lambda_grid; ++i) {
    const double lambda = static_cast<double>(i) / (opts.lambda_grid - 1);
    report.boundary.push_back(RatePoint{
        lambda * r_max_q, (1.0 - lambda) * d_maxD + lambda * d_maxR,
        Strategy::quantum, Provenance::time_share, lambda});
  }
  for (int i = 0; i < opts.lambda_grid; ++i) {
    const double lambda = static_cast<double>(i) / (opts.lambda_grid - 1);
    report.boundary.push_back(RatePoint{lambda * r_max_c, (1.0 - lambda) * d_maxD_c,
                                        Strategy::classical, Provenance::time_share,
                                        lambda});
  }
  return report;
}

}  // namespace otdr
