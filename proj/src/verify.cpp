#include "otdr/verify.hpp"

#include "otdr/detection_sim.hpp"
#include "otdr/rate_analysis.hpp"
#include "otdr/rng.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace otdr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double rel_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// |sum_k c_k e^{i k xi}|^2 straight from the taps, the independent route to
// the generating function.
double symbol_from_taps(const GramSymbol& sym, double xi) {
  std::complex<double> acc = 0.0;
  for (int k = 1; k <= sym.band(); ++k)
    acc += sym.c[static_cast<std::size_t>(k) - 1] *
           std::polar(1.0, static_cast<double>(k) * xi);
  return std::norm(acc);
}

FiberSpec random_fiber(GaussianStream& stream, int max_blocks, double max_energy) {
  const int blocks = 1 + static_cast<int>(stream.uniform() * max_blocks);
  FiberSpec fiber;
  for (int i = 0; i < blocks; ++i) {
    fiber.tau.push_back(0.3 + 0.69 * stream.uniform());
    fiber.theta.push_back(0.05 + 0.9 * stream.uniform());
  }
  fiber.energy = max_energy * (0.05 + 0.95 * stream.uniform());
  return fiber;
}

AttackSpec random_attack(GaussianStream& stream, const FiberSpec& fiber) {
  const int position = 1 + static_cast<int>(stream.uniform() * fiber.blocks());
  const double base_tau = fiber.tau[static_cast<std::size_t>(position) - 1];
  return AttackSpec{position, base_tau * (0.1 + 0.7 * stream.uniform()),
                    0.05 + 0.9 * stream.uniform()};
}

GramSymbol symbol_of(const FiberSpec& fiber, const AttackSpec& attack) {
  return gram_symbol(backscatter_coefficients(fiber),
                     backscatter_coefficients(fiber, attack));
}

class Suite {
 public:
  explicit Suite(const ScenarioConfig& config) : config_(config) {}

  std::vector<VerifyCheck> run() {
    config_round_trip();
    null_attack_neutrality();
    odd_index_vanishing();
    monotone_pickup();
    symbol_positivity();
    finite_n_containment();
    trace_identity();
    szego_monotone_approach();
    quadrature_stability();
    lemma2_ratio();
    chernoff_cross_check();
    exponent_ordering();
    capacity_ordering();
    min_over_attacks();
    energy_scaling();
    determinant_paths();
    determinant_vs_szego();
    determinant_vs_mc();
    mc_reproducibility();
    homodyne_calibration();
    helstrom_vs_povm();
    return std::move(checks_);
  }

 private:
  void record(const std::string& name, bool passed, double observed, double bound,
              const std::string& note = "") {
    checks_.push_back(VerifyCheck{name, passed, observed, bound, note});
  }

  const AttackSpec& first_attack() const { return config_.attacks.front(); }

  void config_round_trip() {
    const bool ok = parse_config(emit_config(config_)) == config_;
    record("config_round_trip", ok, ok ? 1.0 : 0.0, 1.0, "parse(emit(config)) == config");
  }

  void null_attack_neutrality() {
    const FiberSpec& fiber = config_.fiber;
    double worst = 0.0;
    for (int position : {1, (fiber.blocks() + 1) / 2, fiber.blocks()}) {
      const std::size_t p = static_cast<std::size_t>(position) - 1;
      const AttackSpec null_attack{position, fiber.tau[p], fiber.theta[p]};
      const GramSymbol sym = symbol_of(fiber, null_attack);
      for (double ck : sym.c) worst = std::max(worst, std::abs(ck));
      worst = std::max(worst, fiber.energy * symbol_supremum(sym).value);
      const Eigen::MatrixXd gram = gram_matrix(sym, 8);
      const auto input = constant_amplitude_input(8, fiber.energy);
      worst = std::max(worst, std::abs(povm_error_log(input, gram, fiber.energy).prob() - 0.5));
      worst = std::max(worst, std::abs(helstrom_error(LogProb{0.0}).prob() - 0.5));
    }
    record("null_attack_neutrality", worst == 0.0, worst, 0.0,
           "c = 0, D = 0, P_e = 1/2 under the null attack");
  }

  void odd_index_vanishing() {
    GaussianStream stream(mix_seed(config_.mc.seed, 101));
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const FiberSpec fiber = random_fiber(stream, 12, 10.0);
      const AttackSpec attack = random_attack(stream, fiber);
      const BackscatterResponse resp = backscatter_coefficients(fiber, attack);
      const GramSymbol sym = symbol_of(fiber, attack);
      for (int k = 1; k <= resp.band(); k += 2) {
        worst = std::max(worst, std::abs(resp.a(k)));
        worst = std::max(worst, std::abs(sym.c[static_cast<std::size_t>(k) - 1]));
      }
    }
    record("odd_index_vanishing", worst == 0.0, worst, 0.0,
           "odd-delay couplings vanish identically");
  }

  void monotone_pickup() {
    const AttackSpec& attack = first_attack();
    const std::size_t p = static_cast<std::size_t>(attack.position);
    double previous = -1.0;
    bool increasing = true;
    const double base_tau = config_.fiber.tau[p - 1];
    for (double scale : {1.0, 0.75, 0.5, 0.25, 0.05}) {
      AttackSpec probe = attack;
      probe.tau = base_tau * scale;
      const BackscatterResponse resp = backscatter_coefficients(config_.fiber, probe);
      const double pickup = resp.a(static_cast<int>(2 * p));
      if (previous >= 0.0) increasing = increasing && pickup > previous;
      previous = pickup;
    }
    record("monotone_pickup", increasing, increasing ? 1.0 : 0.0, 1.0,
           "lowering tau_p strictly raises the tapped-block pickup");
  }

  void symbol_positivity() {
    GaussianStream stream(mix_seed(config_.mc.seed, 102));
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
      const FiberSpec fiber = random_fiber(stream, 8, 5.0);
      const AttackSpec attack = random_attack(stream, fiber);
      const GramSymbol sym = symbol_of(fiber, attack);
      const double xi = kTwoPi * stream.uniform();
      const double via_g = eval_symbol(sym, xi);
      const double via_c = symbol_from_taps(sym, xi);
      worst = std::max(worst, std::abs(via_g - via_c) / (1.0 + via_g));
    }
    record("symbol_positivity", worst <= 1e-10, worst, 1e-10,
           "f from g matches |c-hat|^2 on random triples");
  }

  void finite_n_containment() {
    const GramSymbol sym = symbol_of(config_.fiber, first_attack());
    const int n = std::min(128, config_.numerics.dense_n_limit);
    const SpectrumReport report = toeplitz_eigenvalues(sym, n, config_.numerics);
    const double low = report.eigenvalues.front();
    const double high = report.eigenvalues.back();
    const bool ok = low >= report.sym_min - 1e-9 && high <= report.sym_max + 1e-9;
    record("finite_n_containment", ok, high - report.sym_max, 1e-9,
           "eigenvalues stay inside the symbol range");
  }

  void trace_identity() {
    const GramSymbol sym = symbol_of(config_.fiber, first_attack());
    const int n = std::min(64, config_.numerics.dense_n_limit);
    const Eigen::MatrixXd gram = gram_matrix(sym, n);
    const double g0 = sym.g.empty() ? 0.0 : sym.g[0];
    const double gap = rel_gap(gram.trace() / n, g0);
    record("trace_identity", gap <= 1e-13, gap, 1e-13, "(1/n) trace G_n = g_0");
  }

  void szego_monotone_approach() {
    const GramSymbol sym = symbol_of(config_.fiber, first_attack());
    std::vector<int> ns = config_.numerics.n_list;
    std::sort(ns.begin(), ns.end());
    const SzegoResult result =
        szego_convergence(sym, SzegoFunctional::log1p_scaled, config_.fiber.energy,
                          ns, config_.numerics);
    const double first_gap = std::abs(result.finite_n.front().second - result.limit);
    const double last_gap = std::abs(result.finite_n.back().second - result.limit);
    record("szego_monotone_approach", last_gap < first_gap || first_gap == 0.0,
           last_gap, first_gap, "finite-n gap shrinks from smallest to largest n");
    const double final_rel =
        result.limit == 0.0 ? last_gap : last_gap / std::abs(result.limit);
    record("szego_final_gap", final_rel < 0.01, final_rel, 0.01,
           "relative gap below 1% at the largest n");
  }

  void quadrature_stability() {
    const GramSymbol sym = symbol_of(config_.fiber, first_attack());
    const int nodes = config_.numerics.quadrature_nodes;
    const double coarse = szego_functional(sym, SzegoFunctional::log1p_scaled,
                                           config_.fiber.energy, nodes);
    const double fine = szego_functional(sym, SzegoFunctional::log1p_scaled,
                                         config_.fiber.energy, 2 * nodes);
    const double gap = rel_gap(coarse, fine);
    record("quadrature_stability", gap <= 1e-10, gap, 1e-10,
           "doubling the quadrature nodes is inert");
  }

  void lemma2_ratio() {
    const auto quantum = d_maxD_quantum(config_.fiber, config_.attacks, config_.numerics);
    const auto classical =
        d_maxD_classical(config_.fiber, config_.attacks, config_.numerics);
    const double dq = quantum.point.detection_nats;
    const double dc = classical.point.detection_nats;
    const double gap = dq == 0.0 ? std::abs(dc) : std::abs(dc / dq - 0.5);
    record("lemma2_ratio", gap <= 1e-12, gap, 1e-12,
           "classical detection exponent is exactly half the quantum one");
  }

  void chernoff_cross_check() {
    // Half the f(0) exponent must equal the Chernoff information of the two
    // homodyne outcome distributions.
    const GramSymbol sym = symbol_of(config_.fiber, first_attack());
    const double alpha_s =
        std::sqrt(config_.fiber.energy) * std::abs(sym.tap_sum());
    const double chernoff = chernoff_gaussian(0.0, std::sqrt(2.0) * alpha_s, 0.5);
    const double half_f0 = 0.5 * config_.fiber.energy * sym.f0();
    const double gap = rel_gap(chernoff, half_f0);
    record("chernoff_cross_check", gap <= 1e-12, gap, 1e-12,
           "E f(0) / 2 equals the homodyne Chernoff information");
  }

  void exponent_ordering() {
    const auto det = d_maxD_quantum(config_.fiber, config_.attacks, config_.numerics);
    const auto rate = d_maxR_quantum(config_.fiber, config_.attacks, config_.numerics);
    const bool ok = rate.point.detection_nats <=
                    det.point.detection_nats * (1.0 + 1e-12) + 1e-300;
    record("exponent_ordering", ok, rate.point.detection_nats,
           det.point.detection_nats, "D_maxR <= D_maxD");
  }

  void capacity_ordering() {
    const double classical = capacity_classical(config_.fiber);
    const double quantum = capacity_quantum(config_.fiber);
    record("capacity_ordering", classical <= quantum, classical, quantum,
           "classical capacity never exceeds the quantum one");
  }

  void min_over_attacks() {
    const auto base = d_maxD_quantum(config_.fiber, config_.attacks, config_.numerics);
    std::vector<AttackSpec> extended(config_.attacks.begin(), config_.attacks.end());
    AttackSpec harder = first_attack();
    harder.tau *= 0.5;
    extended.push_back(harder);
    const auto wider = d_maxD_quantum(config_.fiber, extended, config_.numerics);
    const bool ok =
        wider.point.detection_nats <= base.point.detection_nats * (1.0 + 1e-12);
    record("min_over_attacks", ok, wider.point.detection_nats,
           base.point.detection_nats, "extending the attack list cannot raise D");
  }

  void energy_scaling() {
    const auto base = d_maxD_quantum(config_.fiber, config_.attacks, config_.numerics);
    double worst = 0.0;
    for (double kappa : {0.1, 10.0}) {
      FiberSpec scaled = config_.fiber;
      scaled.energy *= kappa;
      const auto other = d_maxD_quantum(scaled, config_.attacks, config_.numerics);
      worst = std::max(worst, rel_gap(other.point.detection_nats,
                                      kappa * base.point.detection_nats));
    }
    record("energy_scaling", worst <= 1e-12, worst, 1e-12,
           "D_maxD is exactly linear in the pulse energy");
  }

  void determinant_paths() {
    const GramSymbol sym = symbol_of(config_.fiber, first_attack());
    const int n = std::min(64, config_.numerics.dense_n_limit);
    const double eig =
        expected_error_determinant_log(sym, n, config_.fiber.energy,
                                       DeterminantPath::eigenvalues).value;
    const double chol =
        expected_error_determinant_log(sym, n, config_.fiber.energy,
                                       DeterminantPath::levinson).value;
    const double gap = rel_gap(eig, chol);
    record("determinant_paths", gap <= 1e-8, gap, 1e-8,
           "eigenvalue and Levinson factorization routes to ln det agree");
  }

  void determinant_vs_szego() {
    // The per-use determinant exponent approaches the quadrature limit; the
    // band must stay well under n for the gap to be small.
    FiberSpec fiber = config_.fiber;
    if (fiber.blocks() > 20) fiber = FiberSpec::uniform(10, 0.9, 0.5, fiber.energy);
    AttackSpec attack{(fiber.blocks() + 1) / 2,
                      0.5 * fiber.tau[(fiber.blocks() - 1) / 2], 0.5};
    const GramSymbol sym = symbol_of(fiber, attack);
    const int n = std::min(512, config_.numerics.dense_n_limit);
    const double finite =
        -expected_error_determinant_log(sym, n, fiber.energy).value / n;
    const double limit = szego_functional(sym, SzegoFunctional::log1p_scaled,
                                          fiber.energy, config_.numerics.quadrature_nodes);
    const double gap = rel_gap(finite, limit);
    record("determinant_vs_szego", gap <= 0.02, gap, 0.02,
           "finite-n determinant exponent near the Szego limit");
  }

  void determinant_vs_mc() {
    GaussianStream stream(mix_seed(config_.mc.seed, 103));
    int hits = 0;
    const int trials = 20;
    for (int trial = 0; trial < trials; ++trial) {
      const FiberSpec fiber = random_fiber(stream, 8, 1.0);
      const AttackSpec attack = random_attack(stream, fiber);
      const GramSymbol sym = symbol_of(fiber, attack);
      const int n = 4 + static_cast<int>(stream.uniform() * 13);
      const double analytic =
          expected_error_determinant_log(sym, n, fiber.energy).prob();
      const MCReport mc =
          expected_error_mc(sym, n, fiber.energy, config_.mc.samples,
                            mix_seed(config_.mc.seed, 200 + trial),
                            config_.mc.workers);
      const double z = mc.std_error == 0.0
                           ? (mc.estimate == analytic ? 0.0 : 1e9)
                           : (mc.estimate - analytic) / mc.std_error;
      if (std::abs(z) <= 3.0) ++hits;
    }
    record("determinant_vs_mc", hits >= 19, hits, 19,
           "Monte Carlo inside 3 sigma of the determinant in >= 19/20 runs");
  }

  void mc_reproducibility() {
    const GramSymbol sym = symbol_of(config_.fiber, first_attack());
    const int n = std::min(8, config_.numerics.dense_n_limit);
    const std::uint64_t samples = std::min<std::uint64_t>(config_.mc.samples, 20000);
    const MCReport a = expected_error_mc(sym, n, config_.fiber.energy, samples,
                                         config_.mc.seed, config_.mc.workers);
    const MCReport b = expected_error_mc(sym, n, config_.fiber.energy, samples,
                                         config_.mc.seed, config_.mc.workers);
    const bool ok = a.estimate == b.estimate && a.std_error == b.std_error;
    record("mc_reproducibility", ok, ok ? 0.0 : 1.0, 0.0,
           "identical (seed, workers) reruns are bit-identical");
  }

  void homodyne_calibration() {
    int hits = 0;
    const int trials = 20;
    for (int trial = 0; trial < trials; ++trial) {
      const double alpha = 0.3 * (trial % 4);
      const int pulses = 1 + 2 * (trial % 3);
      const MCReport mc =
          homodyne_mc(alpha, pulses, config_.mc.samples,
                      mix_seed(config_.mc.seed, 300 + trial), config_.mc.workers);
      const double analytic = homodyne_error_analytic(alpha, pulses);
      const double z = mc.std_error == 0.0
                           ? (mc.estimate == analytic ? 0.0 : 1e9)
                           : (mc.estimate - analytic) / mc.std_error;
      if (std::abs(z) <= 3.0) ++hits;
    }
    record("homodyne_calibration", hits >= 19, hits, 19,
           "homodyne error matches Phi(-alpha sqrt(n)) in >= 19/20 runs");
  }

  void helstrom_vs_povm() {
    const GramSymbol sym = symbol_of(config_.fiber, first_attack());
    const int band = sym.band();
    const int n = std::max(band + 2, std::min(512, config_.numerics.dense_n_limit));
    const Eigen::MatrixXd gram = windowed_gram_matrix(sym, n);
    const auto input = constant_amplitude_input(n, config_.fiber.energy);
    const LogProb povm = povm_error_log(input, gram, config_.fiber.energy);
    const double quad = std::log(0.5) - povm.value;  // <alpha, G alpha>
    const LogProb helstrom = helstrom_error(LogProb{-quad});
    const bool ordered = helstrom.value <= povm.value + 1e-15;

    // Transient-corrected quadratic form against the closed form E f(0).
    const double corrected =
        (quad - config_.fiber.energy * transient_correction(sym)) / (n - band);
    const double f0_gap = rel_gap(corrected, config_.fiber.energy * sym.f0());

    record("helstrom_povm_ordering", ordered, helstrom.value, povm.value,
           "the vacuum-displacement receiver cannot beat Helstrom");
    record("povm_exponent_vs_f0", f0_gap <= 0.02, f0_gap, 0.02,
           "transient-corrected POVM exponent equals E f(0)");

    // The 1% agreement of the raw -(1/n) log exponents is pinned to the
    // reference operating point (long weak-coupling fiber at n = 512); away
    // from it the constant ln 2 offsets are not negligible against the
    // quadratic form.
    const FiberSpec reference = FiberSpec::uniform(100, 0.99, 0.5, 1e7);
    const GramSymbol ref_sym = symbol_of(reference, AttackSpec{50, 0.4, 0.5});
    const int ref_n = 512;
    const auto ref_input = constant_amplitude_input(ref_n, reference.energy);
    const LogProb ref_povm = povm_error_log(
        ref_input, windowed_gram_matrix(ref_sym, ref_n), reference.energy);
    const LogProb ref_helstrom =
        helstrom_error(LogProb{ref_povm.value - std::log(0.5)});
    const double ratio_gap =
        rel_gap(-ref_helstrom.value / ref_n, -ref_povm.value / ref_n);
    record("helstrom_povm_exponent", ratio_gap <= 0.01, ratio_gap, 0.01,
           "raw -(1/n) log exponents agree within 1% at the reference point");
  }

  const ScenarioConfig& config_;
  std::vector<VerifyCheck> checks_;
};

}  // namespace

std::vector<VerifyCheck> run_verify_suite(const ScenarioConfig& config) {
  config.fiber.validate();
  if (config.attacks.empty())
    throw std::invalid_argument("verify needs at least one attack in the scenario");
  for (const AttackSpec& attack : config.attacks)
    attack.validate_against(config.fiber);
  return Suite(config).run();
}

bool all_passed(const std::vector<VerifyCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const VerifyCheck& c) { return c.passed; });
}

}  // namespace otdr
