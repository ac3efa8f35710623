#include "otdr/fiber_model.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace otdr;

namespace {

const FiberSpec kTwoBlock = FiberSpec::uniform(2, 0.9, 0.5, 1.0);
const AttackSpec kTwoBlockAttack{1, 0.5, 0.5};

}  // namespace

TEST_CASE("backscatter coefficients of the two-block fiber") {
  const BackscatterResponse resp = backscatter_coefficients(kTwoBlock);
  REQUIRE(resp.band() == 4);
  CHECK(resp.a(1) == 0.0);
  CHECK(resp.a(3) == 0.0);
  // sqrt(theta' tau') and sqrt(theta'_2 tau'_2 theta_1 tau_1) = sqrt(0.0225)
  CHECK(resp.a(2) == doctest::Approx(0.22360679774997896).epsilon(1e-14));
  CHECK(resp.a(4) == doctest::Approx(0.15).epsilon(1e-14));
}

TEST_CASE("perfect transmission kills every pickup") {
  for (int blocks : {1, 3, 7}) {
    const FiberSpec fiber = FiberSpec::uniform(blocks, 1.0, 0.5, 2.0);
    const BackscatterResponse resp = backscatter_coefficients(fiber);
    for (int k = 1; k <= resp.band(); ++k) CHECK(resp.a(k) == 0.0);
  }
}

TEST_CASE("attacked two-block fiber") {
  const BackscatterResponse resp = backscatter_coefficients(kTwoBlock, kTwoBlockAttack);
  CHECK(resp.a(2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(resp.a(4) == doctest::Approx(0.11180339887498948).epsilon(1e-14));
}

TEST_CASE("null attack reproduces the baseline exactly") {
  GaussianStream stream(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const FiberSpec fiber = oracle::random_fiber(stream, 10, 5.0);
    const int position = 1 + static_cast<int>(stream.uniform() * fiber.blocks());
    const AttackSpec null_attack{position,
                                 fiber.tau[static_cast<std::size_t>(position) - 1],
                                 fiber.theta[static_cast<std::size_t>(position) - 1]};
    CHECK(null_attack.is_null_for(fiber));
    CHECK(backscatter_coefficients(fiber, null_attack) ==
          backscatter_coefficients(fiber));
  }
}

TEST_CASE("attack validation") {
  CHECK_THROWS_AS(backscatter_coefficients(kTwoBlock, AttackSpec{0, 0.5, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(backscatter_coefficients(kTwoBlock, AttackSpec{3, 0.5, 0.5}),
                  std::invalid_argument);
  // transmissivity can never increase
  CHECK_THROWS_AS(backscatter_coefficients(kTwoBlock, AttackSpec{1, 0.95, 0.5}),
                  std::invalid_argument);
}

TEST_CASE("forward loss") {
  CHECK(forward_loss(FiberSpec::uniform(5, 1.0, 0.3, 1.0)) == 1.0);
  CHECK(forward_loss(kTwoBlock) == doctest::Approx(0.81).epsilon(1e-15));

  const FiberSpec long_fiber = FiberSpec::uniform(100, 0.99, 0.5, 1.0);
  double expected = 1.0;
  for (int i = 0; i < 100; ++i) expected *= 0.99;
  CHECK(forward_loss(long_fiber) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(forward_loss(long_fiber) == doctest::Approx(0.3660323).epsilon(1e-6));
}

TEST_CASE("gram symbol of the null attack is identically zero") {
  const BackscatterResponse base = backscatter_coefficients(kTwoBlock);
  const GramSymbol sym = gram_symbol(base, base);
  for (double ck : sym.c) CHECK(ck == 0.0);
  for (double gk : sym.g) CHECK(gk == 0.0);
  CHECK(eval_symbol(sym, 1.7) == 0.0);
}

TEST_CASE("single-tap symbol is flat") {
  const BackscatterResponse zero{{0.0, 0.0, 0.0, 0.0}};
  const BackscatterResponse tap{{0.0, 1.0, 0.0, 0.0}};
  const GramSymbol sym = gram_symbol(zero, tap);
  CHECK(sym.g[0] == 1.0);
  CHECK(sym.g[1] == 0.0);
  CHECK(sym.g[2] == 0.0);
  CHECK(sym.g[3] == 0.0);
  CHECK(eval_symbol(sym, 1.234) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("two-block worked example has mixed-sign taps") {
  const GramSymbol sym = oracle::symbol_of(kTwoBlock, kTwoBlockAttack);
  CHECK(sym.c[1] == doctest::Approx(0.27639320225002103).epsilon(1e-13));
  CHECK(sym.c[3] == doctest::Approx(-0.038196601125010515).epsilon(1e-12));

  // g by brute-force cross-correlation
  for (std::size_t k = 0; k < sym.g.size(); ++k) {
    double expected = 0.0;
    for (std::size_t i = 0; i + k < sym.c.size(); ++i)
      expected += sym.c[i] * sym.c[i + k];
    CHECK(sym.g[k] == doctest::Approx(expected).epsilon(1e-14));
  }
  CHECK(sym.g[2] < 0.0);  // g_2 = c_2 c_4

  for (double xi : {0.0, 0.31, 2.2, 5.9}) {
    const double direct = oracle::symbol_direct(sym, xi);
    CHECK(eval_symbol(sym, xi) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("mismatched bands are rejected") {
  const BackscatterResponse two{{0.0, 0.1}};
  const BackscatterResponse four{{0.0, 0.1, 0.0, 0.2}};
  CHECK_THROWS_AS(gram_symbol(two, four), std::invalid_argument);
}

TEST_CASE("symbol evaluation matches the tap route on random scenarios") {
  GaussianStream stream(31337);
  for (int trial = 0; trial < 10000; ++trial) {
    const FiberSpec fiber = oracle::random_fiber(stream, 8, 5.0);
    const AttackSpec attack = oracle::random_attack(stream, fiber);
    const GramSymbol sym = oracle::symbol_of(fiber, attack);
    const double xi = 2.0 * std::numbers::pi * stream.uniform();
    const double via_g = eval_symbol(sym, xi);
    const double via_c = oracle::symbol_direct(sym, xi);
    REQUIRE(std::abs(via_g - via_c) <= 1e-10 * (1.0 + via_g));
  }
}

TEST_CASE("f(0) equals the squared tap sum") {
  GaussianStream stream(97);
  for (int trial = 0; trial < 200; ++trial) {
    const FiberSpec fiber = oracle::random_fiber(stream, 10, 3.0);
    const AttackSpec attack = oracle::random_attack(stream, fiber);
    const GramSymbol sym = oracle::symbol_of(fiber, attack);
    const double via_f = eval_symbol(sym, 0.0);
    REQUIRE(std::abs(via_f - sym.f0()) <= 1e-12 * (1.0 + via_f));
  }
}

TEST_CASE("odd delays vanish for every spec and attack") {
  GaussianStream stream(555);
  for (int trial = 0; trial < 200; ++trial) {
    const FiberSpec fiber = oracle::random_fiber(stream, 12, 2.0);
    const AttackSpec attack = oracle::random_attack(stream, fiber);
    const BackscatterResponse resp = backscatter_coefficients(fiber, attack);
    const GramSymbol sym = oracle::symbol_of(fiber, attack);
    for (int k = 1; k <= resp.band(); k += 2) {
      REQUIRE(resp.a(k) == 0.0);
      REQUIRE(sym.c[static_cast<std::size_t>(k) - 1] == 0.0);
    }
  }
}

TEST_CASE("lowering the tapped transmissivity raises the pickup") {
  GaussianStream stream(7878);
  for (int trial = 0; trial < 100; ++trial) {
    const FiberSpec fiber = oracle::random_fiber(stream, 10, 1.0);
    const int position = 1 + static_cast<int>(stream.uniform() * fiber.blocks());
    const double base_tau = fiber.tau[static_cast<std::size_t>(position) - 1];
    const double theta = stream.uniform();
    double previous = -1.0;
    for (double scale : {1.0, 0.7, 0.4, 0.1}) {
      const BackscatterResponse resp = backscatter_coefficients(
          fiber, AttackSpec{position, base_tau * scale, theta});
      const double pickup = resp.a(2 * position);
      if (previous >= 0.0) REQUIRE(pickup > previous);
      previous = pickup;
    }
  }
}

TEST_CASE("dense Gram renderings") {
  const BackscatterResponse zero{{0.0, 0.0, 0.0, 0.0}};
  const BackscatterResponse tap{{0.0, 1.0, 0.0, 0.0}};
  const GramSymbol flat = gram_symbol(zero, tap);

  SUBCASE("n = 1 single tap") {
    const Eigen::MatrixXd g = gram_matrix(flat, 1);
    REQUIRE(g.rows() == 1);
    CHECK(g(0, 0) == 1.0);
  }

  SUBCASE("null attack renders to zero") {
    const GramSymbol null_sym = gram_symbol(zero, zero);
    CHECK(gram_matrix(null_sym, 3).isZero(0.0));
  }

  SUBCASE("Toeplitz rendering equals the tall convolution Gram") {
    GaussianStream stream(11);
    for (int trial = 0; trial < 20; ++trial) {
      const FiberSpec fiber = oracle::random_fiber(stream, 6, 1.0);
      const AttackSpec attack = oracle::random_attack(stream, fiber);
      const GramSymbol sym = oracle::symbol_of(fiber, attack);
      const int n = 4 + static_cast<int>(stream.uniform() * 29);
      const Eigen::MatrixXd tall = oracle::tall_convolution(sym.c, n);
      const Eigen::MatrixXd expected = tall.transpose() * tall;
      const Eigen::MatrixXd got = gram_matrix(sym, n);
      REQUIRE((got - expected).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  SUBCASE("windowed rendering equals the square convolution Gram") {
    GaussianStream stream(12);
    for (int trial = 0; trial < 20; ++trial) {
      const FiberSpec fiber = oracle::random_fiber(stream, 6, 1.0);
      const AttackSpec attack = oracle::random_attack(stream, fiber);
      const GramSymbol sym = oracle::symbol_of(fiber, attack);
      const int n = 4 + static_cast<int>(stream.uniform() * 29);
      const Eigen::MatrixXd square = oracle::square_convolution(sym.c, n);
      const Eigen::MatrixXd expected = square.transpose() * square;
      const Eigen::MatrixXd got = windowed_gram_matrix(sym, n);
      REQUIRE((got - expected).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  SUBCASE("banded renderings agree with the explicit matrices") {
    const GramSymbol sym = oracle::symbol_of(kTwoBlock, kTwoBlockAttack);
    const BandedLowerToeplitz c4 = difference_matrix(sym, 6);
    CHECK((c4.dense() - oracle::square_convolution(sym.c, 6)).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK((c4.dense_tall() - oracle::tall_convolution(sym.c, 6)).cwiseAbs().maxCoeff() ==
          0.0);
    const BackscatterResponse resp = backscatter_coefficients(kTwoBlock);
    const BandedLowerToeplitz a4 = scatter_matrix(resp, 5);
    CHECK((a4.dense() - oracle::square_convolution(resp.coeffs, 5))
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }

  SUBCASE("memory bound is enforced") {
    CHECK_THROWS_AS(gram_matrix(flat, 100, 64), std::invalid_argument);
    CHECK_THROWS_AS(windowed_gram_matrix(flat, 100, 64), std::invalid_argument);
    CHECK_THROWS_AS(difference_matrix(flat, 100, 64), std::invalid_argument);
  }
}

TEST_CASE("spec validation") {
  FiberSpec bad = kTwoBlock;
  bad.tau[0] = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = kTwoBlock;
  bad.theta[1] = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = kTwoBlock;
  bad.energy = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(eval_symbol(oracle::symbol_of(kTwoBlock, kTwoBlockAttack),
                              std::nan("")),
                  std::invalid_argument);
}
