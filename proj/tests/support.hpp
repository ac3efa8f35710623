#pragma once

// Independent reference computations for the test suites. Everything here is
// deliberately naive (direct sums, explicit matrices, brute-force grids) so
// the library is checked against a separate arithmetic route.

#include "otdr/fiber_model.hpp"
#include "otdr/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <span>

namespace oracle {

// |sum_k c_k e^{i k xi}|^2 straight from the taps.
inline double symbol_direct(const otdr::GramSymbol& sym, double xi) {
  std::complex<double> acc = 0.0;
  for (int k = 1; k <= sym.band(); ++k)
    acc += sym.c[static_cast<std::size_t>(k) - 1] *
           std::polar(1.0, static_cast<double>(k) * xi);
  return std::norm(acc);
}

// Explicit (n + band) x n convolution matrix of the taps.
inline Eigen::MatrixXd tall_convolution(std::span<const double> taps, int n) {
  const int band = static_cast<int>(taps.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + band, n);
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= band; ++k)
      m(i - 1 + k, i - 1) = taps[static_cast<std::size_t>(k) - 1];
  return m;
}

// Explicit n x n lower-triangular banded Toeplitz matrix.
inline Eigen::MatrixXd square_convolution(std::span<const double> taps, int n) {
  const int band = static_cast<int>(taps.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int t = 1; t <= n; ++t)
    for (int k = 1; k <= std::min(band, t - 1); ++k)
      m(t - 1, t - 1 - k) = taps[static_cast<std::size_t>(k) - 1];
  return m;
}

// Brute-force grid maximum of f.
inline double grid_supremum(const otdr::GramSymbol& sym, int points) {
  double best = 0.0;
  for (int i = 0; i < points; ++i)
    best = std::max(best,
                    symbol_direct(sym, 2.0 * std::numbers::pi * i / points));
  return best;
}

inline long double gordon_ld(long double x) {
  if (x == 0.0L) return 0.0L;
  return (x + 1.0L) * std::log2(x + 1.0L) - x * std::log2(x);
}

// Chernoff information by quadrature in x and golden-section search in the
// exponent weight.
inline double chernoff_numeric(double mu0, double mu1, double variance) {
  const double sigma = std::sqrt(variance);
  const double lo = std::min(mu0, mu1) - 12.0 * sigma;
  const double hi = std::max(mu0, mu1) + 12.0 * sigma;
  const int steps = 20000;
  const double h = (hi - lo) / steps;
  const auto neg_log_integral = [&](double lambda) {
    double acc = 0.0;
    for (int i = 0; i <= steps; ++i) {
      const double x = lo + i * h;
      const double p0 = std::exp(-(x - mu0) * (x - mu0) / (2.0 * variance));
      const double p1 = std::exp(-(x - mu1) * (x - mu1) / (2.0 * variance));
      const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
      acc += w * std::pow(p0, lambda) * std::pow(p1, 1.0 - lambda);
    }
    acc *= h / std::sqrt(2.0 * std::numbers::pi * variance);
    return -std::log(acc);
  };
  constexpr double kInvPhi = 0.6180339887498949;
  double a = 0.0, b = 1.0;
  double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
  double f1 = neg_log_integral(x1), f2 = neg_log_integral(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 > f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = neg_log_integral(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = neg_log_integral(x2);
    }
  }
  return std::max(f1, f2);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

inline otdr::FiberSpec random_fiber(otdr::GaussianStream& stream, int max_blocks,
                                    double max_energy) {
  const int blocks = 1 + static_cast<int>(stream.uniform() * max_blocks);
  otdr::FiberSpec fiber;
  for (int i = 0; i < blocks; ++i) {
    fiber.tau.push_back(0.3 + 0.69 * stream.uniform());
    fiber.theta.push_back(0.05 + 0.9 * stream.uniform());
  }
  fiber.energy = max_energy * (0.05 + 0.95 * stream.uniform());
  return fiber;
}

inline otdr::AttackSpec random_attack(otdr::GaussianStream& stream,
                                      const otdr::FiberSpec& fiber) {
  const int position = 1 + static_cast<int>(stream.uniform() * fiber.blocks());
  const double base_tau = fiber.tau[static_cast<std::size_t>(position) - 1];
  return otdr::AttackSpec{position, base_tau * (0.1 + 0.7 * stream.uniform()),
                          0.05 + 0.9 * stream.uniform()};
}

inline otdr::GramSymbol symbol_of(const otdr::FiberSpec& fiber,
                                  const otdr::AttackSpec& attack) {
  return otdr::gram_symbol(otdr::backscatter_coefficients(fiber),
                           otdr::backscatter_coefficients(fiber, attack));
}

// The Fig-like reference scenario used across the suites: a long uniform
// fiber with a strong tap halfway down the line.
inline otdr::FiberSpec reference_fiber() {
  return otdr::FiberSpec::uniform(100, 0.99, 0.5, 1e7);
}

inline otdr::AttackSpec reference_attack() { return otdr::AttackSpec{50, 0.4, 0.5}; }

}  // namespace oracle
