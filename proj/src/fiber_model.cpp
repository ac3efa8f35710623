#include "otdr/fiber_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace otdr {

namespace {

void check(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void FiberSpec::validate() const {
  check(!tau.empty(), "fiber must have at least one block");
  check(tau.size() == theta.size(), "tau and theta must have equal length");
  for (std::size_t i = 0; i < tau.size(); ++i) {
    check(std::isfinite(tau[i]) && tau[i] > 0.0 && tau[i] <= 1.0,
          "tau[" + std::to_string(i) + "] must lie in (0, 1]");
    check(std::isfinite(theta[i]) && theta[i] >= 0.0 && theta[i] <= 1.0,
          "theta[" + std::to_string(i) + "] must lie in [0, 1]");
  }
  check(std::isfinite(energy) && energy >= 0.0, "energy must be non-negative");
}

FiberSpec FiberSpec::uniform(int blocks, double tau, double theta, double energy) {
  check(blocks > 0, "block count must be positive");
  FiberSpec spec{std::vector<double>(blocks, tau), std::vector<double>(blocks, theta),
                 energy};
  spec.validate();
  return spec;
}

void AttackSpec::validate_against(const FiberSpec& fiber) const {
  check(position >= 1 && position <= fiber.blocks(),
        "attack position " + std::to_string(position) + " outside [1, " +
            std::to_string(fiber.blocks()) + "]");
  const double base_tau = fiber.tau[static_cast<std::size_t>(position) - 1];
  check(std::isfinite(tau) && tau >= 0.0, "attack tau must be non-negative");
  check(tau <= base_tau, "attack tau " + std::to_string(tau) +
                             " exceeds baseline transmissivity " +
                             std::to_string(base_tau) + " at block " +
                             std::to_string(position));
  check(std::isfinite(theta) && theta >= 0.0 && theta <= 1.0,
        "attack theta must lie in [0, 1]");
}

bool AttackSpec::is_null_for(const FiberSpec& fiber) const {
  const std::size_t p = static_cast<std::size_t>(position) - 1;
  return position >= 1 && position <= fiber.blocks() && tau == fiber.tau[p] &&
         theta == fiber.theta[p];
}

BackscatterResponse backscatter_coefficients(const FiberSpec& fiber,
                                             const std::optional<AttackSpec>& attack) {
  fiber.validate();
  std::vector<double> tau = fiber.tau;
  std::vector<double> theta = fiber.theta;
  if (attack) {
    attack->validate_against(fiber);
    const std::size_t p = static_cast<std::size_t>(attack->position) - 1;
    tau[p] = attack->tau;
    theta[p] = attack->theta;
  }

  const int blocks = fiber.blocks();
  std::vector<double> coeffs(2 * static_cast<std::size_t>(blocks), 0.0);
  // Pickup at block j: split theta'_j tau'_j there, round trip through the
  // j-1 blocks in front of it. Delay 2j, one slot each way per block.
  double round_trip = 1.0;
  for (int j = 1; j <= blocks; ++j) {
    const double t = tau[static_cast<std::size_t>(j) - 1];
    const double th = theta[static_cast<std::size_t>(j) - 1];
    coeffs[2 * static_cast<std::size_t>(j) - 1] =
        std::sqrt((1.0 - th) * (1.0 - t) * round_trip);
    round_trip *= th * t;
  }
  return BackscatterResponse{std::move(coeffs)};
}

double forward_loss(const FiberSpec& fiber) {
  fiber.validate();
  double eta = 1.0;
  for (double t : fiber.tau) eta *= t;
  return eta;
}

double GramSymbol::tap_sum() const {
  return std::accumulate(c.begin(), c.end(), 0.0);
}

double GramSymbol::f0() const {
  const double s = tap_sum();
  return s * s;
}

GramSymbol gram_symbol(const BackscatterResponse& baseline,
                       const BackscatterResponse& attacked) {
  if (baseline.band() != attacked.band())
    throw std::invalid_argument("responses have mismatched block counts");

  const std::size_t band = baseline.coeffs.size();
  GramSymbol sym;
  sym.c.resize(band);
  for (std::size_t i = 0; i < band; ++i)
    sym.c[i] = attacked.coeffs[i] - baseline.coeffs[i];

  sym.g.assign(band, 0.0);
  for (std::size_t k = 0; k < band; ++k)
    for (std::size_t i = 0; i + k < band; ++i)
      sym.g[k] += sym.c[i] * sym.c[i + k];
  return sym;
}

double eval_symbol(const GramSymbol& sym, double xi) {
  if (!std::isfinite(xi)) throw std::invalid_argument("xi must be finite");
  double f = sym.g.empty() ? 0.0 : sym.g[0];
  for (std::size_t k = 1; k < sym.g.size(); ++k)
    f += 2.0 * sym.g[k] * std::cos(static_cast<double>(k) * xi);
  return std::max(f, 0.0);
}

Eigen::MatrixXd BandedLowerToeplitz::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const int width = static_cast<int>(band.size());
  for (int t = 1; t <= n; ++t)
    for (int k = 1; k <= std::min(width, t - 1); ++k)
      m(t - 1, t - 1 - k) = band[static_cast<std::size_t>(k) - 1];
  return m;
}

Eigen::MatrixXd BandedLowerToeplitz::dense_tall() const {
  const int width = static_cast<int>(band.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + width, n);
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= width; ++k)
      m(i - 1 + k, i - 1) = band[static_cast<std::size_t>(k) - 1];
  return m;
}

namespace {

void check_dense_limit(int n, int dense_limit) {
  if (n < 1) throw std::invalid_argument("matrix dimension must be positive");
  if (n > dense_limit)
    throw std::invalid_argument("dense rendering of n = " + std::to_string(n) +
                                " exceeds the configured limit " +
                                std::to_string(dense_limit));
}

}  // namespace

BandedLowerToeplitz scatter_matrix(const BackscatterResponse& resp, int n,
                                   int dense_limit) {
  check_dense_limit(n, dense_limit);
  return BandedLowerToeplitz{n, resp.coeffs};
}

BandedLowerToeplitz difference_matrix(const GramSymbol& sym, int n, int dense_limit) {
  check_dense_limit(n, dense_limit);
  return BandedLowerToeplitz{n, sym.c};
}

Eigen::MatrixXd gram_matrix(const GramSymbol& sym, int n, int dense_limit) {
  check_dense_limit(n, dense_limit);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const int band = static_cast<int>(sym.g.size());
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - band + 1); j < std::min(n, i + band); ++j)
      m(i, j) = sym.g[static_cast<std::size_t>(std::abs(i - j))];
  return m;
}

Eigen::MatrixXd windowed_gram_matrix(const GramSymbol& sym, int n, int dense_limit) {
  check_dense_limit(n, dense_limit);
  const int band = sym.band();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  // (C^T C)_{ij} = sum_{t <= n} c_{t-i} c_{t-j}; the sum truncates for
  // columns within one band of the window's end.
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j <= std::min(n, i + band - 1); ++j) {
      double acc = 0.0;
      for (int t = j + 1; t <= std::min(n, i + band); ++t)
        acc += sym.c[static_cast<std::size_t>(t - i) - 1] *
               sym.c[static_cast<std::size_t>(t - j) - 1];
      m(i - 1, j - 1) = acc;
      m(j - 1, i - 1) = acc;
    }
  }
  return m;
}

}  // namespace otdr
