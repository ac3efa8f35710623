#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace otdr {

inline constexpr int kDefaultDenseLimit = 2048;

// A fiber of L concatenated blocks. Block i forwards the pulse with
// transmissivity tau[i-1] and splits the reflected field with theta[i-1];
// energy is the mean photon number allowed per transmitted pulse.
struct FiberSpec {
  std::vector<double> tau;
  std::vector<double> theta;
  double energy = 0.0;

  int blocks() const { return static_cast<int>(tau.size()); }
  void validate() const;

  static FiberSpec uniform(int blocks, double tau, double theta, double energy);

  bool operator==(const FiberSpec&) const = default;
};

// Replaces block `position` (1-based) with transmissivity `tau` and split
// `theta`. A tap can only lower the transmissivity of the block it touches,
// so tau must not exceed the baseline value there.
struct AttackSpec {
  int position = 1;
  double tau = 1.0;
  double theta = 0.0;

  void validate_against(const FiberSpec& fiber) const;
  bool is_null_for(const FiberSpec& fiber) const;

  bool operator==(const AttackSpec&) const = default;
};

// Impulse response of the return path: coeffs[k-1] couples the pulse sent at
// time t-k into the sample received at time t. Odd delays vanish because a
// round trip always crosses an even number of blocks.
struct BackscatterResponse {
  std::vector<double> coeffs;

  int band() const { return static_cast<int>(coeffs.size()); }
  double a(int delay) const { return coeffs.at(static_cast<std::size_t>(delay) - 1); }

  bool operator==(const BackscatterResponse&) const = default;
};

BackscatterResponse backscatter_coefficients(
    const FiberSpec& fiber, const std::optional<AttackSpec>& attack = std::nullopt);

// Total forward transmissivity eta = prod_i tau_i.
double forward_loss(const FiberSpec& fiber);

// Difference taps c_k between an attacked and the baseline response, their
// autocorrelation g_k, and the generating function of the Gram family,
//   f(xi) = g_0 + 2 sum_{k>=1} g_k cos(k xi) = |sum_k c_k e^{i k xi}|^2.
struct GramSymbol {
  std::vector<double> c;  // c[k-1] = c_k, k = 1..2L
  std::vector<double> g;  // g[k]   = g_k, k = 0..2L-1

  int band() const { return static_cast<int>(c.size()); }
  double tap_sum() const;  // sum_k c_k; can be negative past the tapped block
  double f0() const;       // f(0) = (sum_k c_k)^2
};

GramSymbol gram_symbol(const BackscatterResponse& baseline,
                       const BackscatterResponse& attacked);

// f(xi), clamped to zero where rounding drives it slightly negative.
double eval_symbol(const GramSymbol& sym, double xi);

// Lower-triangular banded Toeplitz rendering: entry (t, t-k) = band[k-1] for
// 1 <= k <= min(band size, t-1); the main diagonal is zero (no zero-delay
// echo exists in the model).
struct BandedLowerToeplitz {
  int n = 0;
  std::vector<double> band;

  Eigen::MatrixXd dense() const;
  // (n + band) x n rendering that keeps the run-out rows after the last
  // input; its Gram is exactly the Toeplitz matrix generated by g.
  Eigen::MatrixXd dense_tall() const;
};

BandedLowerToeplitz scatter_matrix(const BackscatterResponse& resp, int n,
                                   int dense_limit = kDefaultDenseLimit);
BandedLowerToeplitz difference_matrix(const GramSymbol& sym, int n,
                                      int dense_limit = kDefaultDenseLimit);

// Symmetric Toeplitz rendering G[i][j] = g_|i-j|. This is the matrix whose
// spectrum the generating function controls; it equals C^T C for the tall
// difference matrix.
Eigen::MatrixXd gram_matrix(const GramSymbol& sym, int n,
                            int dense_limit = kDefaultDenseLimit);

// Gram matrix of the first n received samples only: C_n^T C_n with the
// square difference matrix. Differs from gram_matrix in the trailing
// band x band corner where echoes have not yet left the fiber.
Eigen::MatrixXd windowed_gram_matrix(const GramSymbol& sym, int n,
                                     int dense_limit = kDefaultDenseLimit);

}  // namespace otdr
