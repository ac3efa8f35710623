#pragma once

#include "otdr/fiber_model.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace otdr {

// Natural log of a probability. At fiber-scale pulse energies the error
// probabilities underflow doubles, so they cross every API in log form.
struct LogProb {
  double value = 0.0;  // <= 0

  double prob() const { return std::exp(value); }
};

// ln |<alpha|beta>|^2 = -sum_i |alpha_i - beta_i|^2 for n-mode coherent states.
LogProb coherent_overlap_log(std::span<const std::complex<double>> alpha,
                             std::span<const std::complex<double>> beta);

// Helstrom error for two equal-prior pure states with squared overlap z:
// (1/2)(1 - sqrt(1 - z)), evaluated as z / (2 (1 + sqrt(1 - z))) so the
// log stays finite when z underflows.
LogProb helstrom_error(LogProb overlap_sq);

// Error of the displace-to-vacuum receiver: ln(1/2) - <alpha, G alpha>.
// Rejects inputs that exceed the per-use energy budget.
LogProb povm_error_log(std::span<const std::complex<double>> alpha,
                       const Eigen::MatrixXd& gram, double energy_per_use);

// levinson factorizes the Toeplitz matrix E G + I through the
// Levinson-Durbin recursion, whose prediction-error variances multiply to
// the determinant; with log1p accumulation it keeps full relative accuracy
// even when E g is many orders below one.
enum class DeterminantPath { eigenvalues, levinson };

// ln of the codebook-averaged error term E exp(-<alpha, G_n alpha>) over
// i.i.d. circular complex Gaussian inputs of per-component variance E:
//   -sum_i ln(E lambda_i + 1) = -ln det(E G_n + I).
LogProb expected_error_determinant_log(const GramSymbol& sym, int n, double energy,
                                       DeterminantPath path = DeterminantPath::eigenvalues,
                                       int dense_limit = kDefaultDenseLimit);

// Sum of squared partial tap sums over the first `band` receive times. With
// the constant-amplitude input the windowed quadratic form splits exactly as
//   <1, G_win 1> = transient + (n - band) (sum_k c_k)^2,
// so subtracting it recovers f(0) from finite-n data.
double transient_correction(const GramSymbol& sym);

struct MCReport {
  double estimate = 0.0;
  double std_error = 0.0;  // sample std / sqrt(samples)
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  int workers = 1;
};

// Monte Carlo mean of exp(-<alpha, G_n alpha>) over the N^C(0, E) codebook.
// Deterministic for a fixed (seed, workers) pair.
MCReport expected_error_mc(const GramSymbol& sym, int n, double energy,
                           std::uint64_t samples, std::uint64_t seed,
                           int workers = 1);

// Equal-prior threshold test on the sum of n homodyne outcomes, which are
// N(0, 1/2) under the null and N(sqrt(2) alpha_s, 1/2) under the attack.
// The threshold sits at the midpoint.
MCReport homodyne_mc(double alpha_s, int n_pulses, std::uint64_t samples,
                     std::uint64_t seed, int workers = 1);

// Worst-case composite test: the threshold is tuned to the weakest listed
// amplitude, type-I error is measured under the null and type-II under each
// alternative; the largest of those rates is reported.
MCReport homodyne_composite_mc(std::span<const double> alphas, int n_pulses,
                               std::uint64_t samples, std::uint64_t seed,
                               int workers = 1);

// Exact error of the n-pulse midpoint test, Phi(-alpha_s sqrt(n)).
double homodyne_error_analytic(double alpha_s, int n_pulses);

double normal_cdf(double z);

std::vector<std::complex<double>> constant_amplitude_input(int n, double energy);

// Top eigenvector of G scaled to total energy n E, the input that attains
// the largest finite-n exponent.
std::vector<std::complex<double>> top_eigenvector_input(const Eigen::MatrixXd& gram,
                                                        double total_energy);

}  // namespace otdr
