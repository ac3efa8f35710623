#include "otdr/detection_sim.hpp"

#include "otdr/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

namespace otdr {

namespace {

constexpr double kLnHalf = -0.6931471805599453094172321214581766;

struct Accumulator {
  std::uint64_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++count;
    sum += x;
    sum_sq += x * x;
  }
};

// Runs `samples` draws split across workers with per-stream seeds and a
// fixed reduction order, so a given (seed, workers) pair is reproducible.
MCReport run_streams(std::uint64_t samples, std::uint64_t seed, int workers,
                     const std::function<double(GaussianStream&)>& draw) {
  if (samples == 0) throw std::invalid_argument("sample count must be positive");
  workers = std::max(workers, 1);

  std::vector<Accumulator> acc(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const std::uint64_t base = samples / static_cast<std::uint64_t>(workers);
  const std::uint64_t extra = samples % static_cast<std::uint64_t>(workers);
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t quota = base + (static_cast<std::uint64_t>(w) < extra ? 1 : 0);
    pool.emplace_back([&, w, quota]() {
      GaussianStream stream(mix_seed(seed, static_cast<std::uint64_t>(w)));
      Accumulator local;
      for (std::uint64_t i = 0; i < quota; ++i) local.add(draw(stream));
      acc[static_cast<std::size_t>(w)] = local;
    });
  }
  for (std::thread& t : pool) t.join();

  Accumulator total;
  for (const Accumulator& a : acc) {  // worker order, independent of scheduling
    total.count += a.count;
    total.sum += a.sum;
    total.sum_sq += a.sum_sq;
  }

  MCReport report;
  report.samples = samples;
  report.seed = seed;
  report.workers = workers;
  report.estimate = total.sum / static_cast<double>(total.count);
  if (total.count > 1) {
    const double n = static_cast<double>(total.count);
    const double var = std::max(total.sum_sq - total.sum * total.sum / n, 0.0) / (n - 1.0);
    report.std_error = std::sqrt(var / n);
  }
  return report;
}

// Nonzero difference taps as (delay, value) pairs; odd delays never appear.
std::vector<std::pair<int, double>> nonzero_taps(const GramSymbol& sym) {
  std::vector<std::pair<int, double>> taps;
  for (int k = 1; k <= sym.band(); ++k) {
    const double ck = sym.c[static_cast<std::size_t>(k) - 1];
    if (ck != 0.0) taps.emplace_back(k, ck);
  }
  return taps;
}

}  // namespace

LogProb coherent_overlap_log(std::span<const std::complex<double>> alpha,
                             std::span<const std::complex<double>> beta) {
  if (alpha.size() != beta.size())
    throw std::invalid_argument("coherent states have mismatched mode counts");
  double sq = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) sq += std::norm(alpha[i] - beta[i]);
  return LogProb{-sq};
}

LogProb helstrom_error(LogProb overlap_sq) {
  if (overlap_sq.value > 0.0)
    throw std::invalid_argument("squared overlap exceeds one");
  // P = z / (2 (1 + sqrt(1 - z))) with z = e^v; exact and finite in the log
  // domain for both z -> 1 and z -> 0.
  const double v = overlap_sq.value;
  const double root = std::sqrt(-std::expm1(v));
  return LogProb{kLnHalf + v - std::log1p(root)};
}

LogProb povm_error_log(std::span<const std::complex<double>> alpha,
                       const Eigen::MatrixXd& gram, double energy_per_use) {
  const auto n = static_cast<Eigen::Index>(alpha.size());
  if (gram.rows() != n || gram.cols() != n)
    throw std::invalid_argument("input length does not match the Gram matrix");
  Eigen::VectorXcd a(n);
  for (Eigen::Index i = 0; i < n; ++i) a(i) = alpha[static_cast<std::size_t>(i)];

  const double total_energy = a.squaredNorm();
  const double budget = energy_per_use * static_cast<double>(n);
  if (total_energy > budget * (1.0 + 1e-9) + 1e-12)
    throw std::invalid_argument("input energy exceeds the per-use budget");

  const double quad = std::max(std::real(a.dot(gram * a)), 0.0);
  return LogProb{kLnHalf - quad};
}

namespace {

// ln det(E Toeplitz(g) + I) by the Levinson-Durbin recursion. The matrix is
// Toeplitz with diagonal 1 + E g_0 and offsets E g_k, and SPD by
// construction, so every reflection coefficient stays inside (-1, 1).
double log_det_levinson(const GramSymbol& sym, int n, double energy) {
  const auto off = [&sym, energy](int k) {
    return k < static_cast<int>(sym.g.size())
               ? energy * sym.g[static_cast<std::size_t>(k)]
               : 0.0;
  };
  double log_sigma2 = std::log1p(off(0));  // ln sigma^2_0, diagonal 1 + E g_0
  double log_det = log_sigma2;
  if (n == 1) return log_det;

  double sigma2 = 1.0 + off(0);
  std::vector<double> phi(static_cast<std::size_t>(n), 0.0);
  std::vector<double> prev(static_cast<std::size_t>(n), 0.0);
  for (int k = 1; k < n; ++k) {
    double acc = off(k);
    for (int j = 1; j < k; ++j)
      acc -= prev[static_cast<std::size_t>(j)] * off(k - j);
    const double rho = acc / sigma2;
    phi[static_cast<std::size_t>(k)] = rho;
    for (int j = 1; j < k; ++j)
      phi[static_cast<std::size_t>(j)] =
          prev[static_cast<std::size_t>(j)] - rho * prev[static_cast<std::size_t>(k - j)];
    sigma2 *= 1.0 - rho * rho;
    log_sigma2 += std::log1p(-rho * rho);
    log_det += log_sigma2;
    std::swap(phi, prev);
  }
  return log_det;
}

}  // namespace

LogProb expected_error_determinant_log(const GramSymbol& sym, int n, double energy,
                                       DeterminantPath path, int dense_limit) {
  if (!(energy >= 0.0)) throw std::invalid_argument("energy must be non-negative");
  if (n < 1) throw std::invalid_argument("matrix dimension must be positive");
  if (path == DeterminantPath::levinson) {
    if (n > dense_limit)
      throw std::invalid_argument("n exceeds the configured dense limit");
    return LogProb{-log_det_levinson(sym, n, energy)};
  }
  const Eigen::MatrixXd g = gram_matrix(sym, n, dense_limit);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensolver failed to converge");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    acc += std::log1p(energy * std::max(solver.eigenvalues()(i), 0.0));
  return LogProb{-acc};
}

double transient_correction(const GramSymbol& sym) {
  double partial = 0.0;
  double acc = 0.0;
  // Receive time t < band sees only the taps with delay <= t - 1.
  for (int t = 1; t <= sym.band(); ++t) {
    acc += partial * partial;
    partial += sym.c[static_cast<std::size_t>(t) - 1];
  }
  return acc;
}

MCReport expected_error_mc(const GramSymbol& sym, int n, double energy,
                           std::uint64_t samples, std::uint64_t seed, int workers) {
  if (n < 1) throw std::invalid_argument("mode count must be positive");
  if (!(energy >= 0.0)) throw std::invalid_argument("energy must be non-negative");
  const auto taps = nonzero_taps(sym);
  const int band = sym.band();
  const double component_sigma = std::sqrt(energy / 2.0);

  return run_streams(samples, seed, workers, [=](GaussianStream& stream) {
    // <alpha, Toeplitz(g) alpha> = |c * alpha|^2 including the run-out, so
    // the quadratic form is a banded convolution, never a dense product.
    std::vector<std::complex<double>> echo(static_cast<std::size_t>(n + band));
    std::fill(echo.begin(), echo.end(), std::complex<double>(0.0, 0.0));
    double quad = 0.0;
    for (int i = 0; i < n; ++i) {
      const std::complex<double> a(component_sigma * stream.normal(),
                                   component_sigma * stream.normal());
      for (const auto& [delay, value] : taps)
        echo[static_cast<std::size_t>(i + delay)] += value * a;
    }
    for (const std::complex<double>& e : echo) quad += std::norm(e);
    return std::exp(-quad);
  });
}

MCReport homodyne_mc(double alpha_s, int n_pulses, std::uint64_t samples,
                     std::uint64_t seed, int workers) {
  if (!(alpha_s >= 0.0)) throw std::invalid_argument("alpha_s must be non-negative");
  if (n_pulses < 1) throw std::invalid_argument("pulse count must be positive");
  const double mean_attack = std::sqrt(2.0) * alpha_s;
  const double sigma = std::sqrt(0.5);
  const double threshold = 0.5 * mean_attack * n_pulses;

  return run_streams(samples, seed, workers, [=](GaussianStream& stream) {
    const bool attacked = stream.uniform() < 0.5;
    const double mean = attacked ? mean_attack : 0.0;
    double sum = 0.0;
    for (int i = 0; i < n_pulses; ++i) sum += mean + sigma * stream.normal();
    const bool decide_attack = sum > threshold;
    return decide_attack == attacked ? 0.0 : 1.0;
  });
}

MCReport homodyne_composite_mc(std::span<const double> alphas, int n_pulses,
                               std::uint64_t samples, std::uint64_t seed,
                               int workers) {
  if (alphas.empty()) throw std::invalid_argument("alpha list is empty");
  if (n_pulses < 1) throw std::invalid_argument("pulse count must be positive");
  double alpha_min = alphas[0];
  for (double a : alphas) {
    if (!(a >= 0.0)) throw std::invalid_argument("alpha_s must be non-negative");
    alpha_min = std::min(alpha_min, a);
  }
  // The deployed test targets the weakest attack; its threshold is reused
  // against every hypothesis.
  const double sigma = std::sqrt(0.5);
  const double threshold = 0.5 * std::sqrt(2.0) * alpha_min * n_pulses;

  MCReport worst;
  bool first = true;
  for (std::size_t h = 0; h <= alphas.size(); ++h) {
    const bool null_hypothesis = h == 0;
    const double mean = null_hypothesis ? 0.0 : std::sqrt(2.0) * alphas[h - 1];
    MCReport report =
        run_streams(samples, mix_seed(seed, 1000 + h), workers,
                    [=](GaussianStream& stream) {
                      double sum = 0.0;
                      for (int i = 0; i < n_pulses; ++i)
                        sum += mean + sigma * stream.normal();
                      const bool decide_attack = sum > threshold;
                      return decide_attack != null_hypothesis ? 0.0 : 1.0;
                    });
    report.seed = seed;
    if (first || report.estimate > worst.estimate) {
      worst = report;
      first = false;
    }
  }
  return worst;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double homodyne_error_analytic(double alpha_s, int n_pulses) {
  return normal_cdf(-alpha_s * std::sqrt(static_cast<double>(n_pulses)));
}

std::vector<std::complex<double>> constant_amplitude_input(int n, double energy) {
  return std::vector<std::complex<double>>(static_cast<std::size_t>(n),
                                           std::sqrt(energy));
}

std::vector<std::complex<double>> top_eigenvector_input(const Eigen::MatrixXd& gram,
                                                        double total_energy) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensolver failed to converge");
  const Eigen::VectorXd v = solver.eigenvectors().col(gram.rows() - 1);
  std::vector<std::complex<double>> input(static_cast<std::size_t>(gram.rows()));
  const double scale = std::sqrt(total_energy);
  for (Eigen::Index i = 0; i < gram.rows(); ++i)
    input[static_cast<std::size_t>(i)] = scale * v(i);
  return input;
}

}  // namespace otdr
