#include "otdr/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace otdr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double raw_symbol(const GramSymbol& sym, double xi) {
  double f = sym.g.empty() ? 0.0 : sym.g[0];
  for (std::size_t k = 1; k < sym.g.size(); ++k)
    f += 2.0 * sym.g[k] * std::cos(static_cast<double>(k) * xi);
  return f;
}

// Golden-section refinement of an extremum bracketed on [lo, hi].
double golden_refine(const GramSymbol& sym, double lo, double hi, bool maximize) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = raw_symbol(sym, x1);
  double f2 = raw_symbol(sym, x2);
  for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
    const bool pick_left = maximize ? (f1 > f2) : (f1 < f2);
    if (pick_left) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = raw_symbol(sym, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = raw_symbol(sym, x2);
    }
  }
  return 0.5 * (a + b);
}

SymbolExtremum symbol_extremum(const GramSymbol& sym, int grid, bool maximize) {
  if (grid < 16) throw std::invalid_argument("extremum grid too coarse");
  bool all_zero = true;
  for (double gk : sym.g) all_zero = all_zero && gk == 0.0;
  if (all_zero) return {0.0, 0.0};

  // A degree-(band-1) trigonometric polynomial needs a few samples per
  // oscillation to bracket its global extremum.
  const int points = std::max(grid, 16 * static_cast<int>(sym.g.size()));
  const double h = kTwoPi / points;
  int best = 0;
  double best_f = raw_symbol(sym, 0.0);
  for (int i = 1; i < points; ++i) {
    const double f = raw_symbol(sym, i * h);
    if (maximize ? (f > best_f) : (f < best_f)) {
      best_f = f;
      best = i;
    }
  }
  double xi = golden_refine(sym, (best - 1) * h, (best + 1) * h, maximize);
  double value = raw_symbol(sym, xi);
  if (maximize ? (best_f > value) : (best_f < value)) {
    xi = best * h;
    value = best_f;
  }
  if (xi < 0.0) xi += kTwoPi;
  if (xi >= kTwoPi) xi -= kTwoPi;
  // f is a squared magnitude; tiny negative values are rounding noise.
  return {xi, std::max(value, 0.0)};
}

std::vector<double> toeplitz_eigenvalues_raw(const GramSymbol& sym, int n,
                                             int dense_limit, bool residual_check) {
  Eigen::MatrixXd g = gram_matrix(sym, n, dense_limit);
  if (!residual_check) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("eigensolver failed to converge");
    return std::vector<double>(solver.eigenvalues().data(),
                               solver.eigenvalues().data() + n);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensolver failed to converge");
  const double scale = std::max(g.cwiseAbs().maxCoeff() * n, 1e-300);
  for (int idx : {0, n - 1}) {
    const double lambda = solver.eigenvalues()(idx);
    const Eigen::VectorXd v = solver.eigenvectors().col(idx);
    const double residual = (g * v - lambda * v).norm();
    if (residual > 1e-8 * scale)
      throw std::runtime_error("eigenpair residual exceeds tolerance");
  }
  return std::vector<double>(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + n);
}

double apply_functional(SzegoFunctional functional, double energy, double x) {
  switch (functional) {
    case SzegoFunctional::identity:
      return x;
    case SzegoFunctional::log1p_scaled:
      return std::log1p(energy * x);
  }
  throw std::invalid_argument("unknown Szego functional");
}

}  // namespace

SpectrumReport toeplitz_eigenvalues(const GramSymbol& sym, int n,
                                    const NumericsOptions& opts) {
  SpectrumReport report;
  report.n = n;
  report.eigenvalues = toeplitz_eigenvalues_raw(sym, n, opts.dense_n_limit, true);
  for (double& lambda : report.eigenvalues) lambda = std::max(lambda, 0.0);
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end());
  report.sym_min = symbol_infimum(sym, opts.xi_grid).value;
  report.sym_max = symbol_supremum(sym, opts.xi_grid).value;
  return report;
}

SymbolExtremum symbol_supremum(const GramSymbol& sym, int grid) {
  return symbol_extremum(sym, grid, true);
}

SymbolExtremum symbol_infimum(const GramSymbol& sym, int grid) {
  return symbol_extremum(sym, grid, false);
}

double szego_functional(const GramSymbol& sym, SzegoFunctional functional,
                        double energy, int nodes) {
  if (nodes < 64) throw std::invalid_argument("quadrature needs at least 64 nodes");
  if (!(energy >= 0.0)) throw std::invalid_argument("energy must be non-negative");
  // Uniform rectangle rule on the period; exact for trigonometric
  // polynomials of degree < nodes and spectrally accurate otherwise.
  double acc = 0.0;
  for (int i = 0; i < nodes; ++i)
    acc += apply_functional(functional, energy,
                            eval_symbol(sym, kTwoPi * i / nodes));
  return acc / nodes;
}

SzegoResult szego_convergence(const GramSymbol& sym, SzegoFunctional functional,
                              double energy, std::span<const int> n_list,
                              const NumericsOptions& opts) {
  SzegoResult result;
  result.functional = functional;
  result.energy = energy;
  result.quadrature_nodes = opts.quadrature_nodes;
  result.limit = szego_functional(sym, functional, energy, opts.quadrature_nodes);
  for (int n : n_list) {
    const std::vector<double> lambdas =
        toeplitz_eigenvalues_raw(sym, n, opts.dense_n_limit, false);
    double acc = 0.0;
    for (double lambda : lambdas)
      acc += apply_functional(functional, energy, std::max(lambda, 0.0));
    result.finite_n.emplace_back(n, acc / n);
  }
  return result;
}

}  // namespace otdr
