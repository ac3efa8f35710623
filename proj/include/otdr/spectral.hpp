#pragma once

#include "otdr/fiber_model.hpp"

#include <span>
#include <utility>
#include <vector>

namespace otdr {

// Search and quadrature knobs shared by the spectral routines.
struct NumericsOptions {
  int xi_grid = 1 << 16;        // dense scan for symbol extrema
  int quadrature_nodes = 4096;  // uniform nodes on [0, 2pi)
  int dense_n_limit = kDefaultDenseLimit;
  std::vector<int> n_list = {50, 100, 200, 400};

  bool operator==(const NumericsOptions&) const = default;
};

struct SpectrumReport {
  int n = 0;
  std::vector<double> eigenvalues;  // ascending, clamped at zero
  double sym_min = 0.0;
  double sym_max = 0.0;
};

// Eigenvalues of the n x n Toeplitz rendering of the symbol. Every
// eigenvalue lies inside [min f, max f] up to rounding.
SpectrumReport toeplitz_eigenvalues(const GramSymbol& sym, int n,
                                    const NumericsOptions& opts = {});

struct SymbolExtremum {
  double xi = 0.0;
  double value = 0.0;
};

// Global extremum of f on [0, 2pi): dense grid scan, then golden-section
// refinement of the bracketing interval. f is a trigonometric polynomial of
// degree < band, so a grid finer than the fastest oscillation brackets the
// global extremum.
SymbolExtremum symbol_supremum(const GramSymbol& sym, int grid = 1 << 16);
SymbolExtremum symbol_infimum(const GramSymbol& sym, int grid = 1 << 16);

enum class SzegoFunctional {
  identity,      // F(x) = x
  log1p_scaled,  // F(x) = ln(1 + E x)
};

struct SzegoResult {
  SzegoFunctional functional = SzegoFunctional::identity;
  double energy = 0.0;  // the E in ln(1 + E x); ignored for identity
  std::vector<std::pair<int, double>> finite_n;  // (n, (1/n) sum_i F(lambda_i))
  double limit = 0.0;   // (1/2pi) int_0^2pi F(f(xi)) dxi
  int quadrature_nodes = 0;
};

// (1/2pi) int F(f(xi)) dxi by the uniform rectangle rule, which is
// spectrally accurate for smooth periodic integrands.
double szego_functional(const GramSymbol& sym, SzegoFunctional functional,
                        double energy, int nodes = 4096);

// Finite-n eigenvalue averages (1/n) sum_i F(lambda_i) next to the
// quadrature limit they converge to.
SzegoResult szego_convergence(const GramSymbol& sym, SzegoFunctional functional,
                              double energy, std::span<const int> n_list,
                              const NumericsOptions& opts = {});

}  // namespace otdr
