#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "padua/rng.hpp"

namespace padua {

enum class KernelKind { Dirichlet, ValleePoussin, Custom };

/// Kernel tabulated on M = max(4096, 64 N) equally spaced points of [-1, 1].
/// Known kinds evaluate off-grid through their closed form; custom tables
/// fall back to linear interpolation.
struct KernelTable {
  KernelKind kind = KernelKind::Custom;
  int degree = 0;
  std::vector<double> grid;
  std::vector<double> values;

  double eval(double x) const;
};

KernelTable make_dirichlet_table(int N);

/// Odd N is rounded up to N + 1 (the kernel needs an even degree).
KernelTable make_vallee_poussin_table(int N);

/// Custom table on the standard grid for `points` samples of a callable.
KernelTable make_custom_table(const std::function<double(double)>& f,
                              int points = 4096);

/// Trapezoid value of (1/2) * integral of |k| over [-1,1] on the kernel grid
/// (normalized measure dmu = dx/2).
double l1_norm(const KernelTable& k);

/// Split of a signed kernel into two probability densities with respect to
/// dmu = dx/2 and mixing weights: k = beta_plus * plus - beta_minus * minus.
struct KernelDecomposition {
  int degree = 0;
  std::vector<double> grid;
  std::vector<double> plus_density;
  std::vector<double> minus_density;
  std::vector<double> plus_cdf;
  std::vector<double> minus_cdf;
  double beta_plus = 0.0;
  double beta_minus = 0.0;
};

/// Throws if the negative part is degenerate ("kernel is nonnegative").
KernelDecomposition decompose(const KernelTable& k);

enum class Sign { Plus, Minus };

/// Inverse-transform draw from the tabulated density (linear interpolation
/// of the CDF between grid knots). Returns a value in [-1, 1].
double sample_eta(const KernelDecomposition& dec, Sign which, Rng& rng);

/// Tensor-product decomposition of V_{N,d}(x) = prod_j V_N(x_j). The positive
/// and negative parts group the per-axis sign patterns by parity, so per-axis
/// draws with pattern bookkeeping sample the d-dimensional split exactly.
struct TensorDecomposition {
  KernelDecomposition base;
  int dim = 1;
  double beta_plus = 0.0;
  double beta_minus = 0.0;
};

TensorDecomposition tensorize(KernelDecomposition base, int d);

std::vector<double> sample_eta(const TensorDecomposition& dec, Sign which,
                               Rng& rng);

/// Trapezoid approximation of (1/2) * integral f(y) k(x - y) dy with the
/// kernel argument wrapped periodically.
double circular_convolve(const std::function<double(double)>& f,
                         const KernelTable& k, double x);

/// Two-column CSV (x,value) with a header row.
void write_kernel_csv(const KernelTable& k, std::ostream& out);

}  // namespace padua
