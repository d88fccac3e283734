#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "padua/design.hpp"
#include "padua/rng.hpp"
#include "padua/trig.hpp"

namespace padua {

using Point = std::vector<double>;

/// Query contract: x in [-1,1]^d plus a random source, returning one noisy
/// sample with E[y] = f(x) and sub-Gaussian noise independent across calls.
using Oracle = std::function<double(const Point&, Rng&)>;

struct PaduaConfig {
  long n = 0;              // total query budget
  int N = 0;               // trig degree; 0 selects N automatically
  double nu = 2.0;         // smoothness order
  int d = 1;
  double sigma = 0.1;      // sub-Gaussian noise scale
  double norm_bound = 1.0; // known bound on the target's C^nu norm
  double delta = 0.1;      // failure probability, reporting only
  std::uint64_t seed = 0;
  int design_max_iters = 4000;
  double design_tolerance = 1.0;  // leverage slack: certificate at p*(1+tol)
};

struct FitDiagnostics {
  bool design_certified = false;
  bool support_size_ok = true;
  double max_leverage = 0.0;
  int support_size = 0;
  double condition_number = 0.0;
  double ridge_lambda = 0.0;
  double beta_plus = 0.0;
  double beta_minus = 0.0;
};

struct FitResult {
  TrigPoly model;
  long queries_used = 0;
  std::uint64_t seed = 0;
  FitDiagnostics diag;
};

/// True when 16 * (2N+1)^d * loglog(max((2N+1)^d, 3)) < n.
bool budget_ok(int N, int d, long n);

/// N ~ (n * norm_bound^2 / sigma^2)^{1/(2 nu + d)} rounded to even, then
/// decremented by 2 until the budget precondition holds (minimum 2).
int choose_N(long n, double nu, int d, double norm_bound, double sigma);

/// Run the full active-sampling pipeline: cover, quasi-optimal design,
/// kernel decomposition, perturbed queries, ridge-stabilized least squares.
FitResult fit(const Oracle& oracle, const PaduaConfig& config);

double predict(const FitResult& r, const Point& x, const std::vector<int>& alpha);
double predict(const FitResult& r, double x, int alpha = 0);

/// Solve (X^T X + lambda I) theta = X^T y. X is row-major with `rows` rows;
/// lambda < 0 selects the default 1e-10 * trace(X^T X) / p.
std::vector<double> least_squares(const std::vector<double>& X, long rows,
                                  const std::vector<double>& y,
                                  double lambda = -1.0);

/// Flat binary model record (little-endian): fixed header plus the
/// coefficients. Its size is the prediction-phase space metric.
std::string serialize_fit(const FitResult& r);
FitResult deserialize_fit(const std::string& bytes);

}  // namespace padua
