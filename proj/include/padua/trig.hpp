#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace padua {

/// Reduce x modulo 2 into [-1, 1).
double wrap(double x);

/// Interleaved sine/cosine basis: sin(t*pi*x) for t > 0, cos(t*pi*x) for t <= 0.
double soc(int t, double x);

/// order-th derivative of soc(t, .) at x, by the analytic four-cycle of sin/cos.
double soc_deriv(int t, double x, int order);

/// Trigonometric polynomial of degree N in dimension d, coefficients over the
/// tensor-product soc basis in row-major index-tuple order (t_j = -N..N, last
/// axis fastest). theta has length (2N+1)^d.
struct TrigPoly {
  int degree = 0;
  int dim = 1;
  std::vector<double> theta;
};

std::size_t feature_count(int N, int d);

/// Flat position of the index tuple t (|t_j| <= N) in row-major order.
std::size_t feature_flat_index(std::span<const int> t, int N, int d);

/// Inverse of feature_flat_index.
std::vector<int> feature_index_tuple(std::size_t flat, int N, int d);

/// Tensor-product feature map: entry for (t_1..t_d) equals prod_j soc(t_j, x_j).
std::vector<double> feature_vector(int N, int d, std::span<const double> x);

/// Evaluate D^(alpha) [phi^T theta] at x with analytic per-factor derivatives.
double trig_eval(const TrigPoly& p, std::span<const double> x,
                 std::span<const int> alpha);

/// 1-d convenience overload.
double trig_eval(const TrigPoly& p, double x, int alpha = 0);

/// Dirichlet kernel sin((N+1/2)pi x)/sin(pi x/2); near the removable
/// singularity the explicit cosine sum 1 + 2 sum cos(t pi x) is used.
double dirichlet(int N, double x);

/// de la Vallee Poussin kernel: mean of Dirichlet kernels of degree N/2..N.
/// N must be even and >= 2.
double vallee_poussin(int N, double x);

}  // namespace padua
