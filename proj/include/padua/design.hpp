#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace padua {

/// Axis-aligned uniform grid covering [-1,1]^d so that every point of the
/// cube has a grid point within L1 distance epsilon.
struct CoverGrid {
  int dim = 1;
  double epsilon = 0.0;
  int points_per_axis = 0;
  std::vector<std::vector<double>> points;
};

/// Per-axis spacing h = 2/ceil(2d/epsilon) including both endpoints.
/// Throws "cover too large" above 10^7 points.
CoverGrid epsilon_cover(int d, double epsilon);

/// Discrete sampling distribution over candidate feature vectors together
/// with its information matrix Sigma = sum_i rho_i phi_i phi_i^T and the
/// leverage certificate max_i phi_i^T Sigma^{-1} phi_i <= 2p.
struct Design {
  std::vector<int> support;        // indices into the candidate list
  std::vector<double> weights;     // aligned with support, sums to 1
  double max_leverage = 0.0;       // over all candidates at return
  std::vector<double> info_matrix; // p x p, row-major
  int feature_dim = 0;
  bool certified = false;
  bool support_size_ok = true;
  int iterations = 0;
  double log_det = 0.0;
};

/// Frank-Wolfe (Fedorov-Wynn) iteration on the D-optimal objective.
/// Stops once max leverage <= p*(1+tolerance); tolerance 1.0 is the
/// quasi-optimality certificate (2p). Duplicate candidate rows are merged
/// before iterating. Throws on rank-deficient candidate sets.
Design compute_design(const std::vector<std::vector<double>>& features,
                      double tolerance, int max_iters);

/// ceil(n_tot * rho(x)) per support point.
std::vector<long> round_allocation(const Design& design, long n_tot);

/// Allowed support cardinality: 4 p loglog(max(p,3)).
double support_bound(int p);

void write_design_csv(const Design& design, const CoverGrid& cover,
                      const std::vector<long>& counts, std::ostream& out);

}  // namespace padua
