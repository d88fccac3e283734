#include "padua/design.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

#include "padua/errors.hpp"

namespace padua {

double support_bound(int p) {
  const double q = std::max(p, 3);
  return 4.0 * p * std::log(std::log(q));
}

CoverGrid epsilon_cover(int d, double epsilon) {
  if (d < 1 || d > 3) throw ValidationError("epsilon_cover: d must be in {1,2,3}");
  if (!(epsilon > 0.0) || epsilon > 2.0)
    throw ValidationError("epsilon_cover: epsilon must be in (0,2]");
  const long cells = static_cast<long>(std::ceil(2.0 * d / epsilon));
  const long per_axis = cells + 1;
  double total = 1.0;
  for (int j = 0; j < d; ++j) total *= static_cast<double>(per_axis);
  if (total > 1e7) throw ValidationError("epsilon_cover: cover too large");

  CoverGrid cover;
  cover.dim = d;
  cover.epsilon = epsilon;
  cover.points_per_axis = static_cast<int>(per_axis);
  std::vector<double> axis(static_cast<std::size_t>(per_axis));
  for (long i = 0; i < per_axis; ++i)
    axis[static_cast<std::size_t>(i)] =
        static_cast<double>(2 * i - cells) / static_cast<double>(cells);
  const long n_points = static_cast<long>(total);
  cover.points.reserve(static_cast<std::size_t>(n_points));
  for (long flat = 0; flat < n_points; ++flat) {
    std::vector<double> pt(static_cast<std::size_t>(d));
    long rem = flat;
    for (int j = d - 1; j >= 0; --j) {
      pt[static_cast<std::size_t>(j)] = axis[static_cast<std::size_t>(rem % per_axis)];
      rem /= per_axis;
    }
    cover.points.push_back(std::move(pt));
  }
  return cover;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kRidge = 1e-10;

// Leverage of every candidate row under Sigma (ridge-stabilized).
VectorXd leverages(const MatrixXd& phi, const MatrixXd& sigma, double* log_det) {
  MatrixXd reg = sigma;
  reg.diagonal().array() += kRidge;
  Eigen::LDLT<MatrixXd> ldlt(reg);
  if (ldlt.info() != Eigen::Success)
    throw ValidationError("compute_design: degenerate feature set");
  if (log_det) *log_det = ldlt.vectorD().array().max(1e-300).log().sum();
  MatrixXd solved = ldlt.solve(phi.transpose());  // p x k
  return (phi.transpose().cwiseProduct(solved)).colwise().sum().transpose();
}

}  // namespace

Design compute_design(const std::vector<std::vector<double>>& features,
                      double tolerance, int max_iters) {
  if (features.empty()) throw ValidationError("compute_design: no features");
  const int p = static_cast<int>(features.front().size());
  if (p < 1) throw ValidationError("compute_design: empty feature vectors");

  // Merge exact duplicates, keeping the first occurrence as representative.
  std::map<std::vector<double>, int> seen;
  std::vector<int> rep;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (static_cast<int>(features[i].size()) != p)
      throw ValidationError("compute_design: ragged feature list");
    auto [it, inserted] = seen.emplace(features[i], static_cast<int>(i));
    if (inserted) rep.push_back(static_cast<int>(i));
  }
  const int k = static_cast<int>(rep.size());
  if (k < p) throw ValidationError("compute_design: degenerate feature set");

  MatrixXd phi(k, p);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < p; ++c)
      phi(r, c) = features[static_cast<std::size_t>(rep[static_cast<std::size_t>(r)])]
                          [static_cast<std::size_t>(c)];

  // Greedy well-conditioned start: pivoted Gram-Schmidt for p independent
  // rows, then p more rows by largest leverage under the uniform seed.
  std::vector<int> chosen;
  {
    MatrixXd resid = phi;
    std::vector<bool> used(static_cast<std::size_t>(k), false);
    const double scale = phi.rowwise().norm().maxCoeff();
    for (int step = 0; step < p; ++step) {
      int best = -1;
      double best_norm = 0.0;
      for (int r = 0; r < k; ++r) {
        if (used[static_cast<std::size_t>(r)]) continue;
        const double nr = resid.row(r).norm();
        if (nr > best_norm) {
          best_norm = nr;
          best = r;
        }
      }
      if (best < 0 || best_norm < 1e-10 * scale)
        throw ValidationError("compute_design: degenerate feature set");
      used[static_cast<std::size_t>(best)] = true;
      chosen.push_back(best);
      const VectorXd dir = resid.row(best).transpose().normalized();
      resid -= (resid * dir) * dir.transpose();
    }
    MatrixXd sigma = MatrixXd::Zero(p, p);
    for (int r : chosen)
      sigma += phi.row(r).transpose() * phi.row(r) / static_cast<double>(p);
    VectorXd lev = leverages(phi, sigma, nullptr);
    for (int extra = 0; extra < p; ++extra) {
      int best = -1;
      double best_lev = -1.0;
      for (int r = 0; r < k; ++r) {
        if (used[static_cast<std::size_t>(r)]) continue;
        if (lev(r) > best_lev) {
          best_lev = lev(r);
          best = r;
        }
      }
      if (best < 0) break;
      used[static_cast<std::size_t>(best)] = true;
      chosen.push_back(best);
    }
  }

  VectorXd w = VectorXd::Zero(k);
  for (int r : chosen) w(r) = 1.0 / static_cast<double>(chosen.size());

  MatrixXd sigma = MatrixXd::Zero(p, p);
  for (int r = 0; r < k; ++r)
    if (w(r) > 0.0) sigma += w(r) * phi.row(r).transpose() * phi.row(r);

  const double threshold = p * (1.0 + tolerance);
  Design out;
  out.feature_dim = p;
  double prev_log_det = -std::numeric_limits<double>::infinity();
  double max_lev = 0.0;
  int iter = 0;
  for (; iter < max_iters; ++iter) {
    double log_det = 0.0;
    VectorXd lev = leverages(phi, sigma, &log_det);
    // The D-optimal objective is non-decreasing along exact line steps.
    if (log_det + 1e-9 < prev_log_det)
      throw ValidationError("compute_design: objective decreased");
    prev_log_det = log_det;
    out.log_det = log_det;
    int arg = 0;
    max_lev = lev.maxCoeff(&arg);
    if (max_lev <= threshold) {
      out.certified = true;
      break;
    }
    const double gamma = (max_lev / p - 1.0) / (max_lev - 1.0);
    w *= (1.0 - gamma);
    w(arg) += gamma;
    sigma *= (1.0 - gamma);
    sigma += gamma * phi.row(arg).transpose() * phi.row(arg);
    if ((iter + 1) % 64 == 0) {
      // Refresh against drift from the incremental updates.
      sigma.setZero();
      for (int r = 0; r < k; ++r)
        if (w(r) > 0.0) sigma += w(r) * phi.row(r).transpose() * phi.row(r);
    }
  }
  out.iterations = iter;
  out.max_leverage = max_lev;

  // Prune negligible weights and re-verify the certificate.
  const double prune = 1.0 / (support_bound(p) * 4.0);
  VectorXd pruned = w;
  for (int r = 0; r < k; ++r)
    if (pruned(r) < prune) pruned(r) = 0.0;
  const double mass = pruned.sum();
  if (mass > 0.0) {
    pruned /= mass;
    MatrixXd sig2 = MatrixXd::Zero(p, p);
    for (int r = 0; r < k; ++r)
      if (pruned(r) > 0.0) sig2 += pruned(r) * phi.row(r).transpose() * phi.row(r);
    VectorXd lev2 = leverages(phi, sig2, nullptr);
    const double max2 = lev2.maxCoeff();
    if (!out.certified || max2 <= 2.0 * p) {
      w = pruned;
      sigma = sig2;
      out.max_leverage = max2;
      if (out.certified) out.certified = max2 <= 2.0 * p;
    }
    // else: pruning would break the certificate; keep the unpruned weights.
  }

  int support_size = 0;
  for (int r = 0; r < k; ++r)
    if (w(r) > 0.0) ++support_size;
  out.support_size_ok = support_size <= support_bound(p);

  out.support.reserve(static_cast<std::size_t>(support_size));
  out.weights.reserve(static_cast<std::size_t>(support_size));
  for (int r = 0; r < k; ++r) {
    if (w(r) > 0.0) {
      out.support.push_back(rep[static_cast<std::size_t>(r)]);
      out.weights.push_back(w(r));
    }
  }
  out.info_matrix.assign(static_cast<std::size_t>(p) * p, 0.0);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      out.info_matrix[static_cast<std::size_t>(i) * p + static_cast<std::size_t>(j)] =
          sigma(i, j);
  return out;
}

std::vector<long> round_allocation(const Design& design, long n_tot) {
  if (n_tot < 1) throw ValidationError("round_allocation: n_tot must be >= 1");
  std::vector<long> counts(design.weights.size());
  for (std::size_t i = 0; i < design.weights.size(); ++i)
    counts[i] = static_cast<long>(
        std::ceil(static_cast<double>(n_tot) * design.weights[i] - 1e-12));
  return counts;
}

void write_design_csv(const Design& design, const CoverGrid& cover,
                      const std::vector<long>& counts, std::ostream& out) {
  out << "x1";
  for (int j = 1; j < cover.dim; ++j) out << ",x" << j + 1;
  out << ",weight,count\n";
  char buf[64];
  for (std::size_t i = 0; i < design.support.size(); ++i) {
    const auto& pt = cover.points[static_cast<std::size_t>(design.support[i])];
    for (std::size_t j = 0; j < pt.size(); ++j) {
      std::snprintf(buf, sizeof(buf), j ? ",%.17g" : "%.17g", pt[j]);
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.17g,%ld\n", design.weights[i],
                  counts.empty() ? 0L : counts[i]);
    out << buf;
  }
}

}  // namespace padua
