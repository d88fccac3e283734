#include "padua/hard_instances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

#include "padua/errors.hpp"

namespace padua {

namespace {

// exp(g) with g = 1/(r^2 - 1) underflows long before the rational prefactors
// of the derivatives can blow up, so everything is flushed to zero there.
constexpr double kExpCutoff = -700.0;

double sq_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

// Value and the first two derivative tensors of Psi at x, from the closed
// chain rule for Psi = exp(g), g = 1/(r^2-1):
//   d_i g = -2 x_i / (r^2-1)^2
//   d_ij g = -2 delta_ij / (r^2-1)^2 + 8 x_i x_j / (r^2-1)^3.
struct MollCore {
  double value = 0.0;
  double grad[3] = {0, 0, 0};
  double hess[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
};

MollCore mollifier_core(std::span<const double> x) {
  MollCore out;
  const double r2 = sq_norm(x);
  if (r2 >= 1.0) return out;
  const double den = r2 - 1.0;  // negative
  const double g = 1.0 / den;
  if (g < kExpCutoff) return out;
  const double e = std::exp(g);
  out.value = e;
  const std::size_t d = x.size();
  double dg[3];
  for (std::size_t i = 0; i < d; ++i) {
    dg[i] = -2.0 * x[i] / (den * den);
    out.grad[i] = e * dg[i];
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double ddg = (i == j ? -2.0 / (den * den) : 0.0) +
                         8.0 * x[i] * x[j] / (den * den * den);
      out.hess[i][j] = e * (dg[i] * dg[j] + ddg);
    }
  return out;
}

int total_order(std::span<const int> alpha) {
  int s = 0;
  for (int a : alpha) {
    if (a < 0) throw ValidationError("mollifier_eval: negative alpha");
    s += a;
  }
  return s;
}

}  // namespace

double mollifier_eval(std::span<const double> x, std::span<const int> alpha) {
  if (x.empty() || x.size() > 3)
    throw ValidationError("mollifier_eval: dimension must be in {1,2,3}");
  if (alpha.size() != x.size())
    throw ValidationError("mollifier_eval: alpha size != dimension");
  const int order = total_order(alpha);
  if (order <= 2) {
    const MollCore core = mollifier_core(x);
    if (order == 0) return core.value;
    if (order == 1) {
      for (std::size_t i = 0; i < x.size(); ++i)
        if (alpha[i] == 1) return core.grad[i];
    }
    int first = -1, second = -1;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (alpha[i] == 2) return core.hess[i][i];
      if (alpha[i] == 1) {
        if (first < 0)
          first = static_cast<int>(i);
        else
          second = static_cast<int>(i);
      }
    }
    return core.hess[first][second];
  }
  // Orders above 2: central finite difference on one axis of a lower order.
  const double h = 1e-4;
  int axis = 0;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] > alpha[static_cast<std::size_t>(axis)]) axis = static_cast<int>(i);
  std::vector<int> lower(alpha.begin(), alpha.end());
  lower[static_cast<std::size_t>(axis)] -= 1;
  std::vector<double> xp(x.begin(), x.end()), xm(x.begin(), x.end());
  xp[static_cast<std::size_t>(axis)] += h;
  xm[static_cast<std::size_t>(axis)] -= h;
  return (mollifier_eval(xp, lower) - mollifier_eval(xm, lower)) / (2.0 * h);
}

double mollifier_eval(double x, int alpha) {
  const double xs[1] = {x};
  const int as[1] = {alpha};
  return mollifier_eval(std::span<const double>(xs), std::span<const int>(as));
}

double squeezed(double rho, std::span<const double> x,
                std::span<const int> alpha) {
  if (!(rho > 0.0)) throw ValidationError("squeezed: rho must be positive");
  std::vector<double> scaled(x.begin(), x.end());
  for (double& v : scaled) v /= rho;
  const int order = total_order(alpha);
  return std::pow(rho, -order) * mollifier_eval(scaled, alpha);
}

double squeezed(double rho, double x, int alpha) {
  const double xs[1] = {x};
  const int as[1] = {alpha};
  return squeezed(rho, std::span<const double>(xs), std::span<const int>(as));
}

namespace {

// Grid max of |D^alpha Psi| over the axis segment [-1,1] (1-d) or a product
// grid (d > 1); the mollifier is even so one orthant would do, but the grids
// are cheap at this size.
double grid_sup(int d, int points_per_axis,
                const std::function<double(std::span<const double>)>& f) {
  std::vector<double> axis(static_cast<std::size_t>(points_per_axis));
  for (int i = 0; i < points_per_axis; ++i)
    axis[static_cast<std::size_t>(i)] =
        -1.0 + 2.0 * i / static_cast<double>(points_per_axis - 1);
  long total = 1;
  for (int j = 0; j < d; ++j) total *= points_per_axis;
  double best = 0.0;
  std::vector<double> pt(static_cast<std::size_t>(d));
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    for (int j = d - 1; j >= 0; --j) {
      pt[static_cast<std::size_t>(j)] =
          axis[static_cast<std::size_t>(rem % points_per_axis)];
      rem /= points_per_axis;
    }
    best = std::max(best, std::abs(f(pt)));
  }
  return best;
}

std::vector<std::vector<int>> multi_indices(int d, int order) {
  std::vector<std::vector<int>> out;
  if (d == 1) {
    out.push_back({order});
    return out;
  }
  for (int head = order; head >= 0; --head) {
    for (auto& tail : multi_indices(d - 1, order - head)) {
      std::vector<int> idx{head};
      idx.insert(idx.end(), tail.begin(), tail.end());
      out.push_back(std::move(idx));
    }
  }
  return out;
}

}  // namespace

double mollifier_cnu_norm(double nu, int d) {
  if (!(nu > 0.0)) throw ValidationError("mollifier_cnu_norm: nu must be positive");
  if (d < 1 || d > 3) throw ValidationError("mollifier_cnu_norm: d must be in {1,2,3}");
  const int nu_star = static_cast<int>(std::ceil(nu - 1.0));
  const int fine = d == 1 ? 16384 : (d == 2 ? 192 : 48);
  double norm = 0.0;
  for (int order = 0; order <= nu_star; ++order) {
    for (const auto& idx : multi_indices(d, order)) {
      norm = std::max(norm, grid_sup(d, fine, [&idx](std::span<const double> pt) {
        return mollifier_eval(pt, idx);
      }));
    }
  }
  // Hoelder seed of the top derivatives, estimated on grid pairs. For the
  // exponent-1 case adjacent pairs recover the next derivative's sup.
  const double q = nu - nu_star;
  const int coarse = d == 1 ? 1024 : (d == 2 ? 48 : 16);
  for (const auto& idx : multi_indices(d, nu_star)) {
    auto df = [&idx](std::span<const double> pt) {
      return mollifier_eval(pt, idx);
    };
    double seed = 0.0;
    if (d == 1) {
      const int m = 16384;
      std::vector<double> vals(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) {
        const double pt[1] = {-1.0 + 2.0 * i / (m - 1.0)};
        vals[static_cast<std::size_t>(i)] = df(pt);
      }
      const double h = 2.0 / (m - 1.0);
      for (int i = 0; i + 1 < m; ++i)
        seed = std::max(seed, std::abs(vals[static_cast<std::size_t>(i + 1)] -
                                       vals[static_cast<std::size_t>(i)]) /
                                  std::pow(h, q));
      // Coarse all-pairs scan for fractional exponents.
      if (q < 1.0) {
        const int c = 512;
        std::vector<double> cv(static_cast<std::size_t>(c));
        for (int i = 0; i < c; ++i) {
          const double pt[1] = {-1.0 + 2.0 * i / (c - 1.0)};
          cv[static_cast<std::size_t>(i)] = df(pt);
        }
        for (int i = 0; i < c; ++i)
          for (int j = i + 1; j < c; ++j) {
            const double dist = 2.0 * (j - i) / (c - 1.0);
            seed = std::max(seed, std::abs(cv[static_cast<std::size_t>(j)] -
                                           cv[static_cast<std::size_t>(i)]) /
                                      std::pow(dist, q));
          }
      }
    } else {
      // Axis-adjacent differences on a product grid.
      std::vector<double> axis(static_cast<std::size_t>(coarse));
      for (int i = 0; i < coarse; ++i)
        axis[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / (coarse - 1.0);
      const double h = 2.0 / (coarse - 1.0);
      long total = 1;
      for (int j = 0; j < d; ++j) total *= coarse;
      std::vector<double> pt(static_cast<std::size_t>(d));
      for (long flat = 0; flat < total; ++flat) {
        long rem = flat;
        for (int j = d - 1; j >= 0; --j) {
          pt[static_cast<std::size_t>(j)] =
              axis[static_cast<std::size_t>(rem % coarse)];
          rem /= coarse;
        }
        const double here = df(pt);
        for (int j = 0; j < d; ++j) {
          if (pt[static_cast<std::size_t>(j)] + h > 1.0) continue;
          std::vector<double> shifted = pt;
          shifted[static_cast<std::size_t>(j)] += h;
          seed = std::max(seed, std::abs(df(shifted) - here) / std::pow(h, q));
        }
      }
    }
    norm = std::max(norm, seed);
  }
  return norm;
}

namespace {

std::vector<double> cell_center(int K, int d, std::span<const int> cell) {
  std::vector<double> q(static_cast<std::size_t>(d));
  const double rho = 2.0 / K;
  for (int j = 0; j < d; ++j) {
    if (cell[static_cast<std::size_t>(j)] < 0 ||
        cell[static_cast<std::size_t>(j)] >= K)
      throw ValidationError("hard instance: cell index out of range");
    q[static_cast<std::size_t>(j)] =
        -1.0 + rho * (cell[static_cast<std::size_t>(j)] + 0.5);
  }
  return q;
}

// Bump of the given amplitude centered at q, squeezed to the ball inscribed
// in a cell of side rho (radius rho/2) so it vanishes on the cell boundary.
double bump_eval(const std::vector<double>& q, double rho, double amplitude,
                 std::span<const double> x, std::span<const int> alpha) {
  std::vector<double> rel(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) rel[j] = x[j] - q[j];
  return amplitude * squeezed(rho / 2.0, rel, alpha);
}

}  // namespace

HardPair hard_pair(int K, double psi0, double nu, int d,
                   std::span<const int> cell) {
  if (K < 1) throw ValidationError("hard_pair: K must be >= 1");
  if (!(psi0 > 0.0)) throw ValidationError("hard_pair: psi0 must be positive");
  if (static_cast<int>(cell.size()) != d)
    throw ValidationError("hard_pair: cell index size != d");
  HardPair hp;
  hp.cells_per_axis = K;
  hp.rho = 2.0 / K;
  hp.psi0 = psi0;
  hp.nu = nu;
  hp.psi_norm = mollifier_cnu_norm(nu, d);
  hp.amplitude = psi0 * std::pow(hp.rho, nu) / hp.psi_norm;
  hp.cell_center = cell_center(K, d, cell);

  hp.f1.dim = d;
  hp.f1.nu = nu;
  hp.f1.norm_bound = 0.0;
  hp.f1.eval_fn = [](std::span<const double>, std::span<const int>) {
    return 0.0;
  };

  hp.f2.dim = d;
  hp.f2.nu = nu;
  hp.f2.norm_bound = psi0;
  hp.f2.eval_fn = [q = hp.cell_center, rho = hp.rho, amp = hp.amplitude](
                      std::span<const double> x, std::span<const int> alpha) {
    return bump_eval(q, rho, amp, x, alpha);
  };
  return hp;
}

PackingFamily packing_family(int K, double nu, int d, int count) {
  if (K < 1) throw ValidationError("packing_family: K must be >= 1");
  if (count < 1 || count > 1024)
    throw ValidationError("packing_family: count must be in [1,1024]");
  double cells = std::pow(static_cast<double>(K), d);
  if (cells <= 62.0 && count > (1L << static_cast<long>(cells)))
    throw ValidationError("packing_family: count exceeds 2^(K^d)");

  PackingFamily fam;
  fam.cells_per_axis = K;
  fam.dim = d;
  fam.nu = nu;
  fam.rho = 2.0 / K;
  fam.psi_norm = mollifier_cnu_norm(nu, d);
  fam.amplitude = std::pow(fam.rho, nu) / fam.psi_norm;
  fam.separation = fam.amplitude * mollifier_eval(0.0, 0);

  const long n_cells = static_cast<long>(cells);
  std::vector<std::vector<double>> centers;
  centers.reserve(static_cast<std::size_t>(n_cells));
  for (long flat = 0; flat < n_cells; ++flat) {
    std::vector<int> idx(static_cast<std::size_t>(d));
    long rem = flat;
    for (int j = d - 1; j >= 0; --j) {
      idx[static_cast<std::size_t>(j)] = static_cast<int>(rem % K);
      rem /= K;
    }
    centers.push_back(cell_center(K, d, idx));
  }

  for (int j = 0; j < count; ++j) {
    GroundTruth g;
    g.dim = d;
    g.nu = nu;
    g.norm_bound = 1.0;
    g.eval_fn = [bits = static_cast<std::uint64_t>(j), centers, rho = fam.rho,
                 amp = fam.amplitude, K, d](std::span<const double> x,
                                            std::span<const int> alpha) {
      // Locate the cell containing x; only its bump can be nonzero there.
      long flat = 0;
      for (int jj = 0; jj < d; ++jj) {
        long c = static_cast<long>(std::floor((x[static_cast<std::size_t>(jj)] + 1.0) / rho));
        c = std::clamp(c, 0L, static_cast<long>(K - 1));
        flat = flat * K + c;
      }
      if (flat >= 64 || ((bits >> flat) & 1ULL) == 0) return 0.0;
      std::vector<double> rel(x.size());
      for (std::size_t jj = 0; jj < x.size(); ++jj)
        rel[jj] = x[jj] - centers[static_cast<std::size_t>(flat)][jj];
      return amp * squeezed(rho / 2.0, rel, alpha);
    };
    fam.members.push_back(std::move(g));
  }
  return fam;
}

KlBudget kl_budget(long n, int K, double psi0, double sigma, double nu, int d,
                   double psi_norm) {
  if (!(sigma > 0.0)) throw ValidationError("kl_budget: sigma must be positive");
  if (K < 1) throw ValidationError("kl_budget: K must be >= 1");
  if (!(psi_norm > 0.0))
    throw ValidationError("kl_budget: psi_norm must be positive");
  KlBudget out;
  const double rho = 2.0 / K;
  const double cells = std::pow(static_cast<double>(K), d);
  out.kl = static_cast<double>(n) * psi0 * psi0 * std::pow(rho, 2.0 * nu) /
           (2.0 * cells * psi_norm * psi_norm * sigma * sigma);
  out.min_cells = std::pow(
      psi0 * psi0 * static_cast<double>(n) / (4.0 * sigma * sigma * psi_norm * psi_norm),
      1.0 / (d + 2.0 * nu));
  return out;
}

}  // namespace padua
