#include "padua/kernel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <utility>

#include "padua/errors.hpp"
#include "padua/trig.hpp"

namespace padua {

namespace {

int table_points(int N) { return std::max(4096, 64 * N); }

// Symmetric grid: x_i = (2i - (M-1)) / (M-1), so x_{M-1-i} = -x_i exactly.
std::vector<double> make_grid(int M) {
  std::vector<double> g(static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i)
    g[static_cast<std::size_t>(i)] =
        static_cast<double>(2 * i - (M - 1)) / static_cast<double>(M - 1);
  return g;
}

// Trapezoid integral against dmu = dx/2 over the table grid.
double trapz_mu(const std::vector<double>& grid, const std::vector<double>& v) {
  const std::size_t n = grid.size();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    s += 0.5 * (v[i] + v[i + 1]) * (grid[i + 1] - grid[i]);
  return 0.5 * s;
}

KernelTable tabulate(KernelKind kind, int N,
                     const std::function<double(double)>& f, int M) {
  KernelTable t;
  t.kind = kind;
  t.degree = N;
  t.grid = make_grid(M);
  t.values.resize(t.grid.size());
  for (std::size_t i = 0; i < t.grid.size(); ++i) t.values[i] = f(t.grid[i]);
  return t;
}

}  // namespace

double KernelTable::eval(double x) const {
  switch (kind) {
    case KernelKind::Dirichlet: return dirichlet(degree, x);
    case KernelKind::ValleePoussin: return vallee_poussin(degree, x);
    case KernelKind::Custom: break;
  }
  const double w = wrap(x);
  const std::size_t M = grid.size();
  const double h = 2.0 / static_cast<double>(M - 1);
  double pos = (w + 1.0) / h;
  std::size_t i = static_cast<std::size_t>(std::min<double>(
      std::max(pos, 0.0), static_cast<double>(M - 2)));
  const double frac = pos - static_cast<double>(i);
  return values[i] + frac * (values[i + 1] - values[i]);
}

KernelTable make_dirichlet_table(int N) {
  if (N < 1) throw ValidationError("dirichlet table: N must be >= 1");
  return tabulate(KernelKind::Dirichlet, N,
                  [N](double x) { return dirichlet(N, x); }, table_points(N));
}

KernelTable make_vallee_poussin_table(int N) {
  if (N < 2) throw ValidationError("vallee-poussin table: N must be >= 2");
  if (N % 2 != 0) ++N;
  return tabulate(KernelKind::ValleePoussin, N,
                  [N](double x) { return vallee_poussin(N, x); },
                  table_points(N));
}

KernelTable make_custom_table(const std::function<double(double)>& f,
                              int points) {
  if (points < 2) throw ValidationError("custom table: need >= 2 points");
  return tabulate(KernelKind::Custom, 0, f, points);
}

double l1_norm(const KernelTable& k) {
  std::vector<double> a(k.values.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(k.values[i]);
  return trapz_mu(k.grid, a);
}

KernelDecomposition decompose(const KernelTable& k) {
  const std::size_t M = k.values.size();
  std::vector<double> plus(M), minus(M);
  for (std::size_t i = 0; i < M; ++i) {
    plus[i] = std::max(k.values[i], 0.0);
    minus[i] = std::max(-k.values[i], 0.0);
  }
  KernelDecomposition dec;
  dec.degree = k.degree;
  dec.grid = k.grid;
  dec.beta_plus = trapz_mu(k.grid, plus);
  dec.beta_minus = trapz_mu(k.grid, minus);
  if (dec.beta_minus < 1e-12)
    throw ValidationError("decompose: kernel is nonnegative");
  if (dec.beta_plus < 1e-12)
    throw ValidationError("decompose: kernel is nonpositive");
  dec.plus_density.resize(M);
  dec.minus_density.resize(M);
  for (std::size_t i = 0; i < M; ++i) {
    dec.plus_density[i] = plus[i] / dec.beta_plus;
    dec.minus_density[i] = minus[i] / dec.beta_minus;
  }
  auto build_cdf = [&](const std::vector<double>& dens) {
    std::vector<double> cdf(M, 0.0);
    for (std::size_t i = 1; i < M; ++i)
      cdf[i] = cdf[i - 1] + 0.25 * (dens[i - 1] + dens[i]) *
                                (k.grid[i] - k.grid[i - 1]);
    const double total = cdf[M - 1];
    for (std::size_t i = 0; i < M; ++i) cdf[i] /= total;
    cdf[M - 1] = 1.0;
    return cdf;
  };
  dec.plus_cdf = build_cdf(dec.plus_density);
  dec.minus_cdf = build_cdf(dec.minus_density);
  return dec;
}

double sample_eta(const KernelDecomposition& dec, Sign which, Rng& rng) {
  const std::vector<double>& cdf =
      which == Sign::Plus ? dec.plus_cdf : dec.minus_cdf;
  const double u = rng.uniform();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  std::size_t hi = static_cast<std::size_t>(
      std::min<std::ptrdiff_t>(std::distance(cdf.begin(), it),
                               static_cast<std::ptrdiff_t>(cdf.size() - 1)));
  if (hi == 0) hi = 1;
  const std::size_t lo = hi - 1;
  const double span = cdf[hi] - cdf[lo];
  const double frac = span > 0.0 ? (u - cdf[lo]) / span : 0.0;
  const double x = dec.grid[lo] + frac * (dec.grid[hi] - dec.grid[lo]);
  return std::clamp(x, -1.0, 1.0);
}

TensorDecomposition tensorize(KernelDecomposition base, int d) {
  if (d < 1 || d > 3) throw ValidationError("tensorize: d must be in {1,2,3}");
  TensorDecomposition t;
  t.dim = d;
  // Grouping sign patterns by parity gives closed forms in the 1-d weights.
  const double lambda = base.beta_plus + base.beta_minus;
  const double unit = base.beta_plus - base.beta_minus;
  t.beta_plus = (std::pow(lambda, d) + std::pow(unit, d)) / 2.0;
  t.beta_minus = (std::pow(lambda, d) - std::pow(unit, d)) / 2.0;
  t.base = std::move(base);
  return t;
}

std::vector<double> sample_eta(const TensorDecomposition& dec, Sign which,
                               Rng& rng) {
  const int d = dec.dim;
  const double target = which == Sign::Plus ? dec.beta_plus : dec.beta_minus;
  const int want_parity = which == Sign::Plus ? 0 : 1;
  // Draw a sign pattern with probability prod(beta_{s_j}) / beta_d among
  // patterns of the right parity, then sample each axis from its component.
  std::vector<std::pair<int, double>> patterns;
  for (int s = 0; s < (1 << d); ++s) {
    if (std::popcount(static_cast<unsigned>(s)) % 2 != want_parity) continue;
    double w = 1.0;
    for (int j = 0; j < d; ++j)
      w *= (s >> j) & 1 ? dec.base.beta_minus : dec.base.beta_plus;
    patterns.emplace_back(s, w);
  }
  double u = rng.uniform() * target;
  int pattern = patterns.back().first;
  for (const auto& [s, w] : patterns) {
    if (u < w) {
      pattern = s;
      break;
    }
    u -= w;
  }
  std::vector<double> eta(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j)
    eta[static_cast<std::size_t>(j)] = sample_eta(
        dec.base, (pattern >> j) & 1 ? Sign::Minus : Sign::Plus, rng);
  return eta;
}

double circular_convolve(const std::function<double(double)>& f,
                         const KernelTable& k, double x) {
  const std::size_t M = k.grid.size();
  double s = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    const double w = (i == 0 || i == M - 1) ? 0.5 : 1.0;
    s += w * f(k.grid[i]) * k.eval(wrap(x - k.grid[i]));
  }
  const double h = 2.0 / static_cast<double>(M - 1);
  return 0.5 * h * s;
}

void write_kernel_csv(const KernelTable& k, std::ostream& out) {
  out << "x,value\n";
  char buf[64];
  for (std::size_t i = 0; i < k.grid.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", k.grid[i], k.values[i]);
    out << buf;
  }
}

}  // namespace padua
