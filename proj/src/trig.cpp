#include "padua/trig.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "padua/errors.hpp"

namespace padua {

namespace {
constexpr double kPi = std::numbers::pi;
}

double wrap(double x) {
  double w = std::fmod(x + 1.0, 2.0);
  if (w < 0.0) w += 2.0;
  return w - 1.0;
}

double soc(int t, double x) {
  return t > 0 ? std::sin(t * kPi * x) : std::cos(t * kPi * x);
}

double soc_deriv(int t, double x, int order) {
  if (order < 0) throw ValidationError("soc_deriv: negative order");
  if (order == 0) return soc(t, x);
  if (t == 0) return 0.0;  // derivative of the constant term
  const double w = std::abs(t) * kPi;
  const double u = w * x;
  const double scale = std::pow(w, order);
  // sin cycles sin, cos, -sin, -cos; cos cycles cos, -sin, -cos, sin.
  const int phase = order % 4;
  double core;
  if (t > 0) {
    switch (phase) {
      case 0: core = std::sin(u); break;
      case 1: core = std::cos(u); break;
      case 2: core = -std::sin(u); break;
      default: core = -std::cos(u); break;
    }
  } else {
    switch (phase) {
      case 0: core = std::cos(u); break;
      case 1: core = -std::sin(u); break;
      case 2: core = -std::cos(u); break;
      default: core = std::sin(u); break;
    }
  }
  return scale * core;
}

std::size_t feature_count(int N, int d) {
  std::size_t p = 1;
  for (int j = 0; j < d; ++j) p *= static_cast<std::size_t>(2 * N + 1);
  return p;
}

std::size_t feature_flat_index(std::span<const int> t, int N, int d) {
  if (static_cast<int>(t.size()) != d)
    throw ValidationError("feature_flat_index: tuple size != d");
  std::size_t flat = 0;
  for (int j = 0; j < d; ++j) {
    if (t[j] < -N || t[j] > N)
      throw ValidationError("feature_flat_index: |t| > N");
    flat = flat * static_cast<std::size_t>(2 * N + 1) +
           static_cast<std::size_t>(t[j] + N);
  }
  return flat;
}

std::vector<int> feature_index_tuple(std::size_t flat, int N, int d) {
  const std::size_t base = static_cast<std::size_t>(2 * N + 1);
  std::vector<int> t(static_cast<std::size_t>(d));
  for (int j = d - 1; j >= 0; --j) {
    t[static_cast<std::size_t>(j)] = static_cast<int>(flat % base) - N;
    flat /= base;
  }
  return t;
}

namespace {

void check_dim(int d) {
  if (d < 1 || d > 3) throw ValidationError("dimension must be in {1,2,3}");
}

// Per-axis soc derivative tables for t = -N..N.
std::vector<double> axis_table(int N, double x, int order) {
  std::vector<double> v(static_cast<std::size_t>(2 * N + 1));
  for (int t = -N; t <= N; ++t)
    v[static_cast<std::size_t>(t + N)] = soc_deriv(t, x, order);
  return v;
}

}  // namespace

std::vector<double> feature_vector(int N, int d, std::span<const double> x) {
  check_dim(d);
  if (static_cast<int>(x.size()) != d)
    throw ValidationError("feature_vector: point size != d");
  const int w = 2 * N + 1;
  std::vector<double> out(feature_count(N, d));
  if (d == 1) {
    return axis_table(N, x[0], 0);
  }
  const auto a = axis_table(N, x[0], 0);
  const auto b = axis_table(N, x[1], 0);
  if (d == 2) {
    for (int i = 0; i < w; ++i)
      for (int j = 0; j < w; ++j)
        out[static_cast<std::size_t>(i * w + j)] =
            a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    return out;
  }
  const auto c = axis_table(N, x[2], 0);
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < w; ++j) {
      const double ab = a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
      const std::size_t off = static_cast<std::size_t>((i * w + j) * w);
      for (int k = 0; k < w; ++k)
        out[off + static_cast<std::size_t>(k)] = ab * c[static_cast<std::size_t>(k)];
    }
  return out;
}

double trig_eval(const TrigPoly& p, std::span<const double> x,
                 std::span<const int> alpha) {
  check_dim(p.dim);
  if (static_cast<int>(x.size()) != p.dim)
    throw ValidationError("trig_eval: point size != dim");
  if (static_cast<int>(alpha.size()) != p.dim)
    throw ValidationError("trig_eval: alpha size != dim");
  if (p.theta.size() != feature_count(p.degree, p.dim))
    throw ValidationError("trig_eval: theta length != (2N+1)^d");
  const int N = p.degree;
  const int w = 2 * N + 1;
  if (p.dim == 1) {
    const auto a = axis_table(N, x[0], alpha[0]);
    double s = 0.0;
    for (int i = 0; i < w; ++i)
      s += p.theta[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(i)];
    return s;
  }
  const auto a = axis_table(N, x[0], alpha[0]);
  const auto b = axis_table(N, x[1], alpha[1]);
  if (p.dim == 2) {
    double s = 0.0;
    for (int i = 0; i < w; ++i) {
      double row = 0.0;
      const std::size_t off = static_cast<std::size_t>(i * w);
      for (int j = 0; j < w; ++j)
        row += p.theta[off + static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(j)];
      s += a[static_cast<std::size_t>(i)] * row;
    }
    return s;
  }
  const auto c = axis_table(N, x[2], alpha[2]);
  double s = 0.0;
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < w; ++j) {
      double row = 0.0;
      const std::size_t off = static_cast<std::size_t>((i * w + j) * w);
      for (int k = 0; k < w; ++k)
        row += p.theta[off + static_cast<std::size_t>(k)] * c[static_cast<std::size_t>(k)];
      s += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)] * row;
    }
  return s;
}

double trig_eval(const TrigPoly& p, double x, int alpha) {
  const double xs[1] = {x};
  const int as[1] = {alpha};
  return trig_eval(p, std::span<const double>(xs), std::span<const int>(as));
}

double dirichlet(int N, double x) {
  if (N < 1) throw ValidationError("dirichlet: N must be >= 1");
  const double den = std::sin(kPi * x / 2.0);
  if (std::abs(den) < 1e-8) {
    double s = 1.0;
    for (int t = 1; t <= N; ++t) s += 2.0 * std::cos(t * kPi * x);
    return s;
  }
  return std::sin((N + 0.5) * kPi * x) / den;
}

double vallee_poussin(int N, double x) {
  if (N < 2 || N % 2 != 0)
    throw ValidationError("vallee_poussin: N must be even and >= 2");
  const double den = std::sin(kPi * x / 2.0);
  const double count = N / 2.0 + 1.0;
  if (std::abs(den) < 1e-8) {
    double s = 0.0;
    for (int t = N / 2; t <= N; ++t) s += dirichlet(t, x);
    return s / count;
  }
  // Telescoped sum: sum_{t=m}^{M} D_t = (cos(m pi x) - cos((M+1) pi x)) / (2 sin^2(pi x/2)).
  const double a = std::cos(N * kPi * x / 2.0);
  const double b = std::cos((N + 1.0) * kPi * x);
  return (a - b) / (count * 2.0 * den * den);
}

}  // namespace padua
