#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "padua/errors.hpp"
#include "padua/kernel.hpp"
#include "padua/rng.hpp"
#include "padua/trig.hpp"

using namespace padua;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent quadrature helpers used as test oracles.
double trapz_mu_grid(const std::vector<double>& grid,
                     const std::vector<double>& vals) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    s += 0.5 * (vals[i] + vals[i + 1]) * (grid[i + 1] - grid[i]);
  return 0.5 * s;
}

double fine_l1_mu(const std::function<double(double)>& f, int points) {
  double s = 0.0;
  const double h = 2.0 / (points - 1.0);
  for (int i = 0; i < points; ++i) {
    const double x = -1.0 + i * h;
    const double w = (i == 0 || i == points - 1) ? 0.5 : 1.0;
    s += w * std::abs(f(x));
  }
  return 0.5 * h * s;
}

// Expectation of g under a tabulated density with respect to dmu.
double density_expectation(const KernelDecomposition& dec, Sign which,
                           const std::function<double(double)>& g) {
  const auto& dens =
      which == Sign::Plus ? dec.plus_density : dec.minus_density;
  std::vector<double> vals(dec.grid.size());
  for (std::size_t i = 0; i < vals.size(); ++i)
    vals[i] = g(dec.grid[i]) * dens[i];
  return trapz_mu_grid(dec.grid, vals);
}

}  // namespace

TEST_CASE("kernel table resolution and symmetry") {
  const auto t = make_vallee_poussin_table(64);
  CHECK(t.degree == 64);
  CHECK(static_cast<int>(t.grid.size()) >= std::max(4096, 64 * 64));
  const std::size_t M = t.grid.size();
  for (std::size_t i = 0; i < M / 2; i += 37) {
    CHECK(t.grid[i] == doctest::Approx(-t.grid[M - 1 - i]).epsilon(1e-15));
    CHECK(t.values[i] == doctest::Approx(t.values[M - 1 - i]).epsilon(1e-11));
  }
  // Odd degree is rounded up.
  CHECK(make_vallee_poussin_table(7).degree == 8);
}

TEST_CASE("l1_norm of the constant kernel is 1") {
  const auto k = make_custom_table([](double) { return 1.0; }, 4096);
  CHECK(l1_norm(k) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("l1_norm of D_1 matches the closed form") {
  // (1/2) int |1 + 2cos(pi x)| dx = 1/3 + 2 sqrt(3)/pi.
  const double exact = 1.0 / 3.0 + 2.0 * std::sqrt(3.0) / kPi;
  const double fine =
      fine_l1_mu([](double x) { return dirichlet(1, x); }, (1 << 20) + 1);
  CHECK(fine == doctest::Approx(exact).epsilon(1e-9));
  CHECK(l1_norm(make_dirichlet_table(1)) == doctest::Approx(exact).epsilon(1e-5));
}

TEST_CASE("l1_norm of V_N approaches the Lambda_1 constant from below") {
  const double lambda1 = 1.0 / 3.0 + 2.0 * std::sqrt(3.0) / kPi;
  double prev = 0.0;
  for (int N : {2, 4, 8, 16, 32, 64}) {
    const double v = l1_norm(make_vallee_poussin_table(N));
    CHECK(v > prev);        // monotone in N at these degrees
    CHECK(v <= lambda1);    // the uniform bound
    prev = v;
  }
  // Frozen values from an independent 2^22-point quadrature.
  CHECK(l1_norm(make_vallee_poussin_table(8)) ==
        doctest::Approx(1.37325583).epsilon(1e-5));
  for (int N : {16, 32, 64}) {
    const double v = l1_norm(make_vallee_poussin_table(N));
    CHECK(v >= 1.40);
    CHECK(v <= 1.47);
  }
  CHECK(l1_norm(make_vallee_poussin_table(64)) ==
        doctest::Approx(1.4352).epsilon(0.01 / 1.4352));
}

TEST_CASE("decompose identities") {
  for (int N : {2, 4, 8, 16, 32, 64}) {
    CAPTURE(N);
    const auto table = make_vallee_poussin_table(N);
    const auto dec = decompose(table);
    CHECK(dec.beta_plus - dec.beta_minus == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(dec.beta_plus + dec.beta_minus ==
          doctest::Approx(l1_norm(table)).epsilon(1e-12));
    CHECK(dec.beta_plus + dec.beta_minus <= 1.47);
    // Densities integrate to one against dmu.
    std::vector<double> ones(dec.grid.size());
    for (std::size_t i = 0; i < ones.size(); ++i) ones[i] = dec.plus_density[i];
    CHECK(trapz_mu_grid(dec.grid, ones) == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t i = 0; i < ones.size(); ++i) ones[i] = dec.minus_density[i];
    CHECK(trapz_mu_grid(dec.grid, ones) == doctest::Approx(1.0).epsilon(1e-9));
    // Pointwise reconstruction.
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < dec.grid.size(); ++i) {
      const double rec = dec.beta_plus * dec.plus_density[i] -
                         dec.beta_minus * dec.minus_density[i];
      worst = std::max(worst, std::abs(rec - table.values[i]));
      scale = std::max(scale, std::abs(table.values[i]));
    }
    CHECK(worst <= 1e-9 * scale);
  }
}

TEST_CASE("decompose rejects nonnegative kernels") {
  const auto k = make_custom_table([](double) { return 1.0; }, 512);
  CHECK_THROWS_WITH_AS(decompose(k), doctest::Contains("nonnegative"),
                       ValidationError);
}

TEST_CASE("sample_eta matches the tabulated density") {
  const auto dec = decompose(make_vallee_poussin_table(16));
  Rng rng(42);
  const int draws = 1000000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double eta = sample_eta(dec, Sign::Plus, rng);
    REQUIRE(eta >= -1.0);
    REQUIRE(eta <= 1.0);
    const double g = std::cos(kPi * eta);
    sum += g;
    sumsq += g * g;
  }
  const double mean = sum / draws;
  const double var = sumsq / draws - mean * mean;
  const double se = std::sqrt(var / draws);
  const double expected =
      density_expectation(dec, Sign::Plus, [](double u) { return std::cos(kPi * u); });
  CHECK(std::abs(mean - expected) <= 3.0 * se + 1e-6);
}

TEST_CASE("sample_eta is deterministic for a fixed seed") {
  const auto dec = decompose(make_vallee_poussin_table(8));
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i)
    CHECK(sample_eta(dec, Sign::Minus, a) == sample_eta(dec, Sign::Minus, b));
}

TEST_CASE("circular_convolve reproduces constants and low harmonics") {
  const auto v8 = make_vallee_poussin_table(8);
  CHECK(circular_convolve([](double) { return 2.5; }, v8, 0.3) ==
        doctest::Approx(2.5).epsilon(1e-9));
  double worst = 0.0;
  for (int i = 0; i < 256; ++i) {
    const double x = -1.0 + 2.0 * i / 255.0;
    const double conv =
        circular_convolve([](double y) { return std::cos(kPi * y); }, v8, x);
    worst = std::max(worst, std::abs(conv - std::cos(kPi * x)));
  }
  CHECK(worst <= 1e-6);

  const auto d4 = make_dirichlet_table(4);
  worst = 0.0;
  for (int i = 0; i < 256; ++i) {
    const double x = -1.0 + 2.0 * i / 255.0;
    const double conv =
        circular_convolve([](double y) { return std::sin(kPi * y); }, d4, x);
    worst = std::max(worst, std::abs(conv - std::sin(kPi * x)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("convolution output lives in T_N") {
  // Fourier coefficients of V_8 * f beyond degree 8 vanish.
  const auto v8 = make_vallee_poussin_table(8);
  auto f = [](double y) {
    return std::sin(kPi * y) + 0.4 * std::cos(6.0 * kPi * y) +
           0.2 * std::sin(11.0 * kPi * y);
  };
  const int m = 2048;
  std::vector<double> conv(m);
  for (int i = 0; i < m; ++i)
    conv[static_cast<std::size_t>(i)] =
        circular_convolve(f, v8, -1.0 + 2.0 * i / static_cast<double>(m));
  for (int t = 9; t <= 14; ++t) {
    double cs = 0.0, sn = 0.0;
    for (int i = 0; i < m; ++i) {
      const double x = -1.0 + 2.0 * i / static_cast<double>(m);
      cs += conv[static_cast<std::size_t>(i)] * std::cos(t * kPi * x);
      sn += conv[static_cast<std::size_t>(i)] * std::sin(t * kPi * x);
    }
    CHECK(std::abs(cs / m) <= 1e-6);
    CHECK(std::abs(sn / m) <= 1e-6);
  }
}

TEST_CASE("convolution commutes with differentiation") {
  const auto v8 = make_vallee_poussin_table(8);
  auto f = [](double y) { return std::sin(kPi * y) + 0.3 * std::cos(3.0 * kPi * y); };
  auto fp = [](double y) {
    return kPi * std::cos(kPi * y) - 0.9 * kPi * std::sin(3.0 * kPi * y);
  };
  const double h = 1e-5;
  for (double x : {-0.8, -0.3, 0.0, 0.4, 0.9}) {
    const double lhs =
        (circular_convolve(f, v8, x + h) - circular_convolve(f, v8, x - h)) /
        (2.0 * h);
    const double rhs = circular_convolve(fp, v8, x);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-5));
  }
}

TEST_CASE("perturbation trick is unbiased for the convolution") {
  const auto dec = decompose(make_vallee_poussin_table(8));
  const auto v8 = make_vallee_poussin_table(8);
  auto g = [](double u) { return std::sin(kPi * u) + 0.3 * std::cos(5.0 * kPi * u); };
  Rng rng(7);
  const int draws = 200000;
  for (double x : {-0.6, -0.1, 0.25, 0.8}) {
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double gp = g(wrap(x + sample_eta(dec, Sign::Plus, rng)));
      const double gm = g(wrap(x + sample_eta(dec, Sign::Minus, rng)));
      const double y = dec.beta_plus * gp - dec.beta_minus * gm;
      sum += y;
      sumsq += y * y;
    }
    const double mean = sum / draws;
    const double se = std::sqrt((sumsq / draws - mean * mean) / draws);
    const double conv = circular_convolve(g, v8, x);
    CHECK(std::abs(mean - conv) <= 4.0 * se + 1e-6);
  }
}

TEST_CASE("tensor decomposition weights and sampling") {
  const auto base = decompose(make_vallee_poussin_table(8));
  const auto dec2 = tensorize(base, 2);
  const double lambda = base.beta_plus + base.beta_minus;
  CHECK(dec2.beta_plus - dec2.beta_minus == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(dec2.beta_plus + dec2.beta_minus ==
        doctest::Approx(lambda * lambda).epsilon(1e-12));

  // Separable g: the signed mixture expectation factorizes per axis.
  auto g1 = [](double u) { return std::cos(kPi * u); };
  const double m_plus = density_expectation(base, Sign::Plus, g1);
  const double m_minus = density_expectation(base, Sign::Minus, g1);
  const double expected = std::pow(
      base.beta_plus * m_plus - base.beta_minus * m_minus, 2.0);

  Rng rng(99);
  const int draws = 400000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const auto ep = sample_eta(dec2, Sign::Plus, rng);
    const auto em = sample_eta(dec2, Sign::Minus, rng);
    const double y = dec2.beta_plus * g1(ep[0]) * g1(ep[1]) -
                     dec2.beta_minus * g1(em[0]) * g1(em[1]);
    sum += y;
    sumsq += y * y;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sumsq / draws - mean * mean) / draws);
  CHECK(std::abs(mean - expected) <= 4.0 * se + 1e-5);
}
