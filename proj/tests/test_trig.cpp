#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "padua/rng.hpp"
#include "padua/trig.hpp"

using namespace padua;

namespace {
constexpr double kPi = std::numbers::pi;

TrigPoly random_poly(int N, int d, Rng& rng) {
  TrigPoly p;
  p.degree = N;
  p.dim = d;
  p.theta.resize(feature_count(N, d));
  for (double& c : p.theta) c = rng.uniform(-1.0, 1.0);
  return p;
}

}  // namespace

TEST_CASE("wrap reduces into [-1,1)") {
  CHECK(wrap(1.5) == doctest::Approx(-0.5));
  CHECK(wrap(-1.0) == doctest::Approx(-1.0));
  CHECK(wrap(3.25) == doctest::Approx(-0.75));
  CHECK(wrap(1.0) == doctest::Approx(-1.0));
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform(-50.0, 50.0);
    const double w = wrap(x);
    CHECK(w >= -1.0);
    CHECK(w < 1.0);
    CHECK(std::abs(std::remainder(x - w, 2.0)) < 1e-12);
  }
}

TEST_CASE("soc basis values") {
  CHECK(soc(0, 0.3) == doctest::Approx(1.0));
  CHECK(soc(1, 0.5) == doctest::Approx(1.0));
  CHECK(soc(-2, 0.25) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("feature_vector d=1") {
  const double x0[1] = {0.0};
  auto v = feature_vector(1, 1, x0);
  REQUIRE(v.size() == 3);
  CHECK(v[0] == doctest::Approx(1.0));  // cos(-pi*0)
  CHECK(v[1] == doctest::Approx(1.0));  // cos(0)
  CHECK(v[2] == doctest::Approx(0.0));  // sin(0)

  const double x1[1] = {0.5};
  v = feature_vector(1, 1, x1);
  CHECK(v[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(1.0));
  CHECK(v[2] == doctest::Approx(1.0));
}

TEST_CASE("feature_vector d=2 matches per-axis enumeration") {
  const double x[2] = {0.0, 0.0};
  const auto v = feature_vector(2, 2, x);
  REQUIRE(v.size() == 25);
  // Independent enumeration of soc(t1,0)*soc(t2,0).
  std::size_t flat = 0;
  for (int t1 = -2; t1 <= 2; ++t1)
    for (int t2 = -2; t2 <= 2; ++t2, ++flat) {
      const double expected = (t1 <= 0 ? 1.0 : 0.0) * (t2 <= 0 ? 1.0 : 0.0);
      CHECK(v[flat] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("feature index round trip") {
  for (std::size_t flat = 0; flat < feature_count(2, 3); ++flat) {
    const auto t = feature_index_tuple(flat, 2, 3);
    CHECK(feature_flat_index(t, 2, 3) == flat);
  }
}

TEST_CASE("trig_eval unit coefficients") {
  TrigPoly p;
  p.degree = 1;
  p.dim = 1;
  p.theta = {0.0, 0.0, 1.0};  // sin(pi x)
  CHECK(trig_eval(p, 0.0, 1) == doctest::Approx(kPi));
  CHECK(trig_eval(p, 0.5, 0) == doctest::Approx(1.0));

  TrigPoly c;
  c.degree = 1;
  c.dim = 1;
  c.theta = {0.0, 1.0, 0.0};  // constant 1
  CHECK(trig_eval(c, 0.37, 1) == doctest::Approx(0.0));
  CHECK(trig_eval(c, -0.9, 3) == doctest::Approx(0.0));
}

TEST_CASE("trig_eval second derivative matches finite differences") {
  Rng rng(11);
  auto p = random_poly(5, 1, rng);
  const double h = 1e-4;
  for (int i = 0; i < 20; ++i) {
    const double x = rng.uniform(-1.0, 1.0);
    const double fd = (trig_eval(p, x + h, 0) - 2.0 * trig_eval(p, x, 0) +
                       trig_eval(p, x - h, 0)) /
                      (h * h);
    const double an = trig_eval(p, x, 2);
    CHECK(an == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("trig_eval periodicity") {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    auto p = random_poly(rng.uniform_int(1, 6), 1, rng);
    const double x = rng.uniform(-1.0, 1.0);
    CHECK(trig_eval(p, x, 0) ==
          doctest::Approx(trig_eval(p, wrap(x + 2.0), 0)).epsilon(1e-12));
  }
}

TEST_CASE("trig_eval multi-d mixed derivative") {
  Rng rng(5);
  auto p = random_poly(2, 2, rng);
  const double h = 1e-4;
  const double x[2] = {0.2, -0.4};
  const int a[2] = {1, 1};
  const auto f = [&](double u, double v) {
    const double pt[2] = {u, v};
    const int zero[2] = {0, 0};
    return trig_eval(p, pt, zero);
  };
  const double fd = (f(x[0] + h, x[1] + h) - f(x[0] + h, x[1] - h) -
                     f(x[0] - h, x[1] + h) + f(x[0] - h, x[1] - h)) /
                    (4.0 * h * h);
  CHECK(trig_eval(p, x, a) == doctest::Approx(fd).epsilon(1e-5));
}

TEST_CASE("dirichlet kernel") {
  CHECK(dirichlet(3, 0.0) == doctest::Approx(7.0));
  // 1 + 2cos(pi/2) + 2cos(pi) = -1; closed form sin(1.25 pi)/sin(0.25 pi).
  CHECK(dirichlet(2, 0.5) == doctest::Approx(-1.0));
  CHECK(dirichlet(2, 0.5) ==
        doctest::Approx(std::sin(1.25 * kPi) / std::sin(0.25 * kPi)));
  Rng rng(13);
  for (int i = 0; i < 1000; ++i) {
    const int N = rng.uniform_int(1, 40);
    const double x = rng.uniform(-1.0, 1.0);
    CHECK(dirichlet(N, x) == doctest::Approx(dirichlet(N, -x)).epsilon(1e-9));
  }
}

TEST_CASE("dirichlet closed form agrees with cosine sum") {
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    const int N = rng.uniform_int(1, 30);
    const double x = rng.uniform(-1.0, 1.0);
    double s = 1.0;
    for (int t = 1; t <= N; ++t) s += 2.0 * std::cos(t * kPi * x);
    CHECK(dirichlet(N, x) == doctest::Approx(s).epsilon(1e-8));
  }
}

TEST_CASE("vallee_poussin values and symmetry") {
  // Direct summation: sum_{t=5}^{10} (2t+1)/6 = 96/6.
  CHECK(vallee_poussin(10, 0.0) == doctest::Approx(16.0));
  // (D_1(0) + D_2(0)) / 2 = (3+5)/2.
  CHECK(vallee_poussin(2, 0.0) == doctest::Approx(4.0));
  for (int N : {2, 4, 8, 16})
    CHECK(vallee_poussin(N, 1.0) ==
          doctest::Approx(vallee_poussin(N, -1.0)).epsilon(1e-12));
  CHECK_THROWS(vallee_poussin(3, 0.1));
  CHECK_THROWS(vallee_poussin(0, 0.1));
}

TEST_CASE("vallee_poussin closed form agrees with Dirichlet mean") {
  Rng rng(19);
  for (int i = 0; i < 300; ++i) {
    const int N = 2 * rng.uniform_int(1, 16);
    const double x = rng.uniform(-1.0, 1.0);
    double s = 0.0;
    for (int t = N / 2; t <= N; ++t) s += dirichlet(t, x);
    s /= (N / 2.0 + 1.0);
    CHECK(vallee_poussin(N, x) == doctest::Approx(s).epsilon(1e-8));
  }
}

TEST_CASE("bernstein inequality on random polynomials") {
  // sup |T'| <= 4 pi N sup |T| over an 8192-point grid.
  Rng rng(23);
  const int grid = 8192;
  for (int trial = 0; trial < 1000; ++trial) {
    const int N = rng.uniform_int(1, 32);
    auto p = random_poly(N, 1, rng);
    double sup_val = 0.0, sup_der = 0.0;
    for (int i = 0; i < grid; ++i) {
      const double x = -1.0 + 2.0 * i / (grid - 1.0);
      sup_val = std::max(sup_val, std::abs(trig_eval(p, x, 0)));
      sup_der = std::max(sup_der, std::abs(trig_eval(p, x, 1)));
    }
    CHECK(sup_der <= 4.0 * kPi * N * sup_val * (1.0 + 1e-12));
  }
}

TEST_CASE("bernstein gradient version in d=2") {
  Rng rng(29);
  const int grid = 64;
  for (int trial = 0; trial < 100; ++trial) {
    const int N = rng.uniform_int(1, 4);
    auto p = random_poly(N, 2, rng);
    double sup_val = 0.0, sup_grad = 0.0;
    for (int i = 0; i < grid; ++i)
      for (int j = 0; j < grid; ++j) {
        const double x[2] = {-1.0 + 2.0 * i / (grid - 1.0),
                             -1.0 + 2.0 * j / (grid - 1.0)};
        const int zero[2] = {0, 0};
        const int dx[2] = {1, 0};
        const int dy[2] = {0, 1};
        sup_val = std::max(sup_val, std::abs(trig_eval(p, x, zero)));
        sup_grad = std::max(sup_grad, std::abs(trig_eval(p, x, dx)));
        sup_grad = std::max(sup_grad, std::abs(trig_eval(p, x, dy)));
      }
    CHECK(sup_grad <= 4.0 * kPi * N * sup_val * (1.0 + 1e-12));
  }
}
