#include "padua/padua.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>

#include "padua/errors.hpp"
#include "padua/kernel.hpp"

namespace padua {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double loglog_floor3(double x) { return std::log(std::log(std::max(x, 3.0))); }

struct LsSolution {
  VectorXd theta;
  double lambda = 0.0;
  double condition = 0.0;
};

LsSolution solve_normal_equations(const MatrixXd& X, const VectorXd& y,
                                  double lambda, bool want_condition) {
  if (!X.allFinite() || !y.allFinite())
    throw ValidationError("least_squares: non-finite input");
  const int p = static_cast<int>(X.cols());
  MatrixXd gram = X.transpose() * X;
  if (lambda < 0.0) lambda = 1e-10 * gram.trace() / p;
  gram.diagonal().array() += lambda;
  LsSolution out;
  out.lambda = lambda;
  out.theta = gram.ldlt().solve(X.transpose() * y);
  if (want_condition) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(gram);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    out.condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace

bool budget_ok(int N, int d, long n) {
  const double p = static_cast<double>(feature_count(N, d));
  return 16.0 * p * loglog_floor3(p) < static_cast<double>(n);
}

int choose_N(long n, double nu, int d, double norm_bound, double sigma) {
  if (n < 32) throw ValidationError("choose_N: insufficient budget (n < 32)");
  if (!(nu > 0.0)) throw ValidationError("choose_N: nu must be positive");
  if (!(norm_bound > 0.0))
    throw ValidationError("choose_N: norm_bound must be positive");
  const double sigma_floor = 1e-3;
  const double s = std::max(sigma, sigma_floor);
  const double raw = std::pow(
      static_cast<double>(n) * norm_bound * norm_bound / (s * s),
      1.0 / (2.0 * nu + d));
  int N = static_cast<int>(2 * std::llround(raw / 2.0));
  N = std::max(N, 2);
  while (N > 2 && !budget_ok(N, d, n)) N -= 2;
  return N;
}

FitResult fit(const Oracle& oracle, const PaduaConfig& config) {
  if (config.d < 1 || config.d > 3)
    throw ValidationError("fit: d must be in {1,2,3}");
  if (config.n < 32) throw ValidationError("fit: insufficient budget (n < 32)");
  if (!(config.nu > 0.0)) throw ValidationError("fit: nu must be positive");
  if (config.sigma < 0.0) throw ValidationError("fit: sigma must be >= 0");
  if (!(config.delta > 0.0 && config.delta < 1.0))
    throw ValidationError("fit: delta must be in (0,1)");
  if (!oracle) throw ValidationError("fit: null oracle");

  int N = config.N;
  if (N == 0) {
    N = choose_N(config.n, config.nu, config.d, config.norm_bound, config.sigma);
  } else {
    if (N < 0) throw ValidationError("fit: N must be positive or 0 (auto)");
    if (N % 2 != 0) ++N;  // the kernel needs an even degree
    N = std::max(N, 2);
    if (!budget_ok(N, config.d, config.n))
      throw ValidationError("fit: budget precondition 16 p loglog(p) < n fails");
  }

  const Rng master(config.seed);
  Rng rng_eta = master.split(1);
  Rng rng_oracle = master.split(2);

  const double epsilon = 1.0 / (8.0 * std::numbers::pi * N);
  const CoverGrid cover = epsilon_cover(config.d, epsilon);
  const std::size_t p = feature_count(N, config.d);

  std::vector<std::vector<double>> phis;
  phis.reserve(cover.points.size());
  for (const auto& pt : cover.points)
    phis.push_back(feature_vector(N, config.d, pt));

  const Design design =
      compute_design(phis, config.design_tolerance, config.design_max_iters);

  // Allocation: n_tot = floor(n/4) rounded-up per support point. If the
  // ceilings would exceed the budget (possible only when the budget
  // precondition was waived by the N = 2 clamp), shrink n_tot so that
  // 2 * (n_tot + |support|) <= n still holds.
  const long support = static_cast<long>(design.support.size());
  long n_tot = config.n / 4;
  std::vector<long> counts = round_allocation(design, n_tot);
  auto total_queries = [&counts]() {
    long t = 0;
    for (long c : counts) t += c;
    return 2 * t;
  };
  if (total_queries() > config.n) {
    n_tot = config.n / 2 - support;
    if (n_tot < 1) throw ValidationError("fit: insufficient budget for design support");
    counts = round_allocation(design, n_tot);
  }

  const KernelTable table = make_vallee_poussin_table(N);
  const TensorDecomposition dec = tensorize(decompose(table), config.d);

  // Pre-commit every query location before the first oracle call; the
  // sampled locations depend on (config, seed) only.
  struct PlannedQuery {
    std::size_t row;
    Point plus;
    Point minus;
  };
  std::vector<PlannedQuery> plan;
  std::vector<std::size_t> row_point;  // support index per regression row
  for (std::size_t s = 0; s < design.support.size(); ++s) {
    for (long rep = 0; rep < counts[s]; ++rep) {
      const auto& x = cover.points[static_cast<std::size_t>(design.support[s])];
      PlannedQuery q;
      q.row = row_point.size();
      const std::vector<double> eta_plus = sample_eta(dec, Sign::Plus, rng_eta);
      const std::vector<double> eta_minus = sample_eta(dec, Sign::Minus, rng_eta);
      q.plus.resize(x.size());
      q.minus.resize(x.size());
      for (std::size_t j = 0; j < x.size(); ++j) {
        q.plus[j] = wrap(x[j] + eta_plus[j]);
        q.minus[j] = wrap(x[j] + eta_minus[j]);
      }
      plan.push_back(std::move(q));
      row_point.push_back(s);
    }
  }

  const long rows = static_cast<long>(plan.size());
  MatrixXd X(rows, static_cast<long>(p));
  VectorXd y(rows);
  for (const PlannedQuery& q : plan) {
    const double y_plus = oracle(q.plus, rng_oracle);
    const double y_minus = oracle(q.minus, rng_oracle);
    y(static_cast<long>(q.row)) =
        dec.beta_plus * y_plus - dec.beta_minus * y_minus;
    const auto& phi =
        phis[static_cast<std::size_t>(design.support[row_point[q.row]])];
    for (std::size_t c = 0; c < p; ++c)
      X(static_cast<long>(q.row), static_cast<long>(c)) = phi[c];
  }

  const LsSolution ls = solve_normal_equations(X, y, -1.0, true);

  FitResult out;
  out.model.degree = N;
  out.model.dim = config.d;
  out.model.theta.assign(ls.theta.data(), ls.theta.data() + ls.theta.size());
  out.queries_used = 2 * rows;
  out.seed = config.seed;
  out.diag.design_certified = design.certified;
  out.diag.support_size_ok = design.support_size_ok;
  out.diag.max_leverage = design.max_leverage;
  out.diag.support_size = static_cast<int>(support);
  out.diag.condition_number = ls.condition;
  out.diag.ridge_lambda = ls.lambda;
  out.diag.beta_plus = dec.beta_plus;
  out.diag.beta_minus = dec.beta_minus;
  if (out.queries_used > config.n)
    throw ValidationError("fit: query budget exceeded");
  return out;
}

double predict(const FitResult& r, const Point& x, const std::vector<int>& alpha) {
  return trig_eval(r.model, x, alpha);
}

double predict(const FitResult& r, double x, int alpha) {
  return trig_eval(r.model, x, alpha);
}

std::vector<double> least_squares(const std::vector<double>& X, long rows,
                                  const std::vector<double>& y, double lambda) {
  if (rows < 1 || X.size() % static_cast<std::size_t>(rows) != 0)
    throw ValidationError("least_squares: bad shape");
  const long p = static_cast<long>(X.size() / static_cast<std::size_t>(rows));
  if (static_cast<long>(y.size()) != rows)
    throw ValidationError("least_squares: y length != rows");
  if (p > rows) throw ValidationError("least_squares: p must be <= rows");
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      Xm(X.data(), rows, p);
  Eigen::Map<const VectorXd> ym(y.data(), rows);
  const LsSolution ls = solve_normal_equations(Xm, ym, lambda, false);
  return std::vector<double>(ls.theta.data(), ls.theta.data() + ls.theta.size());
}

namespace {

constexpr char kMagic[4] = {'P', 'A', 'D', 'U'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <class T>
T get(const std::string& in, std::size_t& off) {
  if (off + sizeof(T) > in.size())
    throw IoError("deserialize_fit: truncated record");
  T v;
  std::memcpy(&v, in.data() + off, sizeof(T));
  off += sizeof(T);
  return v;
}

}  // namespace

std::string serialize_fit(const FitResult& r) {
  std::string out;
  out.reserve(64 + 8 * r.model.theta.size());
  out.append(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(r.model.dim));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(r.model.degree));
  put<std::uint64_t>(out, r.seed);
  put<std::uint64_t>(out, static_cast<std::uint64_t>(r.queries_used));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(r.diag.support_size));
  std::uint32_t flags = 0;
  if (r.diag.design_certified) flags |= 1u;
  if (r.diag.support_size_ok) flags |= 2u;
  put<std::uint32_t>(out, flags);
  put<double>(out, r.diag.max_leverage);
  put<double>(out, r.diag.condition_number);
  put<std::uint64_t>(out, static_cast<std::uint64_t>(r.model.theta.size()));
  for (double c : r.model.theta) put<double>(out, c);
  return out;
}

FitResult deserialize_fit(const std::string& bytes) {
  std::size_t off = 0;
  if (bytes.size() < 64 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw IoError("deserialize_fit: bad magic");
  off = 4;
  if (get<std::uint32_t>(bytes, off) != kVersion)
    throw IoError("deserialize_fit: unsupported version");
  FitResult r;
  r.model.dim = static_cast<int>(get<std::uint32_t>(bytes, off));
  r.model.degree = static_cast<int>(get<std::uint32_t>(bytes, off));
  r.seed = get<std::uint64_t>(bytes, off);
  r.queries_used = static_cast<long>(get<std::uint64_t>(bytes, off));
  r.diag.support_size = static_cast<int>(get<std::uint32_t>(bytes, off));
  const std::uint32_t flags = get<std::uint32_t>(bytes, off);
  r.diag.design_certified = flags & 1u;
  r.diag.support_size_ok = flags & 2u;
  r.diag.max_leverage = get<double>(bytes, off);
  r.diag.condition_number = get<double>(bytes, off);
  const std::uint64_t count = get<std::uint64_t>(bytes, off);
  if (count != feature_count(r.model.degree, r.model.dim))
    throw IoError("deserialize_fit: coefficient count mismatch");
  r.model.theta.resize(count);
  for (std::uint64_t i = 0; i < count; ++i)
    r.model.theta[i] = get<double>(bytes, off);
  return r;
}

}  // namespace padua
