#include "padua/baselines.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "padua/errors.hpp"

namespace padua {

double baseline_kernel(KernelChoice k, double u) {
  switch (k) {
    case KernelChoice::Epanechnikov:
      return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    case KernelChoice::Gaussian:
      return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
    case KernelChoice::Uniform:
      return std::abs(u) <= 1.0 ? 0.5 : 0.0;
  }
  return 0.0;
}

double auto_bandwidth(std::size_t n, const LocalFitConfig& config) {
  if (n == 0) throw ValidationError("auto_bandwidth: empty data");
  const double h = config.bandwidth_scale *
                   std::pow(static_cast<double>(n), -1.0 / (2.0 * config.nu + 1.0));
  return std::clamp(h, 1e-12, 2.0);
}

namespace {

double resolve_bandwidth(std::span<const Sample1D> data,
                         const LocalFitConfig& config) {
  if (config.bandwidth > 0.0) {
    if (config.bandwidth > 2.0)
      throw ValidationError("bandwidth must be <= 2");
    return config.bandwidth;
  }
  return auto_bandwidth(data.size(), config);
}

}  // namespace

double nw_predict(std::span<const Sample1D> data, double x0,
                  const LocalFitConfig& config) {
  if (data.empty()) throw ValidationError("nw_predict: empty data");
  const double h = resolve_bandwidth(data, config);
  double num = 0.0, den = 0.0;
  for (const Sample1D& s : data) {
    const double w = baseline_kernel(config.kernel, (s.x - x0) / h);
    if (w <= 0.0) continue;
    num += w * s.y;
    den += w;
  }
  return den < 1e-12 ? 0.0 : num / den;
}

LpeOutput lpe_predict_full(std::span<const Sample1D> data, double x0, int alpha,
                           const LocalFitConfig& config) {
  if (data.empty()) throw ValidationError("lpe_predict: empty data");
  if (config.order < 0 || config.order > 6)
    throw ValidationError("lpe_predict: order must be in [0,6]");
  if (alpha < 0 || alpha > config.order)
    throw ValidationError("lpe_predict: alpha must be <= order");
  const double h = resolve_bandwidth(data, config);
  const int ell = config.order;

  std::vector<double> us, ws, ys;
  std::set<double> distinct;
  double wsum = 0.0;
  for (const Sample1D& s : data) {
    const double u = (s.x - x0) / h;
    const double w = baseline_kernel(config.kernel, u);
    if (w <= 0.0) continue;
    us.push_back(u);
    ws.push_back(w);
    ys.push_back(s.y);
    wsum += w;
    distinct.insert(s.x);
  }

  LpeOutput out;
  if (static_cast<int>(distinct.size()) < ell + 1 || wsum < 1e-12) {
    out.fallback = true;
    out.value = alpha == 0 ? nw_predict(data, x0, config) : 0.0;
    return out;
  }

  const int cols = ell + 1;
  Eigen::MatrixXd A(static_cast<long>(us.size()), cols);
  Eigen::VectorXd b(static_cast<long>(us.size()));
  for (std::size_t i = 0; i < us.size(); ++i) {
    const double sq = std::sqrt(ws[i]);
    double m = 1.0;
    for (int j = 0; j < cols; ++j) {
      A(static_cast<long>(i), j) = sq * m;
      m *= us[i];
    }
    b(static_cast<long>(i)) = sq * ys[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < cols) {
    out.fallback = true;
    out.value = alpha == 0 ? nw_predict(data, x0, config) : 0.0;
    return out;
  }
  const Eigen::VectorXd theta = qr.solve(b);
  double fact = 1.0;
  for (int i = 2; i <= alpha; ++i) fact *= i;
  out.value = fact * theta(alpha) / std::pow(h, alpha);
  return out;
}

double lpe_predict(std::span<const Sample1D> data, double x0, int alpha,
                   const LocalFitConfig& config) {
  return lpe_predict_full(data, x0, alpha, config).value;
}

}  // namespace padua
