#pragma once

#include <span>
#include <vector>

namespace padua {

enum class KernelChoice { Epanechnikov, Gaussian, Uniform };

/// Symmetric nonnegative smoothing kernel K(u); Epanechnikov and Uniform
/// vanish for |u| > 1.
double baseline_kernel(KernelChoice k, double u);

struct LocalFitConfig {
  int order = 1;               // polynomial order, capped at 6
  double bandwidth = 0.0;      // <= 0 selects the automatic bandwidth
  KernelChoice kernel = KernelChoice::Epanechnikov;
  double nu = 2.0;             // smoothness used by the automatic bandwidth
  double bandwidth_scale = 1.0;
};

struct Sample1D {
  double x = 0.0;
  double y = 0.0;
};

/// h = bandwidth_scale * n^{-1/(2 nu + 1)}, clamped to (0, 2].
double auto_bandwidth(std::size_t n, const LocalFitConfig& config);

/// Nadaraya-Watson estimate; returns 0 when the weight sum is below 1e-12.
double nw_predict(std::span<const Sample1D> data, double x0,
                  const LocalFitConfig& config);

struct LpeOutput {
  double value = 0.0;
  bool fallback = false;  // singular local system handled by the NW fallback
};

/// Local polynomial estimate of the alpha-th derivative at x0. The local
/// monomials are centered at x0 and scaled by the bandwidth, so the
/// coefficient is rescaled by alpha!/h^alpha on the way out.
LpeOutput lpe_predict_full(std::span<const Sample1D> data, double x0, int alpha,
                           const LocalFitConfig& config);

double lpe_predict(std::span<const Sample1D> data, double x0, int alpha,
                   const LocalFitConfig& config);

}  // namespace padua
