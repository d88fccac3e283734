#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "padua/padua.hpp"
#include "padua/trig.hpp"

namespace padua {

/// A known target function with evaluable derivatives, used as ground truth
/// by tests and the benchmark harness. eval takes a point and a derivative
/// multi-index; all targets are 2-periodic in every coordinate.
struct GroundTruth {
  int dim = 1;
  double nu = 0.0;  // infinity() for analytic targets
  double norm_bound = 0.0;
  bool periodic = true;
  std::function<double(std::span<const double>, std::span<const int>)> eval_fn;

  double eval(std::span<const double> x, std::span<const int> alpha) const {
    return eval_fn(x, alpha);
  }
  double eval(double x, int alpha = 0) const {
    const double xs[1] = {x};
    const int as[1] = {alpha};
    return eval_fn(std::span<const double>(xs), std::span<const int>(as));
  }
};

/// Exact trigonometric polynomial target (nu = infinity).
GroundTruth trig_truth(TrigPoly poly);

/// f(x) = sum_{t=1}^{T} t^{-(nu+1)} cos(t pi x + psi_t) with seeded phases.
/// Lies in C^nu with per-order norm bounds sum_t t^{alpha-nu-1} pi^alpha.
GroundTruth decay_truth(double nu, int T, std::uint64_t seed);

/// Wrap a ground truth into a Gaussian-noise query oracle.
Oracle noisy_oracle(const GroundTruth& g, double sigma);

struct Wav {
  std::vector<double> samples;  // mono, in [-1, 1]
  int sample_rate = 0;
};

/// PCM WAV reader: 16-bit integer (scaled by 1/32768) or 32-bit float,
/// mono or stereo (downmixed by channel mean). Throws IoError otherwise.
Wav wav_load(const std::string& path);

/// One near-periodic slice of a signal. samples holds period_length()+1
/// values; the last one closes the period and both ends are near zero.
struct AudioSegment {
  std::vector<double> samples;
  int sample_rate = 0;
  long source_offset = 0;

  long period_length() const { return static_cast<long>(samples.size()) - 1; }
};

/// Greedy left-to-right scan for non-overlapping index pairs (i, j) with
/// |s_i|, |s_j| <= tau and min_len <= j - i <= max_len. tau < 0 selects the
/// default 0.01 * max|s|.
std::vector<AudioSegment> extract_periodic_segments(
    std::span<const double> samples, long min_len = 500, long max_len = 1000,
    double tau = -1.0, int sample_rate = 0);

/// Periodic cubic-spline interpolant through the segment samples with the
/// domain rescaled to [-1, 1] and the seam value shared by both endpoints.
GroundTruth segment_to_function(const AudioSegment& seg);

void write_segments_csv(std::span<const AudioSegment> segments,
                        std::ostream& out);

}  // namespace padua
