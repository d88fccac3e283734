#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "padua/baselines.hpp"
#include "padua/oracles.hpp"
#include "padua/padua.hpp"

namespace padua {

/// Predictor under test: x in [-1,1] and a derivative order.
using Predictor = std::function<double(double, int)>;

/// Max over m equally spaced points of |D^alpha truth - predictor(., alpha)|.
double sup_error(const GroundTruth& truth, const Predictor& predictor,
                 int alpha, long m);

struct RunSpec {
  std::string algo = "padua";  // padua | nw | lpe
  std::vector<long> n_list;
  std::vector<std::uint64_t> seeds;
  std::vector<int> alphas{0, 1};
  long m = 4096;
  double sigma = 0.1;
  PaduaConfig padua;      // template; n and seed are filled per cell
  LocalFitConfig local;
};

/// One (algorithm, n, seed, alpha) cell of an error report.
struct BenchRow {
  std::string algo;
  long n = 0;
  std::uint64_t seed = 0;
  int alpha = 0;
  double sup_err = 0.0;
  double fit_time = 0.0;      // seconds
  double predict_time = 0.0;  // seconds per m-grid pass
  long model_bytes = 0;
  bool failed = false;
};

/// Fit one algorithm on a noisy version of `truth` and report every
/// requested derivative order from the same fitted object.
std::vector<BenchRow> run_cell(const RunSpec& spec, const GroundTruth& truth,
                               long n, std::uint64_t seed);

struct RateCurve {
  int alpha = 0;
  std::vector<long> n;
  std::vector<double> median_err;
  std::vector<double> mean_err;
  double slope = 0.0;
  double slope_stderr = 0.0;
};

struct RateResult {
  std::vector<BenchRow> rows;
  std::vector<RateCurve> curves;
  std::vector<std::string> warnings;
};

/// Median sup error per n and the log-log slope per derivative order.
/// Requires >= 4 distinct n and >= 3 seeds.
RateResult rate_study(const RunSpec& spec, const GroundTruth& truth);

/// Least-squares slope of log(err) against log(n) with its standard error.
/// Non-finite or non-positive errors are skipped.
std::pair<double, double> loglog_slope(const std::vector<long>& n,
                                       const std::vector<double>& err);

struct TimingRow {
  std::string algo;
  long n = 0;
  double fit_time = 0.0;
  double predict_time = 0.0;  // per m-grid pass, median of >= 3 repetitions
};

/// Warm-started wall-clock study of fit and prediction cost.
std::vector<TimingRow> timing_study(const RunSpec& spec,
                                    const GroundTruth& truth);

/// Serialized model footprint in bytes.
long model_size(const FitResult& fit);

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out);
void write_timing_csv(const std::vector<TimingRow>& rows, std::ostream& out);

/// Strip the timing columns (fit_time, predict_time) from a bench CSV; used
/// by the determinism check, which ignores wall-clock jitter.
std::string strip_timing_columns(const std::string& csv);

}  // namespace padua
