#include "padua/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "padua/errors.hpp"

namespace padua {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Sample1D> baseline_dataset(const GroundTruth& truth, double sigma,
                                       long n, std::uint64_t seed) {
  // Equispaced midpoint locations; the noise stream is derived from the seed.
  Rng rng = Rng(seed).split(3);
  std::vector<Sample1D> data(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double x = -1.0 + 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    double y = truth.eval(x, 0);
    if (sigma > 0.0) y += rng.normal(0.0, sigma);
    data[static_cast<std::size_t>(i)] = {x, y};
  }
  return data;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

// Time one grid pass of `pass`, repeating until the clock resolution stops
// mattering, and return seconds per pass.
double time_pass(const std::function<void()>& pass) {
  long reps = 1;
  for (;;) {
    const auto t0 = Clock::now();
    for (long r = 0; r < reps; ++r) pass();
    const double dt = seconds_since(t0);
    if (dt >= 5e-3 || reps >= (1L << 20)) return dt / static_cast<double>(reps);
    reps *= 4;
  }
}

}  // namespace

double sup_error(const GroundTruth& truth, const Predictor& predictor,
                 int alpha, long m) {
  if (m < 256) throw ValidationError("sup_error: m must be >= 256");
  double worst = 0.0;
  for (long i = 0; i < m; ++i) {
    const double x = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(m - 1);
    worst = std::max(worst, std::abs(truth.eval(x, alpha) - predictor(x, alpha)));
  }
  return worst;
}

long model_size(const FitResult& fit) {
  return static_cast<long>(serialize_fit(fit).size());
}

std::vector<BenchRow> run_cell(const RunSpec& spec, const GroundTruth& truth,
                               long n, std::uint64_t seed) {
  std::vector<BenchRow> rows;
  Predictor predictor;
  double fit_time = 0.0;
  long bytes = 0;
  bool fit_failed = false;

  if (spec.algo == "padua") {
    PaduaConfig cfg = spec.padua;
    cfg.n = n;
    cfg.seed = seed;
    cfg.sigma = spec.sigma;
    const Oracle oracle = noisy_oracle(truth, spec.sigma);
    try {
      const auto t0 = Clock::now();
      FitResult fit_result = fit(oracle, cfg);
      fit_time = seconds_since(t0);
      bytes = model_size(fit_result);
      predictor = [r = std::move(fit_result)](double x, int alpha) {
        return predict(r, x, alpha);
      };
    } catch (const ValidationError&) {
      fit_failed = true;
    }
  } else if (spec.algo == "nw" || spec.algo == "lpe") {
    const auto t0 = Clock::now();
    auto data = baseline_dataset(truth, spec.sigma, n, seed);
    fit_time = seconds_since(t0);
    bytes = static_cast<long>(data.size() * sizeof(Sample1D));
    LocalFitConfig local = spec.local;
    const bool is_nw = spec.algo == "nw";
    predictor = [data = std::move(data), local, is_nw](double x, int alpha) {
      if (is_nw) return alpha == 0 ? nw_predict(data, x, local) : 0.0;
      return lpe_predict(data, x, alpha, local);
    };
  } else {
    throw ValidationError("run_cell: unknown algorithm " + spec.algo);
  }

  double predict_time = 0.0;
  if (!fit_failed) {
    predict_time = time_pass([&] {
      volatile double sink = 0.0;
      for (long i = 0; i < spec.m; ++i) {
        const double x =
            -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(spec.m - 1);
        sink = sink + predictor(x, 0);
      }
    });
  }

  for (int alpha : spec.alphas) {
    BenchRow row;
    row.algo = spec.algo;
    row.n = n;
    row.seed = seed;
    row.alpha = alpha;
    row.fit_time = fit_time;
    row.predict_time = predict_time;
    row.model_bytes = bytes;
    const bool unsupported =
        (spec.algo == "nw" && alpha > 0) ||
        (spec.algo == "lpe" && alpha > spec.local.order);
    if (fit_failed || unsupported) {
      row.failed = true;
    } else {
      row.sup_err = sup_error(truth, predictor, alpha, spec.m);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::pair<double, double> loglog_slope(const std::vector<long>& n,
                                       const std::vector<double>& err) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < n.size() && i < err.size(); ++i) {
    if (!(err[i] > 0.0) || !std::isfinite(err[i])) continue;
    lx.push_back(std::log(static_cast<double>(n[i])));
    ly.push_back(std::log(err[i]));
  }
  const std::size_t k = lx.size();
  if (k < 2) throw ValidationError("loglog_slope: need >= 2 usable points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0.0) throw ValidationError("loglog_slope: degenerate n values");
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double fit = my + slope * (lx[i] - mx);
    rss += (ly[i] - fit) * (ly[i] - fit);
  }
  const double stderr_ =
      k > 2 ? std::sqrt(rss / static_cast<double>(k - 2) / sxx) : 0.0;
  return {slope, stderr_};
}

RateResult rate_study(const RunSpec& spec, const GroundTruth& truth) {
  std::set<long> distinct(spec.n_list.begin(), spec.n_list.end());
  if (distinct.size() < 4)
    throw ValidationError("rate_study: need >= 4 distinct n values");
  if (spec.seeds.size() < 3)
    throw ValidationError("rate_study: need >= 3 seeds");

  RateResult out;
  for (long n : spec.n_list)
    for (std::uint64_t seed : spec.seeds)
      for (auto& row : run_cell(spec, truth, n, seed))
        out.rows.push_back(std::move(row));

  for (int alpha : spec.alphas) {
    RateCurve curve;
    curve.alpha = alpha;
    for (long n : distinct) {
      std::vector<double> errs;
      for (const BenchRow& row : out.rows)
        if (row.alpha == alpha && row.n == n && !row.failed)
          errs.push_back(row.sup_err);
      if (errs.empty()) continue;
      curve.n.push_back(n);
      curve.median_err.push_back(median(errs));
      double mean = 0.0;
      for (double e : errs) mean += e;
      curve.mean_err.push_back(mean / static_cast<double>(errs.size()));
    }
    std::vector<long> ns;
    std::vector<double> errs;
    for (std::size_t i = 0; i < curve.n.size(); ++i) {
      if (curve.median_err[i] <= 0.0) {
        out.warnings.push_back("rate_study: zero median error at n=" +
                               std::to_string(curve.n[i]) + " excluded");
        continue;
      }
      ns.push_back(curve.n[i]);
      errs.push_back(curve.median_err[i]);
    }
    if (ns.size() >= 2) {
      const auto [slope, se] = loglog_slope(ns, errs);
      curve.slope = slope;
      curve.slope_stderr = se;
    } else {
      curve.slope = std::numeric_limits<double>::quiet_NaN();
      curve.slope_stderr = std::numeric_limits<double>::quiet_NaN();
    }
    out.curves.push_back(std::move(curve));
  }
  return out;
}

std::vector<TimingRow> timing_study(const RunSpec& spec,
                                    const GroundTruth& truth) {
  std::vector<TimingRow> out;
  for (long n : spec.n_list) {
    std::vector<double> fit_times, predict_times;
    const int reps = 3;
    // Warm-up pass, then the measured repetitions.
    for (int r = 0; r <= reps; ++r) {
      const std::uint64_t seed = spec.seeds.empty() ? 1 : spec.seeds.front();
      auto rows = run_cell(spec, truth, n, seed + static_cast<std::uint64_t>(r));
      if (r == 0) continue;
      if (!rows.empty() && !rows.front().failed) {
        fit_times.push_back(rows.front().fit_time);
        predict_times.push_back(rows.front().predict_time);
      }
    }
    TimingRow row;
    row.algo = spec.algo;
    row.n = n;
    row.fit_time = median(fit_times);
    row.predict_time = median(predict_times);
    out.push_back(row);
  }
  return out;
}

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "algo,n,seed,alpha,sup_error,fit_time,predict_time,model_bytes,failed\n";
  char buf[256];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%ld,%llu,%d,%.17g,%.6g,%.6g,%ld,%d\n",
                  r.algo.c_str(), r.n, static_cast<unsigned long long>(r.seed),
                  r.alpha, r.sup_err, r.fit_time, r.predict_time, r.model_bytes,
                  r.failed ? 1 : 0);
    out << buf;
  }
}

void write_timing_csv(const std::vector<TimingRow>& rows, std::ostream& out) {
  out << "algo,n,fit_time,predict_time\n";
  char buf[128];
  for (const TimingRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%ld,%.6g,%.6g\n", r.algo.c_str(), r.n,
                  r.fit_time, r.predict_time);
    out << buf;
  }
}

std::string strip_timing_columns(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i == 5 || i == 6) continue;  // fit_time, predict_time
      if (!out.empty() && out.back() != '\n') out += ',';
      out += cells[i];
    }
    out += '\n';
  }
  return out;
}

}  // namespace padua
