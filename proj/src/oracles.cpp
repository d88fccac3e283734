#include "padua/oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

#include "padua/errors.hpp"

namespace padua {

namespace {
constexpr double kPi = std::numbers::pi;
}

GroundTruth trig_truth(TrigPoly poly) {
  GroundTruth g;
  g.dim = poly.dim;
  g.nu = std::numeric_limits<double>::infinity();
  double bound = 0.0;
  for (double c : poly.theta) bound += std::abs(c);
  g.norm_bound = bound;
  g.eval_fn = [p = std::move(poly)](std::span<const double> x,
                                    std::span<const int> alpha) {
    return trig_eval(p, x, alpha);
  };
  return g;
}

GroundTruth decay_truth(double nu, int T, std::uint64_t seed) {
  if (!(nu > 0.0)) throw ValidationError("decay_truth: nu must be positive");
  if (T < 1) throw ValidationError("decay_truth: T must be >= 1");
  Rng rng(seed);
  std::vector<double> phases(static_cast<std::size_t>(T));
  for (double& psi : phases) psi = rng.uniform(0.0, 2.0 * kPi);

  GroundTruth g;
  g.dim = 1;
  g.nu = nu;
  double bound = 0.0;
  for (int a = 0; a <= static_cast<int>(std::ceil(nu)); ++a) {
    double s = 0.0;
    for (int t = 1; t <= T; ++t)
      s += std::pow(t, a - nu - 1.0) * std::pow(kPi, a);
    bound = std::max(bound, s);
  }
  g.norm_bound = bound;
  g.eval_fn = [nu, T, phases = std::move(phases)](std::span<const double> x,
                                                  std::span<const int> alpha) {
    const int a = alpha.empty() ? 0 : alpha[0];
    double s = 0.0;
    for (int t = 1; t <= T; ++t) {
      const double amp =
          std::pow(t, -(nu + 1.0)) * std::pow(t * kPi, a);
      s += amp * std::cos(t * kPi * x[0] + phases[static_cast<std::size_t>(t - 1)] +
                          a * kPi / 2.0);
    }
    return s;
  };
  return g;
}

Oracle noisy_oracle(const GroundTruth& g, double sigma) {
  if (sigma < 0.0) throw ValidationError("noisy_oracle: sigma must be >= 0");
  return [g, sigma](const Point& x, Rng& rng) {
    const std::vector<int> zeros(x.size(), 0);
    const double value = g.eval(x, zeros);
    return sigma > 0.0 ? value + rng.normal(0.0, sigma) : value;
  };
}

namespace {

std::uint32_t read_u32(const std::string& b, std::size_t off) {
  std::uint32_t v;
  std::memcpy(&v, b.data() + off, 4);
  return v;
}

std::uint16_t read_u16(const std::string& b, std::size_t off) {
  std::uint16_t v;
  std::memcpy(&v, b.data() + off, 2);
  return v;
}

}  // namespace

Wav wav_load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("wav_load: cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || bytes.compare(0, 4, "RIFF") != 0 ||
      bytes.compare(8, 4, "WAVE") != 0)
    throw IoError("wav_load: malformed RIFF header");

  int channels = 0, bits = 0, format = 0;
  Wav wav;
  std::size_t data_off = 0, data_len = 0;
  std::size_t off = 12;
  while (off + 8 <= bytes.size()) {
    const std::string id = bytes.substr(off, 4);
    const std::size_t len = read_u32(bytes, off + 4);
    off += 8;
    if (off + len > bytes.size())
      throw IoError("wav_load: truncated chunk " + id);
    if (id == "fmt ") {
      if (len < 16) throw IoError("wav_load: short fmt chunk");
      format = read_u16(bytes, off);
      channels = read_u16(bytes, off + 2);
      wav.sample_rate = static_cast<int>(read_u32(bytes, off + 4));
      bits = read_u16(bytes, off + 14);
    } else if (id == "data") {
      data_off = off;
      data_len = len;
    }
    off += len + (len % 2);  // chunks are word-aligned
  }
  if (channels == 0 || data_off == 0)
    throw IoError("wav_load: missing fmt or data chunk");
  if (channels != 1 && channels != 2)
    throw IoError("wav_load: only mono or stereo supported");
  const bool pcm16 = format == 1 && bits == 16;
  const bool float32 = format == 3 && bits == 32;
  if (!pcm16 && !float32)
    throw IoError("wav_load: unsupported encoding (need 16-bit PCM or 32-bit float)");

  const std::size_t bytes_per = static_cast<std::size_t>(bits / 8) *
                                static_cast<std::size_t>(channels);
  const std::size_t frames = data_len / bytes_per;
  wav.samples.resize(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (int c = 0; c < channels; ++c) {
      const std::size_t at = data_off + f * bytes_per +
                             static_cast<std::size_t>(c) * (bits / 8);
      if (pcm16) {
        std::int16_t v;
        std::memcpy(&v, bytes.data() + at, 2);
        acc += static_cast<double>(v) / 32768.0;
      } else {
        float v;
        std::memcpy(&v, bytes.data() + at, 4);
        acc += static_cast<double>(v);
      }
    }
    wav.samples[f] = std::clamp(acc / channels, -1.0, 1.0);
  }
  return wav;
}

std::vector<AudioSegment> extract_periodic_segments(
    std::span<const double> samples, long min_len, long max_len, double tau,
    int sample_rate) {
  if (min_len < 2 || max_len < min_len)
    throw ValidationError("extract_periodic_segments: bad length bounds");
  const long n = static_cast<long>(samples.size());
  if (tau < 0.0) {
    double peak = 0.0;
    for (double s : samples) peak = std::max(peak, std::abs(s));
    tau = 0.01 * peak;
  }
  std::vector<AudioSegment> out;
  long i = 0;
  while (i + min_len < n) {
    if (std::abs(samples[static_cast<std::size_t>(i)]) > tau) {
      ++i;
      continue;
    }
    long found = -1;
    const long j_hi = std::min(i + max_len, n - 1);
    for (long j = i + min_len; j <= j_hi; ++j) {
      if (std::abs(samples[static_cast<std::size_t>(j)]) <= tau) {
        found = j;
        break;
      }
    }
    if (found < 0) {
      ++i;
      continue;
    }
    AudioSegment seg;
    seg.sample_rate = sample_rate;
    seg.source_offset = i;
    seg.samples.assign(samples.begin() + i, samples.begin() + found + 1);
    out.push_back(std::move(seg));
    i = found;
  }
  return out;
}

namespace {

/// Second derivatives of the periodic natural cubic spline through values
/// v_0..v_{m-1} on a uniform cyclic grid with spacing h.
std::vector<double> periodic_spline_moments(const std::vector<double>& v,
                                            double h) {
  const int m = static_cast<int>(v.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd r(m);
  for (int i = 0; i < m; ++i) {
    const int prev = (i + m - 1) % m;
    const int next = (i + 1) % m;
    A(i, prev) += 1.0;
    A(i, i) += 4.0;
    A(i, next) += 1.0;
    r(i) = 6.0 *
           (v[static_cast<std::size_t>(next)] - 2.0 * v[static_cast<std::size_t>(i)] +
            v[static_cast<std::size_t>(prev)]) /
           (h * h);
  }
  const Eigen::VectorXd mom = A.partialPivLu().solve(r);
  return std::vector<double>(mom.data(), mom.data() + m);
}

}  // namespace

GroundTruth segment_to_function(const AudioSegment& seg) {
  const long m = seg.period_length();
  if (m < 3) throw ValidationError("segment_to_function: too few samples");
  std::vector<double> v(seg.samples.begin(), seg.samples.end() - 1);
  // The seam knot carries the mean of the two near-zero endpoint samples.
  v[0] = 0.5 * (seg.samples.front() + seg.samples.back());
  const double h = 2.0 / static_cast<double>(m);
  std::vector<double> mom = periodic_spline_moments(v, h);

  GroundTruth g;
  g.dim = 1;
  g.nu = std::numeric_limits<double>::infinity();
  double peak = 0.0;
  for (double s : v) peak = std::max(peak, std::abs(s));
  g.norm_bound = peak;
  g.eval_fn = [v = std::move(v), mom = std::move(mom), h,
               m](std::span<const double> x, std::span<const int> alpha) {
    const int a = alpha.empty() ? 0 : alpha[0];
    if (a >= 4) return 0.0;
    double w = wrap(x[0]);
    double s = (w + 1.0) / h;
    long i = static_cast<long>(std::floor(s));
    i = std::clamp(i, 0L, m - 1);
    const double xi = (s - static_cast<double>(i)) * h;
    const std::size_t i0 = static_cast<std::size_t>(i);
    const std::size_t i1 = static_cast<std::size_t>((i + 1) % m);
    const double m0 = mom[i0], m1 = mom[i1];
    const double v0 = v[i0], v1 = v[i1];
    const double r = h - xi;
    switch (a) {
      case 0:
        return m0 * r * r * r / (6.0 * h) + m1 * xi * xi * xi / (6.0 * h) +
               (v0 - m0 * h * h / 6.0) * r / h + (v1 - m1 * h * h / 6.0) * xi / h;
      case 1:
        return -m0 * r * r / (2.0 * h) + m1 * xi * xi / (2.0 * h) +
               (v1 - v0) / h - (m1 - m0) * h / 6.0;
      case 2:
        return m0 * r / h + m1 * xi / h;
      default:
        return (m1 - m0) / h;
    }
  };
  return g;
}

void write_segments_csv(std::span<const AudioSegment> segments,
                        std::ostream& out) {
  out << "segment,index,value\n";
  char buf[64];
  for (std::size_t k = 0; k < segments.size(); ++k) {
    for (std::size_t i = 0; i < segments[k].samples.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g\n", k, i,
                    segments[k].samples[i]);
      out << buf;
    }
  }
}

}  // namespace padua
