// Copyright (c) 2026 The lff authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lff/timedomain.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace lff {

std::string ToString(TimeKernelKind kind) {
  return kind == TimeKernelKind::kSinc ? "sinc" : "gabor";
}

TimeKernelKind TimeKernelKindFromString(const std::string& s) {
  if (s == "sinc") return TimeKernelKind::kSinc;
  if (s == "gabor") return TimeKernelKind::kGabor;
  throw ConfigError("unknown time kernel kind: " + s);
}

void TimeKernelParams::Validate(int sample_rate) const {
  if (kernel_len <= 0 || kernel_len % 2 == 0)
    throw ConfigError("kernel_len must be a positive odd integer");
  if (stride < 1) throw ConfigError("stride must be >= 1");
  if (pool < 1) throw ConfigError("pool must be >= 1");
  double nyquist = 0.5 * sample_rate;
  if (kind == TimeKernelKind::kSinc) {
    if (low_hz.empty() || low_hz.size() != band_hz.size())
      throw ConfigError("sinc bank needs matching low_hz and band_hz arrays");
    for (size_t i = 0; i < low_hz.size(); ++i) {
      double lo = low_hz[i], hi = low_hz[i] + band_hz[i];
      if (!(0.0 < lo && lo < hi && hi < nyquist))
        throw DomainError("sinc cutoffs must satisfy 0 < low < high < Nyquist");
    }
  } else {
    if (center_hz.empty() || center_hz.size() != sigma_s.size())
      throw ConfigError("gabor bank needs matching center_hz and sigma_s arrays");
    for (size_t i = 0; i < center_hz.size(); ++i) {
      if (!(0.0 < center_hz[i] && center_hz[i] < nyquist))
        throw DomainError("gabor center must lie strictly between 0 and Nyquist");
      if (sigma_s[i] <= 0.0) throw DomainError("gabor sigma must be positive");
    }
  }
}

namespace {

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  double px = kPi * x;
  return std::sin(px) / px;
}

// Hamming window evaluated at |d| samples from the center of an odd-length
// kernel; even symmetry is exact because only |d| enters.
double HammingAt(int d, int half) {
  if (half == 0) return 1.0;
  return 0.54 + 0.46 * std::cos(kPi * std::abs(d) / static_cast<double>(half));
}

}  // namespace

std::vector<double> MakeSincKernel(double low_hz, double high_hz, int kernel_len,
                                   int sample_rate) {
  if (kernel_len <= 0 || kernel_len % 2 == 0)
    throw DomainError("kernel_len must be a positive odd integer");
  double nyquist = 0.5 * sample_rate;
  if (!(0.0 < low_hz && low_hz < high_hz && high_hz < nyquist))
    throw DomainError("sinc cutoffs must satisfy 0 < low < high < Nyquist");

  int half = (kernel_len - 1) / 2;
  double f1 = low_hz / sample_rate;
  double f2 = high_hz / sample_rate;
  std::vector<double> g(static_cast<size_t>(kernel_len));
  for (int t = 0; t < kernel_len; ++t) {
    int d = t - half;
    double ad = static_cast<double>(std::abs(d));
    double v = 2.0 * f2 * Sinc(2.0 * f2 * ad) - 2.0 * f1 * Sinc(2.0 * f1 * ad);
    g[t] = v * HammingAt(d, half);
  }
  return g;
}

std::vector<double> MakeGaborKernel(double center_hz, double sigma_s,
                                    int kernel_len, int sample_rate) {
  if (kernel_len <= 0 || kernel_len % 2 == 0)
    throw DomainError("kernel_len must be a positive odd integer");
  if (!(0.0 < center_hz && center_hz < 0.5 * sample_rate))
    throw DomainError("gabor center must lie strictly between 0 and Nyquist");
  if (sigma_s <= 0.0) throw DomainError("gabor sigma must be positive");

  int half = (kernel_len - 1) / 2;
  std::vector<double> g(static_cast<size_t>(kernel_len));
  for (int t = 0; t < kernel_len; ++t) {
    double ad = static_cast<double>(std::abs(t - half));
    double ts = ad / sample_rate;
    g[t] = std::exp(-ts * ts / (2.0 * sigma_s * sigma_s)) *
           std::cos(kTwoPi * center_hz * ts);
  }
  return g;
}

namespace {

// Odd quadrature partner of MakeGaborKernel; sine is odd so the sign of d
// is applied explicitly to keep the magnitudes mirror-exact.
std::vector<double> MakeGaborKernelSine(double center_hz, double sigma_s,
                                        int kernel_len, int sample_rate) {
  int half = (kernel_len - 1) / 2;
  std::vector<double> g(static_cast<size_t>(kernel_len));
  for (int t = 0; t < kernel_len; ++t) {
    int d = t - half;
    double ts = static_cast<double>(std::abs(d)) / sample_rate;
    double v = std::exp(-ts * ts / (2.0 * sigma_s * sigma_s)) *
               std::sin(kTwoPi * center_hz * ts);
    g[t] = d < 0 ? -v : v;
  }
  return g;
}

std::vector<double> MelBandEdgesHz(int n_filters, int sample_rate) {
  double mel_max = MelFromHz(0.5 * sample_rate);
  std::vector<double> hz(static_cast<size_t>(n_filters) + 2);
  for (int j = 0; j < n_filters + 2; ++j)
    hz[j] = HzFromMel(mel_max * static_cast<double>(j) / (n_filters + 1));
  return hz;
}

}  // namespace

TimeKernelParams MelSpacedSincBank(int n_filters, int kernel_len, int stride,
                                   int pool, int sample_rate) {
  if (n_filters < 1) throw ConfigError("need at least one filter");
  std::vector<double> edges = MelBandEdgesHz(n_filters, sample_rate);
  TimeKernelParams p;
  p.kind = TimeKernelKind::kSinc;
  p.kernel_len = kernel_len;
  p.stride = stride;
  p.pool = pool;
  for (int i = 0; i < n_filters; ++i) {
    double lo = std::max(edges[i], 1.0);  // keep the lowest cutoff above DC
    double hi = std::min(edges[i + 2], 0.5 * sample_rate - 1.0);
    p.low_hz.push_back(lo);
    p.band_hz.push_back(hi - lo);
  }
  p.Validate(sample_rate);
  return p;
}

TimeKernelParams MelSpacedGaborBank(int n_filters, int kernel_len, int stride,
                                    int pool, int sample_rate) {
  if (n_filters < 1) throw ConfigError("need at least one filter");
  std::vector<double> edges = MelBandEdgesHz(n_filters, sample_rate);
  TimeKernelParams p;
  p.kind = TimeKernelKind::kGabor;
  p.kernel_len = kernel_len;
  p.stride = stride;
  p.pool = pool;
  for (int i = 0; i < n_filters; ++i) {
    // Frequency-domain sigma of a quarter band width; time sigma is its
    // reciprocal bandwidth 1/(2*pi*sigma_f).
    double sigma_f = std::max((edges[i + 2] - edges[i]) / 4.0, 1.0);
    p.center_hz.push_back(edges[i + 1]);
    p.sigma_s.push_back(1.0 / (kTwoPi * sigma_f));
  }
  p.Validate(sample_rate);
  return p;
}

int TimeFrontendNumFrames(int num_samples, int kernel_len, int stride, int pool) {
  if (num_samples < kernel_len)
    throw TooShortError("signal shorter than one kernel placement");
  int conv_frames = (num_samples - kernel_len) / stride + 1;
  return conv_frames / pool;
}

FeatureMatrix TimeFrontendForward(const AudioBuffer& audio,
                                  const TimeKernelParams& params,
                                  int sample_rate, double epsilon) {
  params.Validate(sample_rate);
  if (epsilon <= 0.0) throw DomainError("epsilon must be positive");
  int n_samples = audio.NumSamples();
  if (n_samples < params.kernel_len)
    throw TooShortError("signal shorter than one kernel placement");

  // Mean/variance normalization of the whole waveform.
  double mean = 0.0;
  for (double s : audio.samples) mean += s;
  mean /= n_samples;
  double var = 0.0;
  for (double s : audio.samples) var += (s - mean) * (s - mean);
  var /= n_samples;
  double inv_std = 1.0 / std::sqrt(var + 1e-12);
  std::vector<double> x(static_cast<size_t>(n_samples));
  for (int t = 0; t < n_samples; ++t) x[t] = (audio.samples[t] - mean) * inv_std;

  int m = params.NumFilters();
  int conv_frames = (n_samples - params.kernel_len) / params.stride + 1;
  int out_frames = conv_frames / params.pool;

  Matrix rectified(conv_frames, m);
  for (int i = 0; i < m; ++i) {
    if (params.kind == TimeKernelKind::kSinc) {
      std::vector<double> g = MakeSincKernel(
          params.low_hz[i], params.low_hz[i] + params.band_hz[i],
          params.kernel_len, sample_rate);
      for (int j = 0; j < conv_frames; ++j) {
        const double* seg = x.data() + static_cast<size_t>(j) * params.stride;
        double acc = 0.0;
        for (int t = 0; t < params.kernel_len; ++t) acc += seg[t] * g[t];
        rectified.At(j, i) = std::abs(acc);
      }
    } else {
      std::vector<double> gc = MakeGaborKernel(params.center_hz[i], params.sigma_s[i],
                                               params.kernel_len, sample_rate);
      std::vector<double> gs = MakeGaborKernelSine(
          params.center_hz[i], params.sigma_s[i], params.kernel_len, sample_rate);
      for (int j = 0; j < conv_frames; ++j) {
        const double* seg = x.data() + static_cast<size_t>(j) * params.stride;
        double ac = 0.0, as = 0.0;
        for (int t = 0; t < params.kernel_len; ++t) {
          ac += seg[t] * gc[t];
          as += seg[t] * gs[t];
        }
        rectified.At(j, i) = ac * ac + as * as;
      }
    }
  }

  FeatureMatrix out;
  out.values = Matrix(out_frames, m);
  for (int j = 0; j < out_frames; ++j) {
    for (int i = 0; i < m; ++i) {
      double peak = 0.0;
      for (int p = 0; p < params.pool; ++p)
        peak = std::max(peak, rectified.At(j * params.pool + p, i));
      out.values.At(j, i) = 10.0 * std::log10(peak + epsilon);
    }
  }
  return out;
}

double CentralQuarterEnergyFraction(const std::vector<double>& kernel) {
  if (kernel.empty()) throw DomainError("empty kernel");
  int len = static_cast<int>(kernel.size());
  int center = (len - 1) / 2;
  int half_quarter = len / 8;
  double total = 0.0, central = 0.0;
  for (int t = 0; t < len; ++t) {
    double e = kernel[t] * kernel[t];
    total += e;
    if (std::abs(t - center) <= half_quarter) central += e;
  }
  if (total == 0.0) throw DomainError("kernel has no energy");
  return central / total;
}

ScalingReport DemonstrateScalingTradeoff(double band_hz, int kernel_len,
                                         int sample_rate) {
  double nyquist = 0.5 * sample_rate;
  if (!(0.0 < band_hz && band_hz < nyquist))
    throw DomainError("band_hz must lie strictly between 0 and Nyquist");
  double center = 0.5 * nyquist;
  double lo = center - 0.5 * band_hz;
  double hi = center + 0.5 * band_hz;
  if (lo <= 0.0) {
    lo = 1.0;
    hi = 1.0 + band_hz;
  }
  std::vector<double> g = MakeSincKernel(lo, hi, kernel_len, sample_rate);
  ScalingReport report;
  report.fraction_of_energy_in_central_quarter = CentralQuarterEnergyFraction(g);
  return report;
}

std::string TimeKernelParamsToJson(const TimeKernelParams& params) {
  nlohmann::json j;
  j["kind"] = ToString(params.kind);
  j["kernel_len"] = params.kernel_len;
  j["stride"] = params.stride;
  j["pool"] = params.pool;
  if (params.kind == TimeKernelKind::kSinc) {
    j["low_hz"] = params.low_hz;
    j["band_hz"] = params.band_hz;
  } else {
    j["center_hz"] = params.center_hz;
    j["sigma_s"] = params.sigma_s;
  }
  return j.dump(2);
}

TimeKernelParams TimeKernelParamsFromJson(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  TimeKernelParams params;
  params.kind = TimeKernelKindFromString(j.at("kind").get<std::string>());
  params.kernel_len = j.at("kernel_len").get<int>();
  params.stride = j.at("stride").get<int>();
  params.pool = j.at("pool").get<int>();
  if (params.kind == TimeKernelKind::kSinc) {
    params.low_hz = j.at("low_hz").get<std::vector<double>>();
    params.band_hz = j.at("band_hz").get<std::vector<double>>();
  } else {
    params.center_hz = j.at("center_hz").get<std::vector<double>>();
    params.sigma_s = j.at("sigma_s").get<std::vector<double>>();
  }
  return params;
}

}  // namespace lff
