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

#include "oracles.h"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>

namespace lff::test {

std::vector<double> OracleDftFrame(const std::vector<double>& windowed_frame,
                                   int n_fft, int num_bins, bool power) {
  std::vector<double> out(static_cast<size_t>(num_bins));
  for (int k = 0; k < num_bins; ++k) {
    auto [re, im] = OracleDftBin(windowed_frame, n_fft, k);
    double p = re * re + im * im;
    out[k] = power ? p : std::sqrt(p);
  }
  return out;
}

std::pair<double, double> OracleDftBin(const std::vector<double>& windowed_frame,
                                       int n_fft, int bin) {
  double re = 0.0, im = 0.0;
  int len = std::min<int>(static_cast<int>(windowed_frame.size()), n_fft);
  for (int t = 0; t < len; ++t) {
    double angle = -2.0 * kPi * static_cast<double>(bin) * t / n_fft;
    re += windowed_frame[t] * std::cos(angle);
    im += windowed_frame[t] * std::sin(angle);
  }
  return {re, im};
}

Matrix OracleSpectrum(const AudioBuffer& audio, const StftConfig& config) {
  int num_frames = (audio.NumSamples() - config.window_len) / config.hop + 1;
  int num_bins = config.n_fft / 2;

  // Window re-derived here rather than taken from the library.
  std::vector<double> window(static_cast<size_t>(config.window_len), 1.0);
  for (int t = 0; t < config.window_len; ++t) {
    double phase = 2.0 * kPi * t / config.window_len;
    if (config.window == WindowKind::kHann) {
      window[t] = 0.5 * (1.0 - std::cos(phase));
    } else if (config.window == WindowKind::kHamming) {
      window[t] = 0.54 - 0.46 * std::cos(phase);
    }
  }

  Matrix out(num_frames, num_bins);
  std::vector<double> frame(static_cast<size_t>(config.window_len));
  for (int j = 0; j < num_frames; ++j) {
    for (int t = 0; t < config.window_len; ++t)
      frame[t] = audio.samples[static_cast<size_t>(j) * config.hop + t] * window[t];
    std::vector<double> bins = OracleDftFrame(
        frame, config.n_fft, num_bins, config.spectrum == SpectrumKind::kPower);
    for (int k = 0; k < num_bins; ++k) out.At(j, k) = bins[k];
  }
  return out;
}

Matrix OracleMelWeights(int n_filters, int n_bins, int sample_rate) {
  // Mel scale written out directly.
  auto to_mel = [](double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); };
  auto from_mel = [](double mel) {
    return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
  };
  double nyquist = 0.5 * sample_rate;
  double bins_per_hz = static_cast<double>(n_bins - 1) / nyquist;

  std::vector<double> centers(static_cast<size_t>(n_filters) + 2);
  for (int j = 0; j < n_filters + 2; ++j) {
    double mel = to_mel(nyquist) * j / (n_filters + 1);
    centers[j] = from_mel(mel) * bins_per_hz;
  }

  Matrix w(n_bins, n_filters);
  for (int i = 0; i < n_filters; ++i) {
    double center = centers[i + 1];
    double base = centers[i + 2] - centers[i];
    for (int n = 0; n < n_bins; ++n) {
      double v = 1.0 - 2.0 * std::abs(n - center) / base;
      w.At(n, i) = std::max(0.0, v);
    }
  }
  return w;
}

Matrix OracleLogMelFeatures(const Matrix& spectrum, int n_filters, int n_bins,
                            int sample_rate, double epsilon) {
  Matrix w = OracleMelWeights(n_filters, n_bins, sample_rate);
  Matrix out(spectrum.rows, n_filters);
  for (int t = 0; t < spectrum.rows; ++t) {
    for (int i = 0; i < n_filters; ++i) {
      double acc = 0.0;
      for (int n = 0; n < n_bins; ++n) acc += spectrum.At(t, n) * w.At(n, i);
      out.At(t, i) = 10.0 * std::log10(acc + epsilon);
    }
  }
  return out;
}

namespace {

void PutU16(std::ofstream& os, uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF)};
  os.write(b, 2);
}

void PutU32(std::ofstream& os, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
               static_cast<char>((v >> 16) & 0xFF),
               static_cast<char>((v >> 24) & 0xFF)};
  os.write(b, 4);
}

int16_t QuantizePcm16(double s) {
  double scaled = std::round(s * 32768.0);
  scaled = std::min(scaled, 32767.0);
  scaled = std::max(scaled, -32768.0);
  return static_cast<int16_t>(scaled);
}

}  // namespace

void WriteWavRawInt16(const std::string& path,
                      const std::vector<int16_t>& interleaved, int channels,
                      int sample_rate, uint16_t format_tag,
                      uint16_t bits_per_sample) {
  std::ofstream os(path, std::ios::binary);
  uint32_t data_bytes = static_cast<uint32_t>(interleaved.size()) * 2;
  os.write("RIFF", 4);
  PutU32(os, 36 + data_bytes);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  PutU32(os, 16);
  PutU16(os, format_tag);
  PutU16(os, static_cast<uint16_t>(channels));
  PutU32(os, static_cast<uint32_t>(sample_rate));
  PutU32(os, static_cast<uint32_t>(sample_rate * channels * 2));
  PutU16(os, static_cast<uint16_t>(channels * 2));
  PutU16(os, bits_per_sample);
  os.write("data", 4);
  PutU32(os, data_bytes);
  for (int16_t s : interleaved) PutU16(os, static_cast<uint16_t>(s));
}

void WriteWavPcm16(const std::string& path, const std::vector<double>& samples,
                   int sample_rate) {
  std::vector<int16_t> raw(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) raw[i] = QuantizePcm16(samples[i]);
  WriteWavRawInt16(path, raw, 1, sample_rate);
}

void WriteWavPcm16Stereo(const std::string& path, const std::vector<double>& left,
                         const std::vector<double>& right, int sample_rate) {
  std::vector<int16_t> raw(left.size() * 2);
  for (size_t i = 0; i < left.size(); ++i) {
    raw[2 * i] = QuantizePcm16(left[i]);
    raw[2 * i + 1] = QuantizePcm16(right[i]);
  }
  WriteWavRawInt16(path, raw, 2, sample_rate);
}

double OracleEerGameValue(const std::vector<double>& target_scores,
                          const std::vector<double>& non_target_scores) {
  // Every achievable operating point, found by sweeping a threshold through
  // the midpoints between consecutive distinct scores plus open ends.
  std::vector<double> all = target_scores;
  all.insert(all.end(), non_target_scores.begin(), non_target_scores.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  std::vector<double> thresholds;
  thresholds.push_back(all.front() - 1.0);
  for (size_t i = 0; i + 1 < all.size(); ++i)
    thresholds.push_back(0.5 * (all[i] + all[i + 1]));
  thresholds.push_back(all.back() + 1.0);
  thresholds.insert(thresholds.end(), all.begin(), all.end());

  std::vector<std::pair<double, double>> points;  // (far, frr)
  for (double th : thresholds) {
    int fa = 0;
    for (double s : non_target_scores)
      if (s >= th) ++fa;
    int fr = 0;
    for (double s : target_scores)
      if (s < th) ++fr;
    points.emplace_back(static_cast<double>(fa) / non_target_scores.size(),
                        static_cast<double>(fr) / target_scores.size());
  }

  // Candidate priors where two operating points trade places, plus the ends.
  std::vector<double> priors = {0.0, 1.0};
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = i + 1; j < points.size(); ++j) {
      double denom =
          (points[j].first - points[i].first) + (points[i].second - points[j].second);
      if (std::abs(denom) < 1e-15) continue;
      double p = (points[i].second - points[j].second) / denom;
      if (p >= 0.0 && p <= 1.0) priors.push_back(p);
    }
  }

  double best = 0.0;
  for (double p : priors) {
    double worst = 1e300;
    for (const auto& [far, frr] : points)
      worst = std::min(worst, p * far + (1.0 - p) * frr);
    best = std::max(best, worst);
  }
  return best;
}

double RelativeError(double analytic, double numeric) {
  // Guarded against tiny denominators so finite-difference noise on
  // near-zero gradients does not register as error.
  double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / denom;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("lff_test_" + tag + "_" + std::to_string(counter.fetch_add(1)) + "_" +
              std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  root_ = dir.string();
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(root_, ec);
}

std::string TempDir::Path(const std::string& name) const {
  return (std::filesystem::path(root_) / name).string();
}

}  // namespace lff::test
