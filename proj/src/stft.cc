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

#include "lff/stft.h"

#include <cmath>
#include <fstream>

namespace lff {

std::string ToString(WindowKind kind) {
  switch (kind) {
    case WindowKind::kHann: return "hann";
    case WindowKind::kHamming: return "hamming";
    case WindowKind::kRectangular: return "rectangular";
  }
  throw InternalError("unknown window kind");
}

std::string ToString(SpectrumKind kind) {
  return kind == SpectrumKind::kMagnitude ? "magnitude" : "power";
}

WindowKind WindowKindFromString(const std::string& s) {
  if (s == "hann") return WindowKind::kHann;
  if (s == "hamming") return WindowKind::kHamming;
  if (s == "rectangular") return WindowKind::kRectangular;
  throw ConfigError("unknown window kind: " + s);
}

SpectrumKind SpectrumKindFromString(const std::string& s) {
  if (s == "magnitude") return SpectrumKind::kMagnitude;
  if (s == "power") return SpectrumKind::kPower;
  throw ConfigError("unknown spectrum kind: " + s);
}

void StftConfig::Validate() const {
  if (window_len <= 0) throw ConfigError("window_len must be positive");
  if (hop < 1) throw ConfigError("hop must be >= 1");
  if (n_fft <= 0 || (n_fft & (n_fft - 1)) != 0)
    throw ConfigError("n_fft must be a positive power of two");
  if (window_len > n_fft) throw ConfigError("window_len must not exceed n_fft");
}

std::vector<double> MakeWindow(WindowKind kind, int len) {
  if (len <= 0) throw DomainError("window length must be positive");
  std::vector<double> w(static_cast<size_t>(len), 1.0);
  switch (kind) {
    case WindowKind::kRectangular:
      break;
    case WindowKind::kHann:
      for (int t = 0; t < len; ++t)
        w[t] = 0.5 - 0.5 * std::cos(kTwoPi * t / len);
      break;
    case WindowKind::kHamming:
      for (int t = 0; t < len; ++t)
        w[t] = 0.54 - 0.46 * std::cos(kTwoPi * t / len);
      break;
  }
  return w;
}

int NumStftFrames(int num_samples, const StftConfig& config) {
  config.Validate();
  if (num_samples < config.window_len)
    throw TooShortError("signal shorter than one analysis window");
  return (num_samples - config.window_len) / config.hop + 1;
}

std::vector<std::vector<double>> FrameSignal(const AudioBuffer& audio,
                                             const StftConfig& config) {
  int num_frames = NumStftFrames(audio.NumSamples(), config);
  std::vector<std::vector<double>> frames(static_cast<size_t>(num_frames));
  for (int j = 0; j < num_frames; ++j) {
    const double* start = audio.samples.data() + static_cast<size_t>(j) * config.hop;
    frames[j].assign(start, start + config.window_len);
  }
  return frames;
}

void Fft(std::vector<std::complex<double>>& a) {
  size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw DomainError("FFT size must be a power of two");
  // Bit-reversal permutation.
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double angle = -kTwoPi / static_cast<double>(len);
    std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t j = 0; j < len / 2; ++j) {
        std::complex<double> u = a[i + j];
        std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

namespace {

double BinValue(const std::complex<double>& c, SpectrumKind kind) {
  double p = c.real() * c.real() + c.imag() * c.imag();
  return kind == SpectrumKind::kPower ? p : std::sqrt(p);
}

}  // namespace

SpectrumMatrix ComputeSpectrum(const AudioBuffer& audio, const StftConfig& config) {
  int num_frames = NumStftFrames(audio.NumSamples(), config);
  int num_bins = config.NumBins();
  std::vector<double> window = MakeWindow(config.window, config.window_len);

  SpectrumMatrix out;
  out.config = config;
  out.values = Matrix(num_frames, num_bins);

  std::vector<std::complex<double>> buf(static_cast<size_t>(config.n_fft));
  for (int j = 0; j < num_frames; ++j) {
    const double* frame = audio.samples.data() + static_cast<size_t>(j) * config.hop;
    for (int t = 0; t < config.window_len; ++t)
      buf[t] = std::complex<double>(frame[t] * window[t], 0.0);
    for (int t = config.window_len; t < config.n_fft; ++t)
      buf[t] = std::complex<double>(0.0, 0.0);
    Fft(buf);
    for (int k = 0; k < num_bins; ++k)
      out.values.At(j, k) = BinValue(buf[k], config.spectrum);
  }
  return out;
}

SpectrumMatrix ComputeSpectrumConv(const AudioBuffer& audio, const StftConfig& config) {
  int num_frames = NumStftFrames(audio.NumSamples(), config);
  int num_bins = config.NumBins();
  std::vector<double> window = MakeWindow(config.window, config.window_len);

  // One complex kernel per bin: conj Fourier basis times the window. The
  // zero-padded tail contributes nothing, so kernels stop at window_len.
  std::vector<std::vector<std::complex<double>>> kernels(
      static_cast<size_t>(num_bins));
  for (int k = 0; k < num_bins; ++k) {
    kernels[k].resize(static_cast<size_t>(config.window_len));
    for (int t = 0; t < config.window_len; ++t) {
      double angle = -kTwoPi * static_cast<double>(k) * t / config.n_fft;
      kernels[k][t] = std::polar(window[t], angle);
    }
  }

  SpectrumMatrix out;
  out.config = config;
  out.values = Matrix(num_frames, num_bins);
  for (int j = 0; j < num_frames; ++j) {
    const double* frame = audio.samples.data() + static_cast<size_t>(j) * config.hop;
    for (int k = 0; k < num_bins; ++k) {
      std::complex<double> acc(0.0, 0.0);
      for (int t = 0; t < config.window_len; ++t) acc += frame[t] * kernels[k][t];
      out.values.At(j, k) = BinValue(acc, config.spectrum);
    }
  }
  return out;
}

void WriteMatrixFile(const Matrix& values, const StftConfig& config,
                     const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open output file: " + path);
  WriteU32Le(os, kMatrixFileMagic);
  WriteU32Le(os, static_cast<uint32_t>(values.rows));
  WriteU32Le(os, static_cast<uint32_t>(values.cols));
  WriteU32Le(os, config.spectrum == SpectrumKind::kPower ? 1u : 0u);
  WriteU32Le(os, static_cast<uint32_t>(config.window_len));
  WriteU32Le(os, static_cast<uint32_t>(config.hop));
  WriteU32Le(os, static_cast<uint32_t>(config.n_fft));
  for (double v : values.data) WriteF32Le(os, static_cast<float>(v));
  if (!os) throw ConfigError("failed writing file: " + path);
}

void WriteSpectrumFile(const SpectrumMatrix& spectrum, const std::string& path) {
  WriteMatrixFile(spectrum.values, spectrum.config, path);
}

SpectrumMatrix ReadSpectrumFile(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open file: " + path);
  if (ReadU32Le(is) != kMatrixFileMagic)
    throw FormatError("bad magic in matrix file: " + path);
  uint32_t rows = ReadU32Le(is);
  uint32_t cols = ReadU32Le(is);
  uint32_t kind = ReadU32Le(is);
  SpectrumMatrix out;
  out.config.spectrum = kind == 1 ? SpectrumKind::kPower : SpectrumKind::kMagnitude;
  out.config.window_len = static_cast<int>(ReadU32Le(is));
  out.config.hop = static_cast<int>(ReadU32Le(is));
  out.config.n_fft = static_cast<int>(ReadU32Le(is));
  out.values = Matrix(static_cast<int>(rows), static_cast<int>(cols));
  for (double& v : out.values.data) v = static_cast<double>(ReadF32Le(is));
  return out;
}

void WriteMatrixCsv(const Matrix& values, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open output file: " + path);
  for (int c = 0; c < values.cols; ++c) os << (c ? "," : "") << "c" << c;
  os << "\n";
  os.precision(17);
  for (int r = 0; r < values.rows; ++r) {
    for (int c = 0; c < values.cols; ++c) os << (c ? "," : "") << values.At(r, c);
    os << "\n";
  }
}

}  // namespace lff
