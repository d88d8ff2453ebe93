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

#ifndef LFF_STFT_H_
#define LFF_STFT_H_

#include <complex>
#include <string>
#include <vector>

#include "lff/audio.h"
#include "lff/common.h"

namespace lff {

enum class WindowKind { kHann, kHamming, kRectangular };
enum class SpectrumKind { kMagnitude, kPower };

std::string ToString(WindowKind kind);
std::string ToString(SpectrumKind kind);
WindowKind WindowKindFromString(const std::string& s);
SpectrumKind SpectrumKindFromString(const std::string& s);

struct StftConfig {
  int window_len = 400;  // samples per analysis frame
  int hop = 160;         // samples between frame starts
  int n_fft = 1024;      // transform size, power of two; frames are zero-padded
  WindowKind window = WindowKind::kHann;
  SpectrumKind spectrum = SpectrumKind::kPower;

  // Retained one-sided bins 0..n_fft/2-1; the Nyquist bin is dropped.
  int NumBins() const { return n_fft / 2; }
  void Validate() const;
};

// T x N grid of non-negative magnitudes or powers.
struct SpectrumMatrix {
  Matrix values;
  StftConfig config;

  int NumFrames() const { return values.rows; }
  int NumBins() const { return values.cols; }
};

// Periodic (DFT-even) windows of the given length.
std::vector<double> MakeWindow(WindowKind kind, int len);

// floor((num_samples - window_len)/hop) + 1. Throws TooShortError when the
// signal does not cover one full window.
int NumStftFrames(int num_samples, const StftConfig& config);

// Frames start at multiples of the hop; no padding past the signal end.
std::vector<std::vector<double>> FrameSignal(const AudioBuffer& audio,
                                             const StftConfig& config);

// Windowed, zero-padded FFT per frame.
SpectrumMatrix ComputeSpectrum(const AudioBuffer& audio, const StftConfig& config);

// Same quantity computed as a strided correlation of the signal with the
// complex windowed kernels exp(-2*pi*i*k*t/n_fft) * window[t]. Exists to
// show the transform is an ordinary strided convolution, not for speed.
SpectrumMatrix ComputeSpectrumConv(const AudioBuffer& audio, const StftConfig& config);

// In-place iterative radix-2 FFT; size must be a power of two.
void Fft(std::vector<std::complex<double>>& a);

// Binary layout shared by spectrum and feature files: seven u32 little-endian
// header fields {magic, rows, cols, spectrum_kind, window_len, hop, n_fft}
// followed by rows*cols float32 values, row-major.
constexpr uint32_t kMatrixFileMagic = 0x3142464C;  // "LFB1"

void WriteMatrixFile(const Matrix& values, const StftConfig& config,
                     const std::string& path);
void WriteSpectrumFile(const SpectrumMatrix& spectrum, const std::string& path);
SpectrumMatrix ReadSpectrumFile(const std::string& path);

// Debug export: one CSV row per frame.
void WriteMatrixCsv(const Matrix& values, const std::string& path);

}  // namespace lff

#endif  // LFF_STFT_H_
