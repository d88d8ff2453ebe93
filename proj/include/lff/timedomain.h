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

#ifndef LFF_TIMEDOMAIN_H_
#define LFF_TIMEDOMAIN_H_

#include <string>
#include <vector>

#include "lff/audio.h"
#include "lff/common.h"
#include "lff/filterbank.h"

namespace lff {

enum class TimeKernelKind { kSinc, kGabor };

std::string ToString(TimeKernelKind kind);
TimeKernelKind TimeKernelKindFromString(const std::string& s);

// Fixed band-pass convolution bank applied to the raw waveform. Sinc filters
// carry (low_hz, band_hz) per filter, gabor filters (center_hz, sigma_s).
struct TimeKernelParams {
  TimeKernelKind kind = TimeKernelKind::kSinc;
  std::vector<double> low_hz;
  std::vector<double> band_hz;
  std::vector<double> center_hz;
  std::vector<double> sigma_s;
  int kernel_len = 401;  // odd
  int stride = 160;
  int pool = 1;  // max-pool width and stride over output frames

  int NumFilters() const {
    return kind == TimeKernelKind::kSinc ? static_cast<int>(low_hz.size())
                                         : static_cast<int>(center_hz.size());
  }
  void Validate(int sample_rate) const;
};

// Hamming-windowed band-pass sinc: 2*f2*sinc(2*f2*d) - 2*f1*sinc(2*f1*d)
// with frequencies normalized by the sample rate and d in samples from the
// center tap. Even-symmetric by construction.
std::vector<double> MakeSincKernel(double low_hz, double high_hz, int kernel_len,
                                   int sample_rate);

// Gaussian-windowed cosine, unit peak at the center tap.
std::vector<double> MakeGaborKernel(double center_hz, double sigma_s,
                                    int kernel_len, int sample_rate);

TimeKernelParams MelSpacedSincBank(int n_filters, int kernel_len, int stride,
                                   int pool, int sample_rate);
TimeKernelParams MelSpacedGaborBank(int n_filters, int kernel_len, int stride,
                                    int pool, int sample_rate);

// Mean/variance-normalize the waveform, correlate with each kernel at the
// given stride, rectify (absolute value for sinc, squared modulus of the
// quadrature pair for gabor), max-pool, and map to dB.
FeatureMatrix TimeFrontendForward(const AudioBuffer& audio,
                                  const TimeKernelParams& params,
                                  int sample_rate, double epsilon);

// floor((num_samples - kernel_len)/stride + 1) / pool, integer division.
int TimeFrontendNumFrames(int num_samples, int kernel_len, int stride, int pool);

struct ScalingReport {
  double fraction_of_energy_in_central_quarter = 0.0;
};

// L2 energy fraction of the central quarter of the taps.
double CentralQuarterEnergyFraction(const std::vector<double>& kernel);

// Builds a sinc kernel of the given bandwidth centered at a quarter of the
// sample rate and reports how concentrated its energy is, documenting why
// wide-band time kernels tolerate large strides and narrow-band ones do not.
ScalingReport DemonstrateScalingTradeoff(double band_hz, int kernel_len,
                                         int sample_rate);

std::string TimeKernelParamsToJson(const TimeKernelParams& params);
TimeKernelParams TimeKernelParamsFromJson(const std::string& text);

}  // namespace lff

#endif  // LFF_TIMEDOMAIN_H_
