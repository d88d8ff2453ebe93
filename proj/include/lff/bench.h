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

#ifndef LFF_BENCH_H_
#define LFF_BENCH_H_

#include <string>
#include <utility>
#include <vector>

#include "lff/frontend.h"

namespace lff {

// Stride sweep specification: each listed front-end runs at every
// (stride, pool) cell on the same synthetic input. For filterbank front-ends
// the stride is the STFT hop and the pool is a max-pool over spectrum frames
// before the filters apply; for conv front-ends they are the convolution
// stride and trailing max-pool.
struct SweepSpec {
  std::vector<FrontendKind> frontends;
  std::vector<std::pair<int, int>> cells = {{160, 1}, {80, 2}, {40, 4}};
  double duration_s = 60.0;
  int repeats = 3;
  int sample_rate = 16000;
  int n_filters = 64;
  int kernel_len = 401;
  StftConfig stft;  // hop is overridden per cell
  uint64_t seed = 1;
};

SweepSpec SweepSpecFromJson(const std::string& text);
std::string SweepSpecToJson(const SweepSpec& spec);

struct BenchRow {
  std::string frontend;
  int stride = 0;
  int pool = 0;
  int frames_out = 0;
  uint64_t macs_total = 0;
  uint64_t macs_filter_apply = 0;  // filterbank front-ends only, 0 otherwise
  double wall_ms_median = 0.0;
};

// Analytic multiply-accumulate counts. The transform term charges
// (n_fft/2)*log2(n_fft) complex butterflies per frame; the filter apply is
// the dense frames x bins x filters product after pooling; conv front-ends
// charge kernel taps per placement per filter (doubled for the gabor
// quadrature pair).
uint64_t StftMacs(int num_samples, const StftConfig& config);
uint64_t LffFilterApplyMacs(int num_samples, const StftConfig& config,
                            int n_filters, int pool);
uint64_t ConvFrontendMacs(int num_samples, int kernel_len, int stride,
                          int n_filters, bool quadrature);

std::vector<BenchRow> RunBenchSweep(const SweepSpec& spec);

void WriteBenchCsv(const std::vector<BenchRow>& rows, const std::string& path,
                   const std::string& config_hash);

}  // namespace lff

#endif  // LFF_BENCH_H_
