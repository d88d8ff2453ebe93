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

#include "lff/bench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "json.hpp"

namespace lff {

SweepSpec SweepSpecFromJson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid sweep spec JSON: ") + e.what());
  }
  SweepSpec spec;
  if (!j.contains("frontends") || !j["frontends"].is_array() ||
      j["frontends"].empty())
    throw ConfigError("sweep spec needs a non-empty frontends array");
  for (const auto& name : j["frontends"])
    spec.frontends.push_back(FrontendKindFromString(name.get<std::string>()));
  if (j.contains("cells")) {
    spec.cells.clear();
    for (const auto& cell : j["cells"]) {
      if (!cell.is_array() || cell.size() != 2)
        throw ConfigError("each sweep cell must be a [stride, pool] pair");
      spec.cells.emplace_back(cell[0].get<int>(), cell[1].get<int>());
    }
  }
  spec.duration_s = j.value("duration_s", spec.duration_s);
  spec.repeats = j.value("repeats", spec.repeats);
  spec.sample_rate = j.value("sample_rate", spec.sample_rate);
  spec.n_filters = j.value("n_filters", spec.n_filters);
  spec.kernel_len = j.value("kernel_len", spec.kernel_len);
  spec.seed = j.value("seed", spec.seed);
  if (j.contains("stft")) {
    const auto& s = j["stft"];
    spec.stft.window_len = s.value("window_len", spec.stft.window_len);
    spec.stft.n_fft = s.value("n_fft", spec.stft.n_fft);
    if (s.contains("window"))
      spec.stft.window = WindowKindFromString(s["window"].get<std::string>());
    if (s.contains("spectrum"))
      spec.stft.spectrum = SpectrumKindFromString(s["spectrum"].get<std::string>());
  }
  if (spec.duration_s <= 0.0) throw ConfigError("duration_s must be positive");
  if (spec.repeats < 1) throw ConfigError("repeats must be >= 1");
  for (auto [stride, pool] : spec.cells)
    if (stride < 1 || pool < 1) throw ConfigError("stride and pool must be >= 1");
  return spec;
}

std::string SweepSpecToJson(const SweepSpec& spec) {
  nlohmann::json j;
  for (FrontendKind kind : spec.frontends) j["frontends"].push_back(ToString(kind));
  for (auto [stride, pool] : spec.cells)
    j["cells"].push_back(nlohmann::json::array({stride, pool}));
  j["duration_s"] = spec.duration_s;
  j["repeats"] = spec.repeats;
  j["sample_rate"] = spec.sample_rate;
  j["n_filters"] = spec.n_filters;
  j["kernel_len"] = spec.kernel_len;
  j["seed"] = spec.seed;
  j["stft"] = {{"window_len", spec.stft.window_len},
               {"n_fft", spec.stft.n_fft},
               {"window", ToString(spec.stft.window)},
               {"spectrum", ToString(spec.stft.spectrum)}};
  return j.dump(2);
}

uint64_t StftMacs(int num_samples, const StftConfig& config) {
  uint64_t frames = static_cast<uint64_t>(NumStftFrames(num_samples, config));
  uint64_t log2n = 0;
  for (int v = config.n_fft; v > 1; v >>= 1) ++log2n;
  return frames * static_cast<uint64_t>(config.n_fft / 2) * log2n;
}

uint64_t LffFilterApplyMacs(int num_samples, const StftConfig& config,
                            int n_filters, int pool) {
  uint64_t frames = static_cast<uint64_t>(NumStftFrames(num_samples, config));
  uint64_t pooled = frames / static_cast<uint64_t>(pool);
  return pooled * static_cast<uint64_t>(config.NumBins()) *
         static_cast<uint64_t>(n_filters);
}

uint64_t ConvFrontendMacs(int num_samples, int kernel_len, int stride,
                          int n_filters, bool quadrature) {
  if (num_samples < kernel_len)
    throw TooShortError("benchmark input shorter than the kernel");
  uint64_t frames = static_cast<uint64_t>((num_samples - kernel_len) / stride + 1);
  uint64_t base = static_cast<uint64_t>(n_filters) *
                  static_cast<uint64_t>(kernel_len) * frames;
  return quadrature ? 2 * base : base;
}

namespace {

// Max-pool spectrum frames in non-overlapping groups; trailing remainder
// frames are dropped, mirroring the conv-path pooling.
SpectrumMatrix PoolSpectrumFrames(const SpectrumMatrix& spectrum, int pool) {
  if (pool == 1) return spectrum;
  SpectrumMatrix out;
  out.config = spectrum.config;
  int pooled = spectrum.NumFrames() / pool;
  out.values = Matrix(pooled, spectrum.NumBins());
  for (int j = 0; j < pooled; ++j) {
    for (int k = 0; k < spectrum.NumBins(); ++k) {
      double peak = 0.0;
      for (int p = 0; p < pool; ++p)
        peak = std::max(peak, spectrum.values.At(j * pool + p, k));
      out.values.At(j, k) = peak;
    }
  }
  return out;
}

}  // namespace

std::vector<BenchRow> RunBenchSweep(const SweepSpec& spec) {
  int num_samples = static_cast<int>(std::llround(spec.duration_s * spec.sample_rate));
  AudioBuffer input;
  input.sample_rate = spec.sample_rate;
  input.samples.resize(static_cast<size_t>(num_samples));
  Rng rng(spec.seed);
  for (double& s : input.samples) s = rng.UniformRange(-0.5, 0.5);

  std::vector<BenchRow> rows;
  for (FrontendKind kind : spec.frontends) {
    bool filterbank_kind = kind == FrontendKind::kLffTriangle ||
                           kind == FrontendKind::kLffBell ||
                           kind == FrontendKind::kMelFrozen;
    for (auto [stride, pool] : spec.cells) {
      BenchRow row;
      row.frontend = ToString(kind);
      row.stride = stride;
      row.pool = pool;

      std::vector<double> wall_ms;
      if (filterbank_kind) {
        StftConfig stft = spec.stft;
        stft.hop = stride;
        FilterShape shape = kind == FrontendKind::kLffBell ? FilterShape::kBell
                                                           : FilterShape::kTriangle;
        FilterBankParams params =
            MelInit(spec.n_filters, stft.NumBins(), spec.sample_rate, shape);
        row.macs_filter_apply =
            LffFilterApplyMacs(num_samples, stft, spec.n_filters, pool);
        row.macs_total = StftMacs(num_samples, stft) + row.macs_filter_apply;
        for (int r = 0; r < spec.repeats; ++r) {
          auto t0 = std::chrono::steady_clock::now();
          SpectrumMatrix spectrum = ComputeSpectrum(input, stft);
          SpectrumMatrix pooled = PoolSpectrumFrames(spectrum, pool);
          FeatureMatrix features =
              FilterbankForward(pooled, params, kDefaultLogEpsilon);
          auto t1 = std::chrono::steady_clock::now();
          row.frames_out = features.NumFrames();
          wall_ms.push_back(
              std::chrono::duration<double, std::milli>(t1 - t0).count());
        }
      } else {
        TimeKernelParams params =
            kind == FrontendKind::kSinc
                ? MelSpacedSincBank(spec.n_filters, spec.kernel_len, stride, pool,
                                    spec.sample_rate)
                : MelSpacedGaborBank(spec.n_filters, spec.kernel_len, stride, pool,
                                     spec.sample_rate);
        row.macs_total =
            ConvFrontendMacs(num_samples, spec.kernel_len, stride, spec.n_filters,
                             kind == FrontendKind::kGabor);
        for (int r = 0; r < spec.repeats; ++r) {
          auto t0 = std::chrono::steady_clock::now();
          FeatureMatrix features =
              TimeFrontendForward(input, params, spec.sample_rate, kDefaultLogEpsilon);
          auto t1 = std::chrono::steady_clock::now();
          row.frames_out = features.NumFrames();
          wall_ms.push_back(
              std::chrono::duration<double, std::milli>(t1 - t0).count());
        }
      }

      std::sort(wall_ms.begin(), wall_ms.end());
      row.wall_ms_median = wall_ms[wall_ms.size() / 2];
      rows.push_back(row);
    }
  }
  return rows;
}

void WriteBenchCsv(const std::vector<BenchRow>& rows, const std::string& path,
                   const std::string& config_hash) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open bench CSV for writing: " + path);
  os << "# config_hash " << config_hash << "\n";
  os << "frontend,stride,pool,frames_out,macs_total,macs_filter_apply,"
        "wall_ms_median\n";
  os.precision(17);
  for (const BenchRow& row : rows) {
    os << row.frontend << "," << row.stride << "," << row.pool << ","
       << row.frames_out << "," << row.macs_total << "," << row.macs_filter_apply
       << "," << row.wall_ms_median << "\n";
  }
}

}  // namespace lff
