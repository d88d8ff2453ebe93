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

#include "lff/frontend.h"

#include "json.hpp"

namespace lff {

std::string ToString(FrontendKind kind) {
  switch (kind) {
    case FrontendKind::kLffTriangle: return "lff-t";
    case FrontendKind::kLffBell: return "lff-b";
    case FrontendKind::kMelFrozen: return "mel";
    case FrontendKind::kSinc: return "sinc";
    case FrontendKind::kGabor: return "gabor";
  }
  throw InternalError("unknown frontend kind");
}

FrontendKind FrontendKindFromString(const std::string& s) {
  if (s == "lff-t") return FrontendKind::kLffTriangle;
  if (s == "lff-b") return FrontendKind::kLffBell;
  if (s == "mel") return FrontendKind::kMelFrozen;
  if (s == "sinc") return FrontendKind::kSinc;
  if (s == "gabor") return FrontendKind::kGabor;
  throw ConfigError("unknown frontend: " + s +
                    " (expected lff-t, lff-b, mel, sinc, or gabor)");
}

void FrontendSpec::Validate() const {
  if (sample_rate <= 0) throw ConfigError("sample_rate must be positive");
  if (epsilon <= 0.0) throw ConfigError("epsilon must be positive");
  if (UsesFilterbank()) {
    stft.Validate();
    filterbank.Validate();
    if (filterbank.n_bins != stft.NumBins())
      throw ConfigError("filterbank bins do not match the transform size");
    FilterShape want = kind == FrontendKind::kLffBell ? FilterShape::kBell
                                                      : FilterShape::kTriangle;
    if (kind == FrontendKind::kMelFrozen && filterbank.shape != FilterShape::kTriangle)
      throw ConfigError("mel frontend uses triangle filters");
    if (kind != FrontendKind::kMelFrozen && filterbank.shape != want)
      throw ConfigError("filter shape does not match the frontend kind");
  } else {
    time_kernels.Validate(sample_rate);
  }
}

FrontendSpec FrontendSpecFromJson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid frontend config JSON: ") + e.what());
  }

  FrontendSpec spec;
  spec.kind = FrontendKindFromString(j.at("frontend").get<std::string>());
  spec.sample_rate = j.value("sample_rate", 16000);
  spec.epsilon = j.value("epsilon", kDefaultLogEpsilon);
  int n_filters = j.value("n_filters", 64);

  if (j.contains("stft")) {
    const auto& s = j["stft"];
    spec.stft.window_len = s.value("window_len", spec.stft.window_len);
    spec.stft.hop = s.value("hop", spec.stft.hop);
    spec.stft.n_fft = s.value("n_fft", spec.stft.n_fft);
    if (s.contains("window"))
      spec.stft.window = WindowKindFromString(s["window"].get<std::string>());
    if (s.contains("spectrum"))
      spec.stft.spectrum = SpectrumKindFromString(s["spectrum"].get<std::string>());
  }

  if (spec.UsesFilterbank()) {
    spec.stft.Validate();
    if (j.contains("filterbank")) {
      spec.filterbank = FilterBankParamsFromJson(j["filterbank"].dump());
    } else {
      FilterShape shape = spec.kind == FrontendKind::kLffBell ? FilterShape::kBell
                                                              : FilterShape::kTriangle;
      spec.filterbank =
          MelInit(n_filters, spec.stft.NumBins(), spec.sample_rate, shape);
    }
  } else {
    if (j.contains("time_kernels")) {
      spec.time_kernels = TimeKernelParamsFromJson(j["time_kernels"].dump());
    } else {
      int kernel_len = j.value("kernel_len", 401);
      int stride = j.value("stride", 160);
      int pool = j.value("pool", 1);
      spec.time_kernels =
          spec.kind == FrontendKind::kSinc
              ? MelSpacedSincBank(n_filters, kernel_len, stride, pool, spec.sample_rate)
              : MelSpacedGaborBank(n_filters, kernel_len, stride, pool,
                                   spec.sample_rate);
    }
  }
  spec.Validate();
  return spec;
}

std::string FrontendSpecToJson(const FrontendSpec& spec) {
  nlohmann::json j;
  j["frontend"] = ToString(spec.kind);
  j["sample_rate"] = spec.sample_rate;
  j["epsilon"] = spec.epsilon;
  j["n_filters"] = spec.NumFeatures();
  if (spec.UsesFilterbank()) {
    j["stft"] = {{"window_len", spec.stft.window_len},
                 {"hop", spec.stft.hop},
                 {"n_fft", spec.stft.n_fft},
                 {"window", ToString(spec.stft.window)},
                 {"spectrum", ToString(spec.stft.spectrum)}};
    j["filterbank"] = nlohmann::json::parse(FilterBankParamsToJson(spec.filterbank));
  } else {
    j["time_kernels"] = nlohmann::json::parse(TimeKernelParamsToJson(spec.time_kernels));
  }
  return j.dump(2);
}

FeatureMatrix ComputeFrontendFeatures(const FrontendSpec& spec,
                                      const AudioBuffer& audio) {
  spec.Validate();
  if (audio.sample_rate != spec.sample_rate)
    throw ConfigError("audio sample rate does not match the frontend config");
  if (spec.UsesFilterbank()) {
    SpectrumMatrix spectrum = ComputeSpectrum(audio, spec.stft);
    return FilterbankForward(spectrum, spec.filterbank, spec.epsilon);
  }
  return TimeFrontendForward(audio, spec.time_kernels, spec.sample_rate, spec.epsilon);
}

}  // namespace lff
