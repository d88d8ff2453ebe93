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

#ifndef LFF_FRONTEND_H_
#define LFF_FRONTEND_H_

#include <string>

#include "lff/audio.h"
#include "lff/filterbank.h"
#include "lff/stft.h"
#include "lff/timedomain.h"

namespace lff {

// lff-t and lff-b are trainable filterbanks over the STFT spectrum; mel is
// the same pipeline with frozen mel-scale triangle parameters; sinc and
// gabor are fixed time-domain convolution banks.
enum class FrontendKind { kLffTriangle, kLffBell, kMelFrozen, kSinc, kGabor };

std::string ToString(FrontendKind kind);
FrontendKind FrontendKindFromString(const std::string& s);

struct FrontendSpec {
  FrontendKind kind = FrontendKind::kMelFrozen;
  int sample_rate = 16000;
  StftConfig stft;
  FilterBankParams filterbank;    // filterbank kinds only
  TimeKernelParams time_kernels;  // sinc/gabor only
  double epsilon = kDefaultLogEpsilon;

  bool UsesFilterbank() const {
    return kind == FrontendKind::kLffTriangle || kind == FrontendKind::kLffBell ||
           kind == FrontendKind::kMelFrozen;
  }
  bool TrainsFilterbank() const {
    return kind == FrontendKind::kLffTriangle || kind == FrontendKind::kLffBell;
  }
  int NumFeatures() const {
    return UsesFilterbank() ? filterbank.NumFilters() : time_kernels.NumFilters();
  }
  void Validate() const;
};

// Builds a spec from the flat JSON config format used by the CLI. Unset
// fields take the defaults above; the filter bank (or time kernel bank) is
// mel-spaced unless explicit parameters are given.
FrontendSpec FrontendSpecFromJson(const std::string& text);
std::string FrontendSpecToJson(const FrontendSpec& spec);

FeatureMatrix ComputeFrontendFeatures(const FrontendSpec& spec,
                                      const AudioBuffer& audio);

}  // namespace lff

#endif  // LFF_FRONTEND_H_
