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

#ifndef LFF_AUDIO_H_
#define LFF_AUDIO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "lff/common.h"

namespace lff {

// Mono PCM samples in [-1, 1] with their sample rate.
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 0;

  int NumSamples() const { return static_cast<int>(samples.size()); }
  double DurationSeconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

// Harmonic source model used as a deterministic stand-in for real speakers
// in desk-scale experiments.
struct SyntheticSpeakerProfile {
  double fundamental_hz = 0.0;
  std::vector<double> harmonic_amplitudes;     // index k holds harmonic k+1
  double spectral_tilt_db_per_octave = 0.0;
  double jitter_fraction = 0.0;                // in [0, 0.05]

  // Throws DomainError when a field is out of range or a voiced harmonic
  // would land at or above Nyquist.
  void Validate(int sample_rate) const;
};

AudioBuffer SynthTone(double freq_hz, double duration_s, int sample_rate,
                      double amplitude);

// Sum of jittered harmonics shaped by the spectral tilt, peak-normalized to
// 0.9. Pure function of (profile, duration_s, sample_rate, seed).
AudioBuffer SynthSpeakerUtterance(const SyntheticSpeakerProfile& profile,
                                  double duration_s, int sample_rate,
                                  uint64_t seed);

}  // namespace lff

#endif  // LFF_AUDIO_H_
