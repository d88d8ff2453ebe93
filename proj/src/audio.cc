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

#include "lff/audio.h"

#include <cmath>

namespace lff {

void SyntheticSpeakerProfile::Validate(int sample_rate) const {
  if (fundamental_hz <= 0.0) throw DomainError("fundamental_hz must be > 0");
  if (harmonic_amplitudes.empty())
    throw DomainError("profile needs at least one harmonic amplitude");
  bool any_positive = false;
  for (size_t k = 0; k < harmonic_amplitudes.size(); ++k) {
    double a = harmonic_amplitudes[k];
    if (a < 0.0) throw DomainError("harmonic amplitudes must be non-negative");
    if (a > 0.0) {
      any_positive = true;
      double harmonic_hz = fundamental_hz * static_cast<double>(k + 1);
      if (harmonic_hz >= 0.5 * sample_rate)
        throw DomainError("voiced harmonic at or above Nyquist");
    }
  }
  if (!any_positive)
    throw DomainError("at least one harmonic amplitude must be positive");
  if (jitter_fraction < 0.0 || jitter_fraction > 0.05)
    throw DomainError("jitter_fraction must lie in [0, 0.05]");
}

AudioBuffer SynthTone(double freq_hz, double duration_s, int sample_rate,
                      double amplitude) {
  if (sample_rate <= 0) throw DomainError("sample_rate must be positive");
  if (freq_hz <= 0.0 || freq_hz >= 0.5 * sample_rate)
    throw DomainError("tone frequency must lie strictly between 0 and Nyquist");
  if (duration_s <= 0.0) throw DomainError("duration must be positive");
  if (amplitude <= 0.0 || amplitude > 1.0)
    throw DomainError("amplitude must lie in (0, 1]");

  int64_t n = static_cast<int64_t>(std::llround(duration_s * sample_rate));
  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.samples.resize(static_cast<size_t>(n));
  for (int64_t t = 0; t < n; ++t) {
    out.samples[static_cast<size_t>(t)] =
        amplitude * std::sin(kTwoPi * freq_hz * static_cast<double>(t) / sample_rate);
  }
  return out;
}

AudioBuffer SynthSpeakerUtterance(const SyntheticSpeakerProfile& profile,
                                  double duration_s, int sample_rate,
                                  uint64_t seed) {
  profile.Validate(sample_rate);
  if (duration_s <= 0.0) throw DomainError("duration must be positive");

  // Per-harmonic gain: listed amplitude shaped by the spectral tilt.
  size_t num_harmonics = profile.harmonic_amplitudes.size();
  std::vector<double> gains(num_harmonics);
  for (size_t k = 0; k < num_harmonics; ++k) {
    double octaves = std::log2(static_cast<double>(k + 1));
    gains[k] = profile.harmonic_amplitudes[k] *
               std::pow(10.0, profile.spectral_tilt_db_per_octave * octaves / 20.0);
  }

  int64_t n = static_cast<int64_t>(std::llround(duration_s * sample_rate));
  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.samples.resize(static_cast<size_t>(n), 0.0);

  // Jitter is per-period multiplicative noise on the instantaneous
  // fundamental: within fundamental period p the frequency is
  // f0 * (1 + jitter * u_p) with u_p drawn uniformly from [-1, 1]. The phase
  // is kept as an exact base term f0*t/fs plus the accumulated perturbation,
  // so the zero-jitter case reduces to a plain harmonic stack.
  Rng rng(seed);
  double jitter_cycles = 0.0;
  int64_t period_index = 0;
  double jitter_u = rng.UniformRange(-1.0, 1.0);
  double peak = 0.0;
  for (int64_t t = 0; t < n; ++t) {
    double cycles =
        profile.fundamental_hz * static_cast<double>(t) / sample_rate + jitter_cycles;
    if (static_cast<int64_t>(std::floor(cycles)) > period_index) {
      period_index = static_cast<int64_t>(std::floor(cycles));
      jitter_u = rng.UniformRange(-1.0, 1.0);
    }
    double s = 0.0;
    for (size_t k = 0; k < num_harmonics; ++k) {
      if (gains[k] == 0.0) continue;
      s += gains[k] * std::sin(static_cast<double>(k + 1) * kTwoPi * cycles);
    }
    out.samples[static_cast<size_t>(t)] = s;
    peak = std::max(peak, std::abs(s));
    jitter_cycles +=
        profile.fundamental_hz * profile.jitter_fraction * jitter_u / sample_rate;
  }

  if (peak > 0.0) {
    double scale = 0.9 / peak;
    for (double& s : out.samples) s *= scale;
  }
  return out;
}

}  // namespace lff
