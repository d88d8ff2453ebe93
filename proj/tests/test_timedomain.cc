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

#include <cmath>

#include "doctest.h"
#include "lff/audio.h"
#include "lff/timedomain.h"
#include "oracles.h"

using namespace lff;

namespace {

// Magnitude response of a kernel at one frequency, by direct summation.
double KernelResponseAt(const std::vector<double>& g, double freq_hz,
                        int sample_rate) {
  double re = 0.0, im = 0.0;
  for (size_t t = 0; t < g.size(); ++t) {
    double angle = -kTwoPi * freq_hz * static_cast<double>(t) / sample_rate;
    re += g[t] * std::cos(angle);
    im += g[t] * std::sin(angle);
  }
  return std::sqrt(re * re + im * im);
}

double PeakFrequencyResponse(const std::vector<double>& g, int sample_rate) {
  double peak = 0.0;
  for (double f = 0.0; f <= 0.5 * sample_rate; f += 2.0)
    peak = std::max(peak, KernelResponseAt(g, f, sample_rate));
  return peak;
}

}  // namespace

TEST_SUITE("timedomain_frontends") {

TEST_CASE("sinc kernels are even-symmetric with the expected center tap") {
  std::vector<double> g = MakeSincKernel(100.0, 200.0, 401, 16000);
  REQUIRE(g.size() == 401);
  CHECK(g[200] == doctest::Approx(2.0 * 100.0 / 16000.0).epsilon(1e-15));
  for (int d = 1; d <= 200; ++d) CHECK(g[200 + d] == g[200 - d]);
  CHECK_THROWS_AS(MakeSincKernel(200.0, 200.0, 401, 16000), DomainError);
  CHECK_THROWS_AS(MakeSincKernel(100.0, 200.0, 400, 16000), DomainError);
}

TEST_CASE("sinc kernels reject DC relative to their peak response") {
  std::vector<double> g = MakeSincKernel(100.0, 200.0, 401, 16000);
  double dc = 0.0;
  for (double v : g) dc += v;
  CHECK(std::abs(dc) < 1e-3 * PeakFrequencyResponse(g, 16000));
}

TEST_CASE("sinc kernels pass the band center far above the stop band") {
  std::vector<double> g = MakeSincKernel(100.0, 200.0, 401, 16000);
  CHECK(KernelResponseAt(g, 150.0, 16000) >=
        10.0 * KernelResponseAt(g, 50.0, 16000));
}

TEST_CASE("gabor kernels peak at one and stay even-symmetric") {
  std::vector<double> g = MakeGaborKernel(1000.0, 0.002, 401, 16000);
  REQUIRE(g.size() == 401);
  CHECK(g[200] == 1.0);
  for (int d = 1; d <= 200; ++d) CHECK(g[200 + d] == g[200 - d]);
}

TEST_CASE("gabor spectrum peaks within one bin of the center frequency") {
  // sigma small enough that four sigma fit inside the kernel span.
  int sample_rate = 16000;
  double sigma_s = 0.003;  // 48 samples; 4 sigma = 192 < 200
  double center = 2000.0;
  std::vector<double> g = MakeGaborKernel(center, sigma_s, 401, sample_rate);

  std::vector<double> padded(1024, 0.0);
  for (size_t i = 0; i < g.size(); ++i) padded[i] = g[i];
  std::vector<double> mags = test::OracleDftFrame(padded, 1024, 512, false);
  int best = 0;
  for (int k = 1; k < 512; ++k)
    if (mags[k] > mags[best]) best = k;
  double bin_hz = 16000.0 / 1024.0;
  CHECK(std::abs(best * bin_hz - center) <= bin_hz);
}

TEST_CASE("frontend output length follows the conv and pool law") {
  int sample_rate = 16000;
  AudioBuffer buf = SynthTone(500.0, 2.0, sample_rate, 0.5);
  for (auto [stride, pool] : {std::pair{160, 1}, {80, 2}, {40, 4}}) {
    TimeKernelParams params = MelSpacedSincBank(8, 401, stride, pool, sample_rate);
    FeatureMatrix out = TimeFrontendForward(buf, params, sample_rate, 1e-10);
    int conv_frames = (buf.NumSamples() - 401) / stride + 1;
    CHECK(out.NumFrames() == conv_frames / pool);
    CHECK(out.NumFrames() ==
          TimeFrontendNumFrames(buf.NumSamples(), 401, stride, pool));
  }
}

TEST_CASE("stride 160 with no pooling lands within 2 frames of the STFT grid") {
  AudioBuffer buf = SynthTone(500.0, 2.0, 16000, 0.5);
  TimeKernelParams params = MelSpacedSincBank(8, 401, 160, 1, 16000);
  FeatureMatrix out = TimeFrontendForward(buf, params, 16000, 1e-10);
  int stft_frames = (buf.NumSamples() - 400) / 160 + 1;
  CHECK(std::abs(out.NumFrames() - stft_frames) <= 2);
}

TEST_CASE("zero input sits exactly on the log floor") {
  AudioBuffer buf;
  buf.sample_rate = 16000;
  buf.samples.assign(16000, 0.0);
  TimeKernelParams params = MelSpacedGaborBank(6, 401, 160, 1, 16000);
  FeatureMatrix out = TimeFrontendForward(buf, params, 16000, 1e-10);
  double floor = 10.0 * std::log10(1e-10);
  for (double v : out.values.data) CHECK(v == doctest::Approx(floor).epsilon(1e-12));
}

TEST_CASE("constant input is rejected as DC by every sinc filter") {
  AudioBuffer buf;
  buf.sample_rate = 16000;
  buf.samples.assign(16000, 0.25);
  TimeKernelParams params = MelSpacedSincBank(8, 401, 160, 1, 16000);
  FeatureMatrix out = TimeFrontendForward(buf, params, 16000, 1e-10);
  double floor = 10.0 * std::log10(1e-10);
  for (double v : out.values.data) CHECK(v <= floor + 3.0);
}

TEST_CASE("a pure tone drives its own band at least 6 dB above excluded bands") {
  int sample_rate = 16000;
  TimeKernelParams params = MelSpacedSincBank(8, 401, 160, 1, sample_rate);
  int probe = 3;
  double tone_hz = params.low_hz[probe] + 0.5 * params.band_hz[probe];
  AudioBuffer buf = SynthTone(tone_hz, 2.0, sample_rate, 0.5);
  FeatureMatrix out = TimeFrontendForward(buf, params, sample_rate, 1e-10);

  std::vector<double> mean_db(8, 0.0);
  for (int i = 0; i < 8; ++i) {
    for (int t = 0; t < out.NumFrames(); ++t) mean_db[i] += out.values.At(t, i);
    mean_db[i] /= out.NumFrames();
  }
  for (int i = 0; i < 8; ++i) {
    bool excludes =
        tone_hz < params.low_hz[i] || tone_hz > params.low_hz[i] + params.band_hz[i];
    if (excludes) CHECK(mean_db[probe] >= mean_db[i] + 6.0);
  }
}

TEST_CASE("too-short input raises the dedicated error") {
  AudioBuffer buf;
  buf.sample_rate = 16000;
  buf.samples.assign(100, 0.1);
  TimeKernelParams params = MelSpacedSincBank(4, 401, 160, 1, 16000);
  CHECK_THROWS_AS(TimeFrontendForward(buf, params, 16000, 1e-10), TooShortError);
}

TEST_CASE("wide bands concentrate kernel energy at the center") {
  ScalingReport wide = DemonstrateScalingTradeoff(4000.0, 401, 16000);
  ScalingReport narrow = DemonstrateScalingTradeoff(100.0, 401, 16000);
  CHECK(wide.fraction_of_energy_in_central_quarter > 0.9);
  CHECK(narrow.fraction_of_energy_in_central_quarter <
        wide.fraction_of_energy_in_central_quarter);

  std::vector<double> flat(401, 1.0);
  CHECK(CentralQuarterEnergyFraction(flat) == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("energy concentration grows with bandwidth") {
  double prev = 0.0;
  for (double band : {100.0, 400.0, 1000.0, 2000.0, 4000.0, 6000.0}) {
    double frac =
        DemonstrateScalingTradeoff(band, 401, 16000).fraction_of_energy_in_central_quarter;
    CHECK(frac >= prev - 1e-12);
    prev = frac;
  }
}

TEST_CASE("time kernel params serialize to JSON and back") {
  TimeKernelParams params = MelSpacedGaborBank(5, 201, 80, 2, 16000);
  TimeKernelParams back = TimeKernelParamsFromJson(TimeKernelParamsToJson(params));
  CHECK(back.kind == TimeKernelKind::kGabor);
  CHECK(back.kernel_len == 201);
  CHECK(back.stride == 80);
  CHECK(back.pool == 2);
  CHECK(back.center_hz == params.center_hz);
  CHECK(back.sigma_s == params.sigma_s);
}

}  // TEST_SUITE
