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
#include <fstream>

#include "doctest.h"
#include "lff/evaluation.h"
#include "oracles.h"

using namespace lff;

namespace {

ScoreSet MakeScores(const std::vector<double>& targets,
                    const std::vector<double>& non_targets) {
  ScoreSet s;
  for (double v : targets) s.scores.emplace_back(v, true);
  for (double v : non_targets) s.scores.emplace_back(v, false);
  return s;
}

// Small untrained model over a mel front-end, good enough to embed audio.
TrainedModel TinyModel(int sample_rate) {
  TrainedModel model;
  model.frontend.kind = FrontendKind::kMelFrozen;
  model.frontend.sample_rate = sample_rate;
  model.frontend.stft.window_len = 64;
  model.frontend.stft.hop = 32;
  model.frontend.stft.n_fft = 128;
  model.frontend.filterbank =
      MelInit(6, 64, sample_rate, FilterShape::kTriangle);

  BackboneConfig config;
  config.input_dim = 6;
  config.hidden = 8;
  config.num_hidden_layers = 1;
  config.embedding_dim = 4;
  Rng rng(33);
  model.backbone = ToyBackbone::Init(config, rng);
  model.class_weights = Matrix(2, 4, 0.1);
  return model;
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("cosine similarity basics") {
  CHECK(CosineSimilarity({1.0, 0.0}, {0.0, 2.0}) == 0.0);
  CHECK(CosineSimilarity({1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(CosineSimilarity({1.0, 0.0}, {-3.0, 0.0}) ==
        doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("segmentation arithmetic: 4 s gives 1 segment, 6 s gives 3") {
  int sr = 4000;
  AudioBuffer four = SynthTone(200.0, 4.0, sr, 0.5);
  AudioBuffer six = SynthTone(200.0, 6.0, sr, 0.5);
  CHECK(SegmentForScoring(four, 4.0, 3.0).size() == 1);
  auto segs = SegmentForScoring(six, 4.0, 3.0);
  REQUIRE(segs.size() == 3);
  for (size_t k = 0; k < 3; ++k) {
    CHECK(segs[k].samples.size() == static_cast<size_t>(4 * sr));
    CHECK(segs[k].samples[0] == six.samples[k * sr]);
  }

  AudioBuffer three = SynthTone(200.0, 3.0, sr, 0.5);
  CHECK_THROWS_AS(SegmentForScoring(three, 4.0, 3.0), TooShortError);
}

TEST_CASE("identical utterances score 1") {
  TrainedModel model = TinyModel(4000);
  AudioBuffer utt = SynthTone(300.0, 4.5, 4000, 0.6);
  CHECK(ScoreTrial(utt, utt, model) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("trials on utterances under four seconds are rejected") {
  TrainedModel model = TinyModel(4000);
  AudioBuffer good = SynthTone(300.0, 4.5, 4000, 0.6);
  AudioBuffer shorty = SynthTone(300.0, 3.5, 4000, 0.6);
  CHECK_THROWS_AS(ScoreTrial(shorty, good, model), TooShortError);
  CHECK_THROWS_AS(ScoreTrial(good, shorty, model), TooShortError);
}

TEST_CASE("trial scoring is symmetric") {
  TrainedModel model = TinyModel(4000);
  SyntheticSpeakerProfile p1, p2;
  p1.fundamental_hz = 150.0;
  p1.harmonic_amplitudes = {1.0, 0.4};
  p2.fundamental_hz = 260.0;
  p2.harmonic_amplitudes = {1.0, 0.7, 0.2};
  AudioBuffer a = SynthSpeakerUtterance(p1, 5.0, 4000, 1);
  AudioBuffer b = SynthSpeakerUtterance(p2, 6.0, 4000, 2);
  CHECK(std::abs(ScoreTrial(a, b, model) - ScoreTrial(b, a, model)) < 1e-9);
}

TEST_CASE("EER is zero on a separable score set") {
  EerResult r = ComputeEer(MakeScores({0.9, 0.8}, {0.1, 0.2}));
  CHECK(r.eer == 0.0);
}

TEST_CASE("EER on the pinned interleaved example is 0.25") {
  // Frozen from the exhaustive threshold-sweep oracle.
  CHECK(test::OracleEerGameValue({0.6, 0.4}, {0.5, 0.3}) ==
        doctest::Approx(0.25).epsilon(1e-12));
  EerResult r = ComputeEer(MakeScores({0.6, 0.4}, {0.5, 0.3}));
  CHECK(r.eer == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("EER matches the exhaustive game-value oracle on random sets") {
  Rng rng(44);
  for (int trial = 0; trial < 1000; ++trial) {
    int nt = 1 + static_cast<int>(rng.UniformInt(0, 7));
    int nn = 1 + static_cast<int>(rng.UniformInt(0, 7));
    std::vector<double> targets(static_cast<size_t>(nt));
    std::vector<double> non_targets(static_cast<size_t>(nn));
    // Coarse grid makes exact ties common, exercising the tie handling.
    for (double& v : targets)
      v = 0.3 + 0.1 * static_cast<double>(rng.UniformInt(0, 10));
    for (double& v : non_targets)
      v = 0.1 * static_cast<double>(rng.UniformInt(0, 10));
    EerResult r = ComputeEer(MakeScores(targets, non_targets));
    double oracle = test::OracleEerGameValue(targets, non_targets);
    CHECK(std::abs(r.eer - oracle) < 1e-12);
  }
}

TEST_CASE("EER sits near one half when labels carry no information") {
  Rng rng(45);
  std::vector<double> targets(1000), non_targets(1000);
  for (double& v : targets) v = rng.Normal();
  for (double& v : non_targets) v = rng.Normal();
  EerResult r = ComputeEer(MakeScores(targets, non_targets));
  CHECK(r.eer > 0.45);
  CHECK(r.eer < 0.55);
}

TEST_CASE("EER is invariant under strictly increasing score transforms") {
  Rng rng(46);
  std::vector<double> targets(40), non_targets(60);
  for (double& v : targets) v = rng.UniformRange(-1.0, 1.5);
  for (double& v : non_targets) v = rng.UniformRange(-1.5, 1.0);
  double base = ComputeEer(MakeScores(targets, non_targets)).eer;

  auto monotone = [](double x) { return std::tanh(x) + 0.1 * x * x * x + 2.0 * x; };
  std::vector<double> t2 = targets, n2 = non_targets;
  for (double& v : t2) v = monotone(v);
  for (double& v : n2) v = monotone(v);
  CHECK(ComputeEer(MakeScores(t2, n2)).eer == base);
}

TEST_CASE("EER is invariant under label swap with score negation") {
  Rng rng(47);
  std::vector<double> targets(35), non_targets(25);
  for (double& v : targets) v = rng.UniformRange(-1.0, 2.0);
  for (double& v : non_targets) v = rng.UniformRange(-2.0, 1.0);
  double base = ComputeEer(MakeScores(targets, non_targets)).eer;

  std::vector<double> t2 = non_targets, n2 = targets;
  for (double& v : t2) v = -v;
  for (double& v : n2) v = -v;
  CHECK(std::abs(ComputeEer(MakeScores(t2, n2)).eer - base) < 1e-12);
}

TEST_CASE("degenerate score sets are rejected") {
  CHECK_THROWS_AS(ComputeEer(MakeScores({0.5, 0.4}, {})), DomainError);
  CHECK_THROWS_AS(ComputeEer(MakeScores({}, {0.5})), DomainError);
}

TEST_CASE("trial list and score file round trips") {
  test::TempDir tmp("eval_io");
  {
    std::ofstream os(tmp.Path("trials.txt"));
    os << "1 a.wav b.wav\n0 a.wav c.wav\n\n1 d.wav e.wav\n";
  }
  auto trials = ReadTrialList(tmp.Path("trials.txt"));
  REQUIRE(trials.size() == 3);
  CHECK(trials[0].target);
  CHECK_FALSE(trials[1].target);
  CHECK(trials[1].enroll_id == "a.wav");
  CHECK(trials[2].test_id == "e.wav");

  {
    std::ofstream os(tmp.Path("bad.txt"));
    os << "2 a b\n";
  }
  CHECK_THROWS_AS(ReadTrialList(tmp.Path("bad.txt")), FormatError);

  ScoreSet scores = MakeScores({0.75}, {0.25, 0.5});
  WriteScoreFile(scores, tmp.Path("scores.txt"));
  ScoreSet back = ReadScoreFile(tmp.Path("scores.txt"));
  REQUIRE(back.scores.size() == 3);
  CHECK(back.scores[0].first == 0.75);
  CHECK(back.scores[0].second);
  CHECK_FALSE(back.scores[1].second);
}

}  // TEST_SUITE
