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

#ifndef LFF_EVALUATION_H_
#define LFF_EVALUATION_H_

#include <string>
#include <vector>

#include "lff/trainer.h"

namespace lff {

struct Trial {
  std::string enroll_id;
  std::string test_id;
  bool target = false;
};

struct ScoreSet {
  std::vector<std::pair<double, bool>> scores;  // (score, is_target)
};

double CosineSimilarity(const std::vector<double>& a, const std::vector<double>& b);

// Splits an utterance into fixed-length segments with the given overlap;
// segments that would overrun the end are dropped, not padded.
std::vector<AudioBuffer> SegmentForScoring(const AudioBuffer& audio,
                                           double segment_s, double overlap_s);

// Verification score: 4-second segments with 3-second overlap on both sides,
// one embedding per segment, mean cosine similarity over all pairs.
double ScoreTrial(const AudioBuffer& enroll, const AudioBuffer& test,
                  const TrainedModel& model);

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

// Equal error rate on the convex hull of the achievable (FAR, FRR) operating
// points, linearly interpolated where the hull crosses FAR = FRR. FAR counts
// non-targets with score >= threshold, FRR targets with score < threshold;
// tied operating points keep the lower threshold.
EerResult ComputeEer(const ScoreSet& scores);

// Text lines "<label 0|1> <enroll_path> <test_path>".
std::vector<Trial> ReadTrialList(const std::string& path);

// Text lines "<score> <label 0|1>".
void WriteScoreFile(const ScoreSet& scores, const std::string& path);
ScoreSet ReadScoreFile(const std::string& path);

}  // namespace lff

#endif  // LFF_EVALUATION_H_
