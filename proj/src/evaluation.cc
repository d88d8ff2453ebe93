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

#include "lff/evaluation.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lff {

double CosineSimilarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ShapeError("cosine of unequal dimensions");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  double denom = std::sqrt(na) * std::sqrt(nb);
  if (denom < 1e-30) return 0.0;
  return dot / denom;
}

std::vector<AudioBuffer> SegmentForScoring(const AudioBuffer& audio,
                                           double segment_s, double overlap_s) {
  if (segment_s <= 0.0 || overlap_s < 0.0 || overlap_s >= segment_s)
    throw DomainError("need 0 <= overlap < segment length");
  int seg_len = static_cast<int>(std::llround(segment_s * audio.sample_rate));
  int step = static_cast<int>(std::llround((segment_s - overlap_s) * audio.sample_rate));
  if (audio.NumSamples() < seg_len)
    throw TooShortError("utterance shorter than one scoring segment");

  std::vector<AudioBuffer> segments;
  for (int start = 0; start + seg_len <= audio.NumSamples(); start += step) {
    AudioBuffer seg;
    seg.sample_rate = audio.sample_rate;
    seg.samples.assign(audio.samples.begin() + start,
                       audio.samples.begin() + start + seg_len);
    segments.push_back(std::move(seg));
  }
  return segments;
}

double ScoreTrial(const AudioBuffer& enroll, const AudioBuffer& test,
                  const TrainedModel& model) {
  std::vector<AudioBuffer> enroll_segs = SegmentForScoring(enroll, 4.0, 3.0);
  std::vector<AudioBuffer> test_segs = SegmentForScoring(test, 4.0, 3.0);

  std::vector<std::vector<double>> enroll_embs, test_embs;
  enroll_embs.reserve(enroll_segs.size());
  test_embs.reserve(test_segs.size());
  for (const AudioBuffer& seg : enroll_segs)
    enroll_embs.push_back(EmbedUtterance(model, seg));
  for (const AudioBuffer& seg : test_segs)
    test_embs.push_back(EmbedUtterance(model, seg));

  double acc = 0.0;
  for (const auto& e : enroll_embs)
    for (const auto& t : test_embs) acc += CosineSimilarity(e, t);
  return acc / (static_cast<double>(enroll_embs.size()) * test_embs.size());
}

namespace {

struct OperatingPoint {
  double far;
  double frr;
  double threshold;
};

}  // namespace

EerResult ComputeEer(const ScoreSet& scores) {
  std::vector<double> targets, non_targets;
  for (const auto& [score, is_target] : scores.scores) {
    (is_target ? targets : non_targets).push_back(score);
  }
  if (targets.empty() || non_targets.empty())
    throw DomainError("EER needs at least one target and one non-target trial");

  std::sort(targets.begin(), targets.end());
  std::sort(non_targets.begin(), non_targets.end());

  // Candidate thresholds: every unique score plus a sentinel above the
  // maximum. These visit every achievable (FAR, FRR) operating point,
  // with FAR counting non-targets >= threshold and FRR targets < threshold.
  std::vector<double> thresholds;
  thresholds.reserve(targets.size() + non_targets.size() + 1);
  thresholds.insert(thresholds.end(), targets.begin(), targets.end());
  thresholds.insert(thresholds.end(), non_targets.begin(), non_targets.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  thresholds.push_back(thresholds.back() + 1.0);

  std::vector<OperatingPoint> points;
  points.reserve(thresholds.size());
  for (double th : thresholds) {
    size_t nt_below =
        std::lower_bound(non_targets.begin(), non_targets.end(), th) -
        non_targets.begin();
    size_t t_below =
        std::lower_bound(targets.begin(), targets.end(), th) - targets.begin();
    double far = 1.0 - static_cast<double>(nt_below) / non_targets.size();
    double frr = static_cast<double>(t_below) / targets.size();
    points.push_back({far, frr, th});
  }

  // Keep the lowest threshold per distinct (FAR, FRR) point, then build the
  // lower convex hull over FAR ascending.
  std::sort(points.begin(), points.end(), [](const OperatingPoint& a,
                                             const OperatingPoint& b) {
    if (a.far != b.far) return a.far < b.far;
    if (a.frr != b.frr) return a.frr < b.frr;
    return a.threshold < b.threshold;
  });
  std::vector<OperatingPoint> unique_points;
  for (const OperatingPoint& p : points) {
    if (!unique_points.empty() && unique_points.back().far == p.far &&
        unique_points.back().frr == p.frr)
      continue;
    unique_points.push_back(p);
  }

  std::vector<OperatingPoint> hull;
  auto cross = [](const OperatingPoint& o, const OperatingPoint& a,
                  const OperatingPoint& b) {
    return (a.far - o.far) * (b.frr - o.frr) - (a.frr - o.frr) * (b.far - o.far);
  };
  for (const OperatingPoint& p : unique_points) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0.0)
      hull.pop_back();
    hull.push_back(p);
  }

  // Walk the hull; FAR - FRR ascends from -1-ish to +1-ish along it.
  EerResult result;
  for (size_t i = 0; i < hull.size(); ++i) {
    double d = hull[i].far - hull[i].frr;
    if (d == 0.0) {
      result.eer = hull[i].far;
      result.threshold = hull[i].threshold;
      return result;
    }
    if (d > 0.0) {
      if (i == 0) {  // entire hull above the diagonal; degenerate
        result.eer = hull[i].far;
        result.threshold = hull[i].threshold;
        return result;
      }
      double d_prev = hull[i - 1].far - hull[i - 1].frr;
      double t = -d_prev / (d - d_prev);
      result.eer = hull[i - 1].far + t * (hull[i].far - hull[i - 1].far);
      result.threshold =
          hull[i - 1].threshold + t * (hull[i].threshold - hull[i - 1].threshold);
      return result;
    }
  }
  // FAR <= FRR everywhere with no crossing found: report the final point.
  result.eer = hull.back().far;
  result.threshold = hull.back().threshold;
  return result;
}

std::vector<Trial> ReadTrialList(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open trial list: " + path);
  std::vector<Trial> trials;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    int label;
    Trial t;
    if (!(ls >> label >> t.enroll_id >> t.test_id) || (label != 0 && label != 1))
      throw FormatError("bad trial list line " + std::to_string(line_no));
    t.target = label == 1;
    trials.push_back(std::move(t));
  }
  return trials;
}

void WriteScoreFile(const ScoreSet& scores, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open score file for writing: " + path);
  os.precision(17);
  for (const auto& [score, is_target] : scores.scores)
    os << score << " " << (is_target ? 1 : 0) << "\n";
}

ScoreSet ReadScoreFile(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open score file: " + path);
  ScoreSet out;
  double score;
  int label;
  while (is >> score >> label) out.scores.emplace_back(score, label == 1);
  return out;
}

}  // namespace lff
