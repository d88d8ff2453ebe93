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

#ifndef LFF_TRAINER_H_
#define LFF_TRAINER_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lff/backbone.h"
#include "lff/frontend.h"
#include "lff/loss.h"

namespace lff {

enum class OptimizerKind { kSgd, kAdam };

std::string ToString(OptimizerKind kind);
OptimizerKind OptimizerKindFromString(const std::string& s);

struct TrainConfig {
  double loss_scale = 30.0;
  double loss_margin = 0.2;
  double lr = 0.01;
  int epochs = 15;
  int batch = 32;
  uint64_t seed = 0;
  double lambda_mix = 0.0;  // fraction of channels produced by the CNN branch
  OptimizerKind optimizer = OptimizerKind::kSgd;
  double momentum = 0.9;
  std::vector<int> lr_decay_epochs;  // lr multiplies by lr_decay at these epochs
  double lr_decay = 0.1;
  double crop_seconds = 2.0;
  int backbone_hidden = 64;
  int backbone_layers = 2;
  int embedding_dim = 32;

  void Validate() const;
};

struct LabeledUtterance {
  AudioBuffer audio;
  int label = 0;
  std::string id;
};

struct TrainedModel {
  FrontendSpec frontend;  // carries the final filterbank parameters
  ToyBackbone backbone;
  Matrix class_weights;   // C x D
  double lambda_mix = 0.0;
  Matrix cnn_kernels;     // m_cnn x cnn_kernel_len; empty when lambda_mix = 0
  int cnn_kernel_len = 400;
  int cnn_stride = 160;
};

struct EpochRecord {
  int epoch = 0;
  double mean_loss = 0.0;
  std::vector<double> alphas;
  std::vector<double> betas;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
};

struct TrainResult {
  TrainedModel model;
  TrainHistory history;
};

// Uniform crop start in [0, num_samples - crop_len], inclusive.
int SampleCropOffset(int num_samples, int crop_len, Rng& rng);

struct CropBatch {
  std::vector<AudioBuffer> segments;
  std::vector<int> labels;
};

// Fixed-length training segments with uniformly random offsets drawn from
// the supplied generator, one per listed utterance.
CropBatch SampleCropBatch(const std::vector<LabeledUtterance>& dataset,
                          const std::vector<int>& utterance_ids,
                          double crop_seconds, Rng& rng);

// Channel split (m_lff, m_cnn) = (round((1-lambda)M), round(lambda M)),
// rounding half up. Throws ConfigError when the two rounded halves do not
// sum back to m_total.
std::pair<int, int> MixChannelSplit(double lambda_mix, int m_total);

// Channel-wise concatenation with the filterbank channels first.
Matrix MixFeatures(const Matrix& lff_features, const Matrix& cnn_features,
                   double lambda_mix, int m_total);

// Joint mini-batch training of the backbone, the classifier weights, the
// filterbank parameters (lff kinds), and the CNN branch (lambda_mix > 0).
// Deterministic for a fixed (dataset, frontend, config).
TrainResult Train(const std::vector<LabeledUtterance>& dataset,
                  const FrontendSpec& frontend, const TrainConfig& config);

// Full-utterance features under a trained model, including the CNN mix.
Matrix ComputeModelFeatures(const TrainedModel& model, const AudioBuffer& audio);
std::vector<double> EmbedUtterance(const TrainedModel& model,
                                   const AudioBuffer& audio);

void SaveModel(const TrainedModel& model, const std::string& path);
TrainedModel LoadModel(const std::string& path);

// CSV with one row per epoch: epoch, loss, then flattened alpha and beta
// snapshots when present.
void WriteHistoryCsv(const TrainHistory& history, const std::string& path,
                     const std::string& config_hash);

}  // namespace lff

#endif  // LFF_TRAINER_H_
