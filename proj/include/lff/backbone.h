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

#ifndef LFF_BACKBONE_H_
#define LFF_BACKBONE_H_

#include <vector>

#include "lff/common.h"

namespace lff {

struct BackboneConfig {
  int input_dim = 0;
  int hidden = 64;
  int num_hidden_layers = 2;  // 1 or 2
  int embedding_dim = 32;
};

// Minimal embedding network: per-feature mean/variance normalization over
// time, one or two affine+ReLU layers applied per frame, concatenated
// mean and standard deviation pooling over time, and an affine embedding map.
struct ToyBackbone {
  BackboneConfig config;
  std::vector<Matrix> weights;             // layer l: hidden x fan_in
  std::vector<std::vector<double>> biases;
  Matrix emb_weight;                       // embedding_dim x 2*hidden
  std::vector<double> emb_bias;

  static ToyBackbone Init(const BackboneConfig& config, Rng& rng);
};

// Per-utterance forward intermediates needed by the backward pass.
struct BackboneCache {
  Matrix normalized;                  // T x F
  std::vector<double> feat_mean;      // F
  std::vector<double> feat_inv_std;   // F
  std::vector<Matrix> activations;    // post-ReLU, T x hidden per layer
  std::vector<double> pool_mean;      // hidden
  std::vector<double> pool_std;       // hidden
  std::vector<double> pooled;         // 2*hidden
};

std::vector<double> BackboneForward(const ToyBackbone& net, const Matrix& features,
                                    BackboneCache* cache);

struct BackboneGrads {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
  Matrix emb_weight;
  std::vector<double> emb_bias;

  static BackboneGrads Zero(const BackboneConfig& config);
  void Accumulate(const BackboneGrads& other, double factor);
};

// Backpropagates the embedding gradient through the cached forward pass.
// Weight gradients accumulate into *grads; returns the gradient with respect
// to the input features.
Matrix BackboneBackward(const ToyBackbone& net, const Matrix& features,
                        const BackboneCache& cache,
                        const std::vector<double>& grad_embedding,
                        BackboneGrads* grads);

}  // namespace lff

#endif  // LFF_BACKBONE_H_
