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

#include "lff/backbone.h"

#include <cmath>

namespace lff {

namespace {
constexpr double kNormEps = 1e-5;
constexpr double kPoolEps = 1e-8;

Matrix HeUniform(int rows, int cols, Rng& rng) {
  double bound = std::sqrt(6.0 / cols);
  Matrix m(rows, cols);
  for (double& v : m.data) v = rng.UniformRange(-bound, bound);
  return m;
}

}  // namespace

ToyBackbone ToyBackbone::Init(const BackboneConfig& config, Rng& rng) {
  if (config.input_dim < 1) throw ConfigError("backbone input_dim must be >= 1");
  if (config.hidden < 1) throw ConfigError("backbone hidden must be >= 1");
  if (config.num_hidden_layers < 1 || config.num_hidden_layers > 2)
    throw ConfigError("backbone supports 1 or 2 hidden layers");
  if (config.embedding_dim < 1) throw ConfigError("embedding_dim must be >= 1");

  ToyBackbone net;
  net.config = config;
  int fan_in = config.input_dim;
  for (int l = 0; l < config.num_hidden_layers; ++l) {
    net.weights.push_back(HeUniform(config.hidden, fan_in, rng));
    net.biases.emplace_back(static_cast<size_t>(config.hidden), 0.0);
    fan_in = config.hidden;
  }
  net.emb_weight = HeUniform(config.embedding_dim, 2 * config.hidden, rng);
  net.emb_bias.assign(static_cast<size_t>(config.embedding_dim), 0.0);
  return net;
}

std::vector<double> BackboneForward(const ToyBackbone& net, const Matrix& features,
                                    BackboneCache* cache) {
  const BackboneConfig& cfg = net.config;
  if (features.cols != cfg.input_dim)
    throw ShapeError("feature dimension does not match backbone input");
  if (features.rows < 1) throw ShapeError("empty feature matrix");
  int t_frames = features.rows;

  BackboneCache local;
  BackboneCache& c = cache ? *cache : local;
  c = BackboneCache();

  // Per-feature normalization over the time axis.
  c.feat_mean.assign(static_cast<size_t>(cfg.input_dim), 0.0);
  c.feat_inv_std.assign(static_cast<size_t>(cfg.input_dim), 0.0);
  for (int f = 0; f < cfg.input_dim; ++f) {
    double mean = 0.0;
    for (int t = 0; t < t_frames; ++t) mean += features.At(t, f);
    mean /= t_frames;
    double var = 0.0;
    for (int t = 0; t < t_frames; ++t) {
      double d = features.At(t, f) - mean;
      var += d * d;
    }
    var /= t_frames;
    c.feat_mean[f] = mean;
    c.feat_inv_std[f] = 1.0 / std::sqrt(var + kNormEps);
  }
  c.normalized = Matrix(t_frames, cfg.input_dim);
  for (int t = 0; t < t_frames; ++t)
    for (int f = 0; f < cfg.input_dim; ++f)
      c.normalized.At(t, f) = (features.At(t, f) - c.feat_mean[f]) * c.feat_inv_std[f];

  // Per-frame affine + ReLU stack.
  const Matrix* prev = &c.normalized;
  for (size_t l = 0; l < net.weights.size(); ++l) {
    const Matrix& w = net.weights[l];
    Matrix act(t_frames, cfg.hidden);
    for (int t = 0; t < t_frames; ++t) {
      for (int j = 0; j < cfg.hidden; ++j) {
        double z = net.biases[l][j];
        for (int f = 0; f < w.cols; ++f) z += w.At(j, f) * prev->At(t, f);
        act.At(t, j) = z > 0.0 ? z : 0.0;
      }
    }
    c.activations.push_back(std::move(act));
    prev = &c.activations.back();
  }

  // Mean + standard deviation pooling over time.
  const Matrix& top = c.activations.back();
  c.pool_mean.assign(static_cast<size_t>(cfg.hidden), 0.0);
  c.pool_std.assign(static_cast<size_t>(cfg.hidden), 0.0);
  for (int j = 0; j < cfg.hidden; ++j) {
    double mean = 0.0;
    for (int t = 0; t < t_frames; ++t) mean += top.At(t, j);
    mean /= t_frames;
    double var = 0.0;
    for (int t = 0; t < t_frames; ++t) {
      double d = top.At(t, j) - mean;
      var += d * d;
    }
    var /= t_frames;
    c.pool_mean[j] = mean;
    c.pool_std[j] = std::sqrt(var + kPoolEps);
  }
  c.pooled.resize(static_cast<size_t>(2 * cfg.hidden));
  for (int j = 0; j < cfg.hidden; ++j) {
    c.pooled[j] = c.pool_mean[j];
    c.pooled[cfg.hidden + j] = c.pool_std[j];
  }

  std::vector<double> embedding(static_cast<size_t>(cfg.embedding_dim));
  for (int d = 0; d < cfg.embedding_dim; ++d) {
    double z = net.emb_bias[d];
    for (int j = 0; j < 2 * cfg.hidden; ++j) z += net.emb_weight.At(d, j) * c.pooled[j];
    embedding[d] = z;
  }
  return embedding;
}

BackboneGrads BackboneGrads::Zero(const BackboneConfig& config) {
  BackboneGrads g;
  int fan_in = config.input_dim;
  for (int l = 0; l < config.num_hidden_layers; ++l) {
    g.weights.emplace_back(config.hidden, fan_in);
    g.biases.emplace_back(static_cast<size_t>(config.hidden), 0.0);
    fan_in = config.hidden;
  }
  g.emb_weight = Matrix(config.embedding_dim, 2 * config.hidden);
  g.emb_bias.assign(static_cast<size_t>(config.embedding_dim), 0.0);
  return g;
}

void BackboneGrads::Accumulate(const BackboneGrads& other, double factor) {
  for (size_t l = 0; l < weights.size(); ++l) {
    for (size_t i = 0; i < weights[l].data.size(); ++i)
      weights[l].data[i] += factor * other.weights[l].data[i];
    for (size_t i = 0; i < biases[l].size(); ++i)
      biases[l][i] += factor * other.biases[l][i];
  }
  for (size_t i = 0; i < emb_weight.data.size(); ++i)
    emb_weight.data[i] += factor * other.emb_weight.data[i];
  for (size_t i = 0; i < emb_bias.size(); ++i)
    emb_bias[i] += factor * other.emb_bias[i];
}

Matrix BackboneBackward(const ToyBackbone& net, const Matrix& features,
                        const BackboneCache& cache,
                        const std::vector<double>& grad_embedding,
                        BackboneGrads* grads) {
  const BackboneConfig& cfg = net.config;
  int t_frames = features.rows;
  if (static_cast<int>(grad_embedding.size()) != cfg.embedding_dim)
    throw ShapeError("embedding gradient dimension mismatch");

  // Embedding affine.
  std::vector<double> d_pooled(static_cast<size_t>(2 * cfg.hidden), 0.0);
  for (int d = 0; d < cfg.embedding_dim; ++d) {
    grads->emb_bias[d] += grad_embedding[d];
    for (int j = 0; j < 2 * cfg.hidden; ++j) {
      grads->emb_weight.At(d, j) += grad_embedding[d] * cache.pooled[j];
      d_pooled[j] += grad_embedding[d] * net.emb_weight.At(d, j);
    }
  }

  // Pooling: d mean / d a[t][j] = 1/T, d std / d a[t][j] = (a - mean)/(T*std).
  const Matrix& top = cache.activations.back();
  Matrix d_act(t_frames, cfg.hidden);
  for (int t = 0; t < t_frames; ++t) {
    for (int j = 0; j < cfg.hidden; ++j) {
      double g = d_pooled[j] / t_frames;
      g += d_pooled[cfg.hidden + j] * (top.At(t, j) - cache.pool_mean[j]) /
           (t_frames * cache.pool_std[j]);
      d_act.At(t, j) = g;
    }
  }

  // Hidden layers in reverse.
  for (int l = static_cast<int>(net.weights.size()) - 1; l >= 0; --l) {
    const Matrix& w = net.weights[l];
    const Matrix& act = cache.activations[l];
    const Matrix& input =
        l == 0 ? cache.normalized : cache.activations[static_cast<size_t>(l) - 1];
    Matrix d_input(t_frames, w.cols);
    for (int t = 0; t < t_frames; ++t) {
      for (int j = 0; j < cfg.hidden; ++j) {
        if (act.At(t, j) <= 0.0) continue;  // ReLU mask
        double dz = d_act.At(t, j);
        grads->biases[l][j] += dz;
        for (int f = 0; f < w.cols; ++f) {
          grads->weights[l].At(j, f) += dz * input.At(t, f);
          d_input.At(t, f) += dz * w.At(j, f);
        }
      }
    }
    d_act = std::move(d_input);
  }

  // Feature normalization: for each column, with g the incoming gradient,
  // dx = inv_std * (g - mean(g) - x_hat * mean(g .* x_hat)).
  Matrix d_features(t_frames, cfg.input_dim);
  for (int f = 0; f < cfg.input_dim; ++f) {
    double mean_g = 0.0, mean_gx = 0.0;
    for (int t = 0; t < t_frames; ++t) {
      mean_g += d_act.At(t, f);
      mean_gx += d_act.At(t, f) * cache.normalized.At(t, f);
    }
    mean_g /= t_frames;
    mean_gx /= t_frames;
    for (int t = 0; t < t_frames; ++t) {
      d_features.At(t, f) =
          cache.feat_inv_std[f] *
          (d_act.At(t, f) - mean_g - cache.normalized.At(t, f) * mean_gx);
    }
  }
  return d_features;
}

}  // namespace lff
