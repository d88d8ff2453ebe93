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

#include "lff/trainer.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

namespace lff {

std::string ToString(OptimizerKind kind) {
  return kind == OptimizerKind::kSgd ? "sgd" : "adam";
}

OptimizerKind OptimizerKindFromString(const std::string& s) {
  if (s == "sgd") return OptimizerKind::kSgd;
  if (s == "adam") return OptimizerKind::kAdam;
  throw ConfigError("unknown optimizer: " + s);
}

void TrainConfig::Validate() const {
  if (loss_scale <= 0.0) throw ConfigError("loss_scale must be positive");
  if (loss_margin < 0.0 || loss_margin >= 1.0)
    throw ConfigError("loss_margin must lie in [0, 1)");
  if (lr <= 0.0) throw ConfigError("lr must be positive");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (batch < 1) throw ConfigError("batch must be >= 1");
  if (lambda_mix < 0.0 || lambda_mix > 1.0)
    throw ConfigError("lambda_mix must lie in [0, 1]");
  if (crop_seconds <= 0.0) throw ConfigError("crop_seconds must be positive");
}

int SampleCropOffset(int num_samples, int crop_len, Rng& rng) {
  if (num_samples < crop_len)
    throw TooShortError("utterance shorter than the training crop");
  return static_cast<int>(rng.UniformInt(0, num_samples - crop_len));
}

CropBatch SampleCropBatch(const std::vector<LabeledUtterance>& dataset,
                          const std::vector<int>& utterance_ids,
                          double crop_seconds, Rng& rng) {
  CropBatch batch;
  for (int id : utterance_ids) {
    const LabeledUtterance& utt = dataset.at(static_cast<size_t>(id));
    int crop_len =
        static_cast<int>(std::llround(crop_seconds * utt.audio.sample_rate));
    int offset = SampleCropOffset(utt.audio.NumSamples(), crop_len, rng);
    AudioBuffer segment;
    segment.sample_rate = utt.audio.sample_rate;
    segment.samples.assign(utt.audio.samples.begin() + offset,
                           utt.audio.samples.begin() + offset + crop_len);
    batch.segments.push_back(std::move(segment));
    batch.labels.push_back(utt.label);
  }
  return batch;
}

namespace {

int RoundHalfUp(double x) { return static_cast<int>(std::floor(x + 0.5)); }

}  // namespace

std::pair<int, int> MixChannelSplit(double lambda_mix, int m_total) {
  if (lambda_mix < 0.0 || lambda_mix > 1.0)
    throw ConfigError("lambda_mix must lie in [0, 1]");
  if (m_total < 1) throw ConfigError("m_total must be >= 1");
  int m_cnn = RoundHalfUp(lambda_mix * m_total);
  int m_lff = RoundHalfUp((1.0 - lambda_mix) * m_total);
  if (m_lff + m_cnn != m_total)
    throw ConfigError("lambda_mix splits the channels inconsistently");
  if (m_lff < 1) throw ConfigError("lambda_mix leaves no filterbank channels");
  return {m_lff, m_cnn};
}

Matrix MixFeatures(const Matrix& lff_features, const Matrix& cnn_features,
                   double lambda_mix, int m_total) {
  auto [m_lff, m_cnn] = MixChannelSplit(lambda_mix, m_total);
  if (lff_features.cols != m_lff)
    throw ShapeError("filterbank feature channels do not match the split");
  if (m_cnn == 0) {
    if (cnn_features.data.empty()) return lff_features;
    throw ShapeError("unexpected CNN channels with lambda_mix = 0");
  }
  if (cnn_features.cols != m_cnn)
    throw ShapeError("CNN feature channels do not match the split");
  if (cnn_features.rows != lff_features.rows)
    throw ShapeError("feature branches disagree on frame count");

  Matrix out(lff_features.rows, m_total);
  for (int t = 0; t < out.rows; ++t) {
    for (int c = 0; c < m_lff; ++c) out.At(t, c) = lff_features.At(t, c);
    for (int c = 0; c < m_cnn; ++c) out.At(t, m_lff + c) = cnn_features.At(t, c);
  }
  return out;
}

namespace {

// Mean/variance normalization shared with the time-domain front-ends.
std::vector<double> NormalizeWaveform(const std::vector<double>& samples) {
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var /= static_cast<double>(samples.size());
  double inv_std = 1.0 / std::sqrt(var + 1e-12);
  std::vector<double> x(samples.size());
  for (size_t t = 0; t < samples.size(); ++t) x[t] = (samples[t] - mean) * inv_std;
  return x;
}

Matrix CnnForward(const Matrix& kernels, int stride, const std::vector<double>& x) {
  int klen = kernels.cols;
  int frames = (static_cast<int>(x.size()) - klen) / stride + 1;
  if (frames < 1) throw TooShortError("signal shorter than the CNN kernel");
  Matrix out(frames, kernels.rows);
  for (int i = 0; i < kernels.rows; ++i) {
    for (int j = 0; j < frames; ++j) {
      const double* seg = x.data() + static_cast<size_t>(j) * stride;
      double acc = 0.0;
      for (int t = 0; t < klen; ++t) acc += seg[t] * kernels.At(i, t);
      out.At(j, i) = acc;
    }
  }
  return out;
}

void CnnBackward(const Matrix& kernels, int stride, const std::vector<double>& x,
                 const Matrix& d_out, Matrix* d_kernels) {
  int klen = kernels.cols;
  for (int i = 0; i < kernels.rows; ++i) {
    for (int j = 0; j < d_out.rows; ++j) {
      double g = d_out.At(j, i);
      if (g == 0.0) continue;
      const double* seg = x.data() + static_cast<size_t>(j) * stride;
      for (int t = 0; t < klen; ++t) d_kernels->At(i, t) += g * seg[t];
    }
  }
}

// Flat view over every trainable tensor; the order below is the documented
// serialization order for optimizer state.
struct ParamLayout {
  std::vector<std::pair<double*, size_t>> slices;
  size_t total = 0;

  void Add(double* p, size_t n) {
    slices.emplace_back(p, n);
    total += n;
  }
  void Gather(std::vector<double>* flat) const {
    flat->resize(total);
    size_t k = 0;
    for (auto [p, n] : slices)
      for (size_t i = 0; i < n; ++i) (*flat)[k++] = p[i];
  }
  void Scatter(const std::vector<double>& flat) const {
    size_t k = 0;
    for (auto [p, n] : slices)
      for (size_t i = 0; i < n; ++i) p[i] = flat[k++];
  }
};

ParamLayout LayoutOf(ToyBackbone* net, Matrix* class_weights,
                     FilterBankParams* fb_or_null, Matrix* cnn_or_null) {
  ParamLayout layout;
  for (size_t l = 0; l < net->weights.size(); ++l) {
    layout.Add(net->weights[l].data.data(), net->weights[l].data.size());
    layout.Add(net->biases[l].data(), net->biases[l].size());
  }
  layout.Add(net->emb_weight.data.data(), net->emb_weight.data.size());
  layout.Add(net->emb_bias.data(), net->emb_bias.size());
  layout.Add(class_weights->data.data(), class_weights->data.size());
  if (fb_or_null) {
    layout.Add(fb_or_null->alphas.data(), fb_or_null->alphas.size());
    layout.Add(fb_or_null->betas.data(), fb_or_null->betas.size());
  }
  if (cnn_or_null && !cnn_or_null->data.empty())
    layout.Add(cnn_or_null->data.data(), cnn_or_null->data.size());
  return layout;
}

class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double momentum, size_t n)
      : kind_(kind), momentum_(momentum) {
    if (kind_ == OptimizerKind::kSgd) {
      velocity_.assign(n, 0.0);
    } else {
      m_.assign(n, 0.0);
      v_.assign(n, 0.0);
    }
  }

  void Step(double lr, std::vector<double>* params, const std::vector<double>& grads) {
    if (kind_ == OptimizerKind::kSgd) {
      for (size_t i = 0; i < params->size(); ++i) {
        velocity_[i] = momentum_ * velocity_[i] + grads[i];
        (*params)[i] -= lr * velocity_[i];
      }
    } else {
      // Standard Adam, beta1=0.9, beta2=0.999, eps=1e-8.
      ++t_;
      double b1c = 1.0 - std::pow(0.9, t_);
      double b2c = 1.0 - std::pow(0.999, t_);
      for (size_t i = 0; i < params->size(); ++i) {
        m_[i] = 0.9 * m_[i] + 0.1 * grads[i];
        v_[i] = 0.999 * v_[i] + 0.001 * grads[i] * grads[i];
        (*params)[i] -= lr * (m_[i] / b1c) / (std::sqrt(v_[i] / b2c) + 1e-8);
      }
    }
  }

 private:
  OptimizerKind kind_;
  double momentum_;
  std::vector<double> velocity_;
  std::vector<double> m_, v_;
  int t_ = 0;
};

void ValidateDataset(const std::vector<LabeledUtterance>& dataset) {
  if (dataset.empty()) throw ConfigError("empty training set");
  std::map<int, int> counts;
  for (const LabeledUtterance& utt : dataset) {
    if (utt.label < 0) throw ConfigError("labels must be non-negative");
    counts[utt.label]++;
  }
  if (counts.size() < 2) throw ConfigError("training needs at least 2 classes");
  int max_label = counts.rbegin()->first;
  if (static_cast<size_t>(max_label) + 1 != counts.size())
    throw ConfigError("labels must be dense 0..C-1");
  for (const auto& [label, n] : counts) {
    if (n < 2) throw ConfigError("every class needs at least 2 utterances");
  }
}

}  // namespace

TrainResult Train(const std::vector<LabeledUtterance>& dataset,
                  const FrontendSpec& frontend, const TrainConfig& config) {
  config.Validate();
  frontend.Validate();
  ValidateDataset(dataset);
  if (config.lambda_mix > 0.0 && !frontend.UsesFilterbank())
    throw ConfigError("lambda_mix requires a filterbank frontend");

  int num_classes = 0;
  for (const LabeledUtterance& utt : dataset)
    num_classes = std::max(num_classes, utt.label + 1);

  TrainedModel model;
  model.frontend = frontend;
  model.lambda_mix = config.lambda_mix;

  int m_total = frontend.NumFeatures();
  int m_lff = m_total, m_cnn = 0;
  if (config.lambda_mix > 0.0) {
    std::tie(m_lff, m_cnn) = MixChannelSplit(config.lambda_mix, m_total);
    // The filterbank branch shrinks to its share of the channels, and the
    // CNN branch adopts the transform's window and hop so both produce the
    // same frame count (400 and 160 at the default configuration).
    model.frontend.filterbank =
        MelInit(m_lff, frontend.stft.NumBins(), frontend.sample_rate,
                frontend.filterbank.shape);
    model.cnn_kernel_len = frontend.stft.window_len;
    model.cnn_stride = frontend.stft.hop;
  }

  Rng init_rng(config.seed);
  BackboneConfig bb_config;
  bb_config.input_dim = m_total;
  bb_config.hidden = config.backbone_hidden;
  bb_config.num_hidden_layers = config.backbone_layers;
  bb_config.embedding_dim = config.embedding_dim;
  model.backbone = ToyBackbone::Init(bb_config, init_rng);
  model.class_weights = Matrix(num_classes, bb_config.embedding_dim);
  for (double& v : model.class_weights.data) v = init_rng.UniformRange(-1.0, 1.0);
  if (m_cnn > 0) {
    model.cnn_kernels = Matrix(m_cnn, model.cnn_kernel_len);
    double bound = 1.0 / std::sqrt(static_cast<double>(model.cnn_kernel_len));
    for (double& v : model.cnn_kernels.data) v = init_rng.UniformRange(-bound, bound);
  }

  bool train_fb = model.frontend.TrainsFilterbank();
  ParamLayout layout =
      LayoutOf(&model.backbone, &model.class_weights,
               train_fb ? &model.frontend.filterbank : nullptr,
               m_cnn > 0 ? &model.cnn_kernels : nullptr);
  Optimizer optimizer(config.optimizer, config.momentum, layout.total);

  Rng data_rng(config.seed ^ 0x9E3779B97F4A7C15ull);
  int n_utts = static_cast<int>(dataset.size());
  std::vector<int> order(static_cast<size_t>(n_utts));
  for (int i = 0; i < n_utts; ++i) order[i] = i;

  TrainResult result;
  std::vector<double> flat_params, flat_grads;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double lr = config.lr;
    for (int decay_epoch : config.lr_decay_epochs)
      if (epoch >= decay_epoch) lr *= config.lr_decay;

    data_rng.Shuffle(order);
    double epoch_loss = 0.0;
    int num_batches = 0;

    for (int start = 0; start < n_utts; start += config.batch) {
      int end = std::min(start + config.batch, n_utts);
      std::vector<int> ids(order.begin() + start, order.begin() + end);
      CropBatch batch =
          SampleCropBatch(dataset, ids, config.crop_seconds, data_rng);
      int b_size = static_cast<int>(batch.segments.size());

      // Forward pass per crop.
      std::vector<SpectrumMatrix> spectra(static_cast<size_t>(b_size));
      std::vector<std::vector<double>> norm_waves(static_cast<size_t>(b_size));
      std::vector<Matrix> features(static_cast<size_t>(b_size));
      std::vector<BackboneCache> caches(static_cast<size_t>(b_size));
      Matrix embeddings(b_size, bb_config.embedding_dim);
      for (int b = 0; b < b_size; ++b) {
        Matrix feat;
        if (model.frontend.UsesFilterbank()) {
          spectra[b] = ComputeSpectrum(batch.segments[b], model.frontend.stft);
          FeatureMatrix fb_feat = FilterbankForward(
              spectra[b], model.frontend.filterbank, model.frontend.epsilon);
          if (m_cnn > 0) {
            norm_waves[b] = NormalizeWaveform(batch.segments[b].samples);
            Matrix cnn = CnnForward(model.cnn_kernels, model.cnn_stride, norm_waves[b]);
            feat = MixFeatures(fb_feat.values, cnn, config.lambda_mix, m_total);
          } else {
            feat = std::move(fb_feat.values);
          }
        } else {
          feat = TimeFrontendForward(batch.segments[b], model.frontend.time_kernels,
                                     model.frontend.sample_rate,
                                     model.frontend.epsilon)
                     .values;
        }
        features[b] = std::move(feat);
        std::vector<double> emb =
            BackboneForward(model.backbone, features[b], &caches[b]);
        for (int d = 0; d < bb_config.embedding_dim; ++d) embeddings.At(b, d) = emb[d];
      }

      AmSoftmaxResult loss = AmSoftmaxLoss(embeddings, model.class_weights,
                                           batch.labels, config.loss_scale,
                                           config.loss_margin);
      epoch_loss += loss.loss;
      ++num_batches;

      // Backward pass.
      BackboneGrads bb_grads = BackboneGrads::Zero(bb_config);
      ParamGradients fb_grads;
      fb_grads.d_alpha.assign(static_cast<size_t>(m_lff), 0.0);
      fb_grads.d_beta.assign(static_cast<size_t>(m_lff), 0.0);
      Matrix cnn_grads(model.cnn_kernels.rows, model.cnn_kernels.cols);
      for (int b = 0; b < b_size; ++b) {
        std::vector<double> grad_emb(static_cast<size_t>(bb_config.embedding_dim));
        for (int d = 0; d < bb_config.embedding_dim; ++d)
          grad_emb[d] = loss.grad_embeddings.At(b, d);
        Matrix d_feat = BackboneBackward(model.backbone, features[b], caches[b],
                                         grad_emb, &bb_grads);
        if (train_fb) {
          Matrix d_lff(d_feat.rows, m_lff);
          for (int t = 0; t < d_feat.rows; ++t)
            for (int c = 0; c < m_lff; ++c) d_lff.At(t, c) = d_feat.At(t, c);
          ParamGradients g =
              FilterbankBackward(spectra[b], model.frontend.filterbank, d_lff,
                                 model.frontend.epsilon);
          for (int i = 0; i < m_lff; ++i) {
            fb_grads.d_alpha[i] += g.d_alpha[i];
            fb_grads.d_beta[i] += g.d_beta[i];
          }
        }
        if (m_cnn > 0) {
          Matrix d_cnn(d_feat.rows, m_cnn);
          for (int t = 0; t < d_feat.rows; ++t)
            for (int c = 0; c < m_cnn; ++c) d_cnn.At(t, c) = d_feat.At(t, m_lff + c);
          CnnBackward(model.cnn_kernels, model.cnn_stride, norm_waves[b], d_cnn,
                      &cnn_grads);
        }
      }

      // Assemble the flat gradient in layout order.
      flat_grads.clear();
      flat_grads.reserve(layout.total);
      for (size_t l = 0; l < bb_grads.weights.size(); ++l) {
        flat_grads.insert(flat_grads.end(), bb_grads.weights[l].data.begin(),
                          bb_grads.weights[l].data.end());
        flat_grads.insert(flat_grads.end(), bb_grads.biases[l].begin(),
                          bb_grads.biases[l].end());
      }
      flat_grads.insert(flat_grads.end(), bb_grads.emb_weight.data.begin(),
                        bb_grads.emb_weight.data.end());
      flat_grads.insert(flat_grads.end(), bb_grads.emb_bias.begin(),
                        bb_grads.emb_bias.end());
      flat_grads.insert(flat_grads.end(), loss.grad_class_weights.data.begin(),
                        loss.grad_class_weights.data.end());
      if (train_fb) {
        flat_grads.insert(flat_grads.end(), fb_grads.d_alpha.begin(),
                          fb_grads.d_alpha.end());
        flat_grads.insert(flat_grads.end(), fb_grads.d_beta.begin(),
                          fb_grads.d_beta.end());
      }
      if (m_cnn > 0)
        flat_grads.insert(flat_grads.end(), cnn_grads.data.begin(),
                          cnn_grads.data.end());

      layout.Gather(&flat_params);
      optimizer.Step(lr, &flat_params, flat_grads);
      layout.Scatter(flat_params);
      if (train_fb) {
        // Element-wise writeback keeps the flat-parameter pointers valid.
        FilterBankParams projected = ProjectParams(model.frontend.filterbank);
        for (int i = 0; i < m_lff; ++i) {
          model.frontend.filterbank.alphas[static_cast<size_t>(i)] =
              projected.alphas[static_cast<size_t>(i)];
          model.frontend.filterbank.betas[static_cast<size_t>(i)] =
              projected.betas[static_cast<size_t>(i)];
        }
      }
    }

    EpochRecord record;
    record.epoch = epoch;
    record.mean_loss = epoch_loss / num_batches;
    if (model.frontend.UsesFilterbank()) {
      record.alphas = model.frontend.filterbank.alphas;
      record.betas = model.frontend.filterbank.betas;
    }
    result.history.epochs.push_back(std::move(record));
  }

  result.model = std::move(model);
  return result;
}

Matrix ComputeModelFeatures(const TrainedModel& model, const AudioBuffer& audio) {
  if (model.lambda_mix > 0.0) {
    FeatureMatrix fb_feat = ComputeFrontendFeatures(model.frontend, audio);
    std::vector<double> x = NormalizeWaveform(audio.samples);
    Matrix cnn = CnnForward(model.cnn_kernels, model.cnn_stride, x);
    int m_total = fb_feat.values.cols + model.cnn_kernels.rows;
    return MixFeatures(fb_feat.values, cnn, model.lambda_mix, m_total);
  }
  return ComputeFrontendFeatures(model.frontend, audio).values;
}

std::vector<double> EmbedUtterance(const TrainedModel& model,
                                   const AudioBuffer& audio) {
  Matrix features = ComputeModelFeatures(model, audio);
  return BackboneForward(model.backbone, features, nullptr);
}

namespace {

constexpr uint32_t kModelMagic = 0x314D464Cu;  // "LFM1"

void WriteF32Matrix(std::ostream& os, const Matrix& m) {
  WriteU32Le(os, static_cast<uint32_t>(m.rows));
  WriteU32Le(os, static_cast<uint32_t>(m.cols));
  for (double v : m.data) WriteF32Le(os, static_cast<float>(v));
}

Matrix ReadF32Matrix(std::istream& is) {
  int rows = static_cast<int>(ReadU32Le(is));
  int cols = static_cast<int>(ReadU32Le(is));
  Matrix m(rows, cols);
  for (double& v : m.data) v = static_cast<double>(ReadF32Le(is));
  return m;
}

void WriteF64Vector(std::ostream& os, const std::vector<double>& v) {
  WriteU32Le(os, static_cast<uint32_t>(v.size()));
  for (double x : v) WriteF64Le(os, x);
}

std::vector<double> ReadF64Vector(std::istream& is) {
  uint32_t n = ReadU32Le(is);
  std::vector<double> v(n);
  for (double& x : v) x = ReadF64Le(is);
  return v;
}

void WriteF32Vector(std::ostream& os, const std::vector<double>& v) {
  WriteU32Le(os, static_cast<uint32_t>(v.size()));
  for (double x : v) WriteF32Le(os, static_cast<float>(x));
}

std::vector<double> ReadF32Vector(std::istream& is) {
  uint32_t n = ReadU32Le(is);
  std::vector<double> v(n);
  for (double& x : v) x = static_cast<double>(ReadF32Le(is));
  return v;
}

}  // namespace

void SaveModel(const TrainedModel& model, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open model file for writing: " + path);
  WriteU32Le(os, kModelMagic);
  WriteU32Le(os, 1);  // version
  WriteU32Le(os, static_cast<uint32_t>(model.frontend.kind));
  WriteU32Le(os, static_cast<uint32_t>(model.frontend.sample_rate));
  WriteU32Le(os, static_cast<uint32_t>(model.frontend.stft.window_len));
  WriteU32Le(os, static_cast<uint32_t>(model.frontend.stft.hop));
  WriteU32Le(os, static_cast<uint32_t>(model.frontend.stft.n_fft));
  WriteU32Le(os, static_cast<uint32_t>(model.frontend.stft.window));
  WriteU32Le(os, static_cast<uint32_t>(model.frontend.stft.spectrum));
  WriteF64Le(os, model.frontend.epsilon);
  WriteF64Le(os, model.lambda_mix);

  if (model.frontend.UsesFilterbank()) {
    const FilterBankParams& fb = model.frontend.filterbank;
    WriteU32Le(os, fb.shape == FilterShape::kTriangle ? 0u : 1u);
    WriteU32Le(os, static_cast<uint32_t>(fb.n_bins));
    WriteF64Vector(os, fb.alphas);
    WriteF64Vector(os, fb.betas);
  } else {
    const TimeKernelParams& tk = model.frontend.time_kernels;
    WriteU32Le(os, tk.kind == TimeKernelKind::kSinc ? 0u : 1u);
    WriteU32Le(os, static_cast<uint32_t>(tk.kernel_len));
    WriteU32Le(os, static_cast<uint32_t>(tk.stride));
    WriteU32Le(os, static_cast<uint32_t>(tk.pool));
    WriteF64Vector(os, tk.kind == TimeKernelKind::kSinc ? tk.low_hz : tk.center_hz);
    WriteF64Vector(os, tk.kind == TimeKernelKind::kSinc ? tk.band_hz : tk.sigma_s);
  }

  WriteU32Le(os, static_cast<uint32_t>(model.cnn_kernel_len));
  WriteU32Le(os, static_cast<uint32_t>(model.cnn_stride));
  WriteF32Matrix(os, model.cnn_kernels);

  const ToyBackbone& net = model.backbone;
  WriteU32Le(os, static_cast<uint32_t>(net.config.input_dim));
  WriteU32Le(os, static_cast<uint32_t>(net.config.hidden));
  WriteU32Le(os, static_cast<uint32_t>(net.config.num_hidden_layers));
  WriteU32Le(os, static_cast<uint32_t>(net.config.embedding_dim));
  for (size_t l = 0; l < net.weights.size(); ++l) {
    WriteF32Matrix(os, net.weights[l]);
    WriteF32Vector(os, net.biases[l]);
  }
  WriteF32Matrix(os, net.emb_weight);
  WriteF32Vector(os, net.emb_bias);
  WriteF32Matrix(os, model.class_weights);
  if (!os) throw ConfigError("failed writing model file: " + path);
}

TrainedModel LoadModel(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open model file: " + path);
  if (ReadU32Le(is) != kModelMagic) throw FormatError("bad model magic: " + path);
  uint32_t version = ReadU32Le(is);
  if (version != 1) throw UnsupportedFormatError("unsupported model version");

  TrainedModel model;
  model.frontend.kind = static_cast<FrontendKind>(ReadU32Le(is));
  model.frontend.sample_rate = static_cast<int>(ReadU32Le(is));
  model.frontend.stft.window_len = static_cast<int>(ReadU32Le(is));
  model.frontend.stft.hop = static_cast<int>(ReadU32Le(is));
  model.frontend.stft.n_fft = static_cast<int>(ReadU32Le(is));
  model.frontend.stft.window = static_cast<WindowKind>(ReadU32Le(is));
  model.frontend.stft.spectrum = static_cast<SpectrumKind>(ReadU32Le(is));
  model.frontend.epsilon = ReadF64Le(is);
  model.lambda_mix = ReadF64Le(is);

  if (model.frontend.UsesFilterbank()) {
    FilterBankParams& fb = model.frontend.filterbank;
    fb.shape = ReadU32Le(is) == 0 ? FilterShape::kTriangle : FilterShape::kBell;
    fb.n_bins = static_cast<int>(ReadU32Le(is));
    fb.alphas = ReadF64Vector(is);
    fb.betas = ReadF64Vector(is);
  } else {
    TimeKernelParams& tk = model.frontend.time_kernels;
    tk.kind = ReadU32Le(is) == 0 ? TimeKernelKind::kSinc : TimeKernelKind::kGabor;
    tk.kernel_len = static_cast<int>(ReadU32Le(is));
    tk.stride = static_cast<int>(ReadU32Le(is));
    tk.pool = static_cast<int>(ReadU32Le(is));
    if (tk.kind == TimeKernelKind::kSinc) {
      tk.low_hz = ReadF64Vector(is);
      tk.band_hz = ReadF64Vector(is);
    } else {
      tk.center_hz = ReadF64Vector(is);
      tk.sigma_s = ReadF64Vector(is);
    }
  }

  model.cnn_kernel_len = static_cast<int>(ReadU32Le(is));
  model.cnn_stride = static_cast<int>(ReadU32Le(is));
  model.cnn_kernels = ReadF32Matrix(is);

  BackboneConfig bb;
  bb.input_dim = static_cast<int>(ReadU32Le(is));
  bb.hidden = static_cast<int>(ReadU32Le(is));
  bb.num_hidden_layers = static_cast<int>(ReadU32Le(is));
  bb.embedding_dim = static_cast<int>(ReadU32Le(is));
  model.backbone.config = bb;
  for (int l = 0; l < bb.num_hidden_layers; ++l) {
    model.backbone.weights.push_back(ReadF32Matrix(is));
    model.backbone.biases.push_back(ReadF32Vector(is));
  }
  model.backbone.emb_weight = ReadF32Matrix(is);
  model.backbone.emb_bias = ReadF32Vector(is);
  model.class_weights = ReadF32Matrix(is);
  if (!is) throw FormatError("truncated model file: " + path);
  return model;
}

void WriteHistoryCsv(const TrainHistory& history, const std::string& path,
                     const std::string& config_hash) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open history CSV for writing: " + path);
  os << "# config_hash " << config_hash << "\n";
  size_t m = history.epochs.empty() ? 0 : history.epochs.front().alphas.size();
  os << "epoch,loss";
  for (size_t i = 0; i < m; ++i) os << ",alpha_" << i;
  for (size_t i = 0; i < m; ++i) os << ",beta_" << i;
  os << "\n";
  os.precision(17);
  for (const EpochRecord& rec : history.epochs) {
    os << rec.epoch << "," << rec.mean_loss;
    for (double a : rec.alphas) os << "," << a;
    for (double b : rec.betas) os << "," << b;
    os << "\n";
  }
}

}  // namespace lff
