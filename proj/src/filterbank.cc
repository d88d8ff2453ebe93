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

#include "lff/filterbank.h"

#include <cmath>
#include <fstream>

#include "json.hpp"

namespace lff {

namespace {
constexpr double kLn10 = 2.30258509299404568402;
}

std::string ToString(FilterShape shape) {
  return shape == FilterShape::kTriangle ? "triangle" : "bell";
}

FilterShape FilterShapeFromString(const std::string& s) {
  if (s == "triangle") return FilterShape::kTriangle;
  if (s == "bell") return FilterShape::kBell;
  throw ConfigError("unknown filter shape: " + s);
}

void FilterBankParams::Validate() const {
  if (n_bins < 2) throw ConfigError("filterbank needs n_bins >= 2");
  if (alphas.empty()) throw ConfigError("filterbank needs at least one filter");
  if (alphas.size() != betas.size())
    throw ConfigError("alphas and betas must have equal length");
  for (size_t i = 0; i < alphas.size(); ++i) {
    if (betas[i] < kBetaMin)
      throw ConfigError("beta below the minimum bandwidth floor");
    if (alphas[i] < 0.0 || alphas[i] > static_cast<double>(n_bins - 1))
      throw ConfigError("alpha outside [0, n_bins-1]");
  }
}

double FilterResponse(FilterShape shape, double alpha, double beta, double n) {
  double d = n - alpha;
  if (shape == FilterShape::kTriangle) {
    double v = 1.0 - 2.0 * std::abs(d) / beta;
    return v > 0.0 ? v : 0.0;
  }
  return std::exp(-d * d / (2.0 * beta * beta));
}

Matrix BuildWeightMatrix(const FilterBankParams& params) {
  params.Validate();
  int n = params.n_bins;
  int m = params.NumFilters();
  Matrix w(n, m);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < n; ++k) {
      w.At(k, i) = FilterResponse(params.shape, params.alphas[i], params.betas[i],
                                  static_cast<double>(k));
    }
  }
  return w;
}

FeatureMatrix FilterbankForward(const SpectrumMatrix& spectrum,
                                const FilterBankParams& params, double epsilon) {
  params.Validate();
  if (epsilon <= 0.0) throw DomainError("epsilon must be positive");
  if (spectrum.NumBins() != params.n_bins)
    throw ShapeError("spectrum bins do not match filterbank bins");

  Matrix w = BuildWeightMatrix(params);
  int t_frames = spectrum.NumFrames();
  int m = params.NumFilters();
  int n = params.n_bins;

  FeatureMatrix out;
  out.params_snapshot = params;
  out.values = Matrix(t_frames, m);
  for (int t = 0; t < t_frames; ++t) {
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += spectrum.values.At(t, k) * w.At(k, i);
      out.values.At(t, i) = 10.0 * std::log10(acc + epsilon);
    }
  }
  return out;
}

namespace {

// d response / d alpha and d beta at integer bin n. Triangle derivatives are
// nonzero only on the open support {0 < w < 1}.
void ResponseGradient(FilterShape shape, double alpha, double beta, double n,
                      double* d_alpha, double* d_beta) {
  double d = n - alpha;
  if (shape == FilterShape::kTriangle) {
    double a = std::abs(d);
    if (a <= 0.0 || a >= 0.5 * beta) {  // kink or outside support
      *d_alpha = 0.0;
      *d_beta = 0.0;
      return;
    }
    double sign = d > 0.0 ? 1.0 : -1.0;
    *d_alpha = 2.0 * sign / beta;
    *d_beta = 2.0 * a / (beta * beta);
    return;
  }
  double w = std::exp(-d * d / (2.0 * beta * beta));
  *d_alpha = w * d / (beta * beta);
  *d_beta = w * d * d / (beta * beta * beta);
}

}  // namespace

ParamGradients FilterbankBackward(const SpectrumMatrix& spectrum,
                                  const FilterBankParams& params,
                                  const Matrix& upstream_grad, double epsilon) {
  params.Validate();
  if (spectrum.NumBins() != params.n_bins)
    throw ShapeError("spectrum bins do not match filterbank bins");
  int t_frames = spectrum.NumFrames();
  int m = params.NumFilters();
  int n = params.n_bins;
  if (upstream_grad.rows != t_frames || upstream_grad.cols != m)
    throw ShapeError("upstream gradient shape does not match features");

  Matrix w = BuildWeightMatrix(params);

  // g[t][i] = upstream[t][i] * d(10*log10(acc + eps))/d acc.
  Matrix g(t_frames, m);
  for (int t = 0; t < t_frames; ++t) {
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += spectrum.values.At(t, k) * w.At(k, i);
      g.At(t, i) = upstream_grad.At(t, i) * 10.0 / (kLn10 * (acc + epsilon));
    }
  }

  // a[k][i] = sum_t spectrum[t][k] * g[t][i]; the parameter gradients then
  // contract a with the per-bin response derivatives.
  Matrix a(n, m);
  for (int t = 0; t < t_frames; ++t) {
    for (int k = 0; k < n; ++k) {
      double s = spectrum.values.At(t, k);
      if (s == 0.0) continue;
      for (int i = 0; i < m; ++i) a.At(k, i) += s * g.At(t, i);
    }
  }

  ParamGradients out;
  out.d_alpha.assign(m, 0.0);
  out.d_beta.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < n; ++k) {
      double da, db;
      ResponseGradient(params.shape, params.alphas[i], params.betas[i],
                       static_cast<double>(k), &da, &db);
      out.d_alpha[i] += a.At(k, i) * da;
      out.d_beta[i] += a.At(k, i) * db;
    }
  }
  for (int i = 0; i < m; ++i) {
    if (!std::isfinite(out.d_alpha[i]) || !std::isfinite(out.d_beta[i]))
      throw InternalError("non-finite filterbank gradient");
  }
  return out;
}

double MelFromHz(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double HzFromMel(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

double HzFromBin(double bin, int n_bins, int sample_rate) {
  return bin * (0.5 * sample_rate) / static_cast<double>(n_bins - 1);
}

double BinFromHz(double hz, int n_bins, int sample_rate) {
  return hz / (0.5 * sample_rate) * static_cast<double>(n_bins - 1);
}

FilterBankParams MelInit(int n_filters, int n_bins, int sample_rate,
                         FilterShape shape) {
  if (n_filters < 1) throw ConfigError("need at least one filter");
  if (n_bins < 2) throw ConfigError("need at least two bins");
  if (sample_rate <= 0) throw ConfigError("sample rate must be positive");

  double mel_max = MelFromHz(0.5 * sample_rate);
  std::vector<double> bin_points(static_cast<size_t>(n_filters) + 2);
  for (int j = 0; j < n_filters + 2; ++j) {
    double mel = mel_max * static_cast<double>(j) / (n_filters + 1);
    bin_points[j] = BinFromHz(HzFromMel(mel), n_bins, sample_rate);
  }

  FilterBankParams params;
  params.shape = shape;
  params.n_bins = n_bins;
  params.alphas.resize(static_cast<size_t>(n_filters));
  params.betas.resize(static_cast<size_t>(n_filters));
  for (int i = 0; i < n_filters; ++i) {
    double base = bin_points[i + 2] - bin_points[i];
    if (base < kBetaMin)
      throw ConfigError("too many filters for the bin count: base width below floor");
    params.alphas[i] = bin_points[i + 1];
    params.betas[i] = shape == FilterShape::kTriangle ? base : base / 4.0;
    if (params.betas[i] < kBetaMin)
      throw ConfigError("too many filters for the bin count: beta below floor");
  }
  params.Validate();
  return params;
}

FilterBankParams ProjectParams(const FilterBankParams& params) {
  FilterBankParams out = params;
  double max_alpha = static_cast<double>(params.n_bins - 1);
  for (size_t i = 0; i < out.alphas.size(); ++i) {
    if (out.betas[i] < kBetaMin) out.betas[i] = kBetaMin;
    if (out.alphas[i] < 0.0) out.alphas[i] = 0.0;
    if (out.alphas[i] > max_alpha) out.alphas[i] = max_alpha;
  }
  return out;
}

std::string FilterBankParamsToJson(const FilterBankParams& params) {
  nlohmann::json j;
  j["shape"] = ToString(params.shape);
  j["n_bins"] = params.n_bins;
  j["n_filters"] = params.NumFilters();
  j["alphas"] = params.alphas;
  j["betas"] = params.betas;
  return j.dump(2);
}

FilterBankParams FilterBankParamsFromJson(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  FilterBankParams params;
  params.shape = FilterShapeFromString(j.at("shape").get<std::string>());
  params.n_bins = j.at("n_bins").get<int>();
  params.alphas = j.at("alphas").get<std::vector<double>>();
  params.betas = j.at("betas").get<std::vector<double>>();
  if (j.contains("n_filters") && j["n_filters"].get<int>() != params.NumFilters())
    throw ConfigError("n_filters does not match the alphas array");
  params.Validate();
  return params;
}

void WriteFeatureFile(const FeatureMatrix& features, const StftConfig& config,
                      const std::string& path) {
  WriteMatrixFile(features.values, config, path);
}

void WriteFilterParamsCsv(const FilterBankParams& params, int sample_rate,
                          const std::string& path, const std::string& config_hash) {
  params.Validate();
  FilterBankParams reference =
      MelInit(params.NumFilters(), params.n_bins, sample_rate, params.shape);
  double bin_hz = HzFromBin(1.0, params.n_bins, sample_rate);

  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open filter CSV for writing: " + path);
  os << "# config_hash " << config_hash << "\n";
  os << "filter_index,alpha_bins,beta_bins,alpha_hz,bandwidth_hz,"
        "mel_ref_alpha_bins,mel_ref_beta_bins,mel_ref_alpha_hz,"
        "mel_ref_bandwidth_hz\n";
  os.precision(17);
  for (int i = 0; i < params.NumFilters(); ++i) {
    os << i << "," << params.alphas[i] << "," << params.betas[i] << ","
       << HzFromBin(params.alphas[i], params.n_bins, sample_rate) << ","
       << params.betas[i] * bin_hz << "," << reference.alphas[i] << ","
       << reference.betas[i] << ","
       << HzFromBin(reference.alphas[i], params.n_bins, sample_rate) << ","
       << reference.betas[i] * bin_hz << "\n";
  }
}

}  // namespace lff
