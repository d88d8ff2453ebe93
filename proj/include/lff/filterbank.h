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

#ifndef LFF_FILTERBANK_H_
#define LFF_FILTERBANK_H_

#include <optional>
#include <string>
#include <vector>

#include "lff/common.h"
#include "lff/stft.h"

namespace lff {

enum class FilterShape { kTriangle, kBell };

std::string ToString(FilterShape shape);
FilterShape FilterShapeFromString(const std::string& s);

// Bandwidths below this floor collapse the filter onto a single bin and
// blow up the 1/beta terms in the gradients.
constexpr double kBetaMin = 0.5;
constexpr double kDefaultLogEpsilon = 1e-10;

// The learnable state: per-filter center (alpha, fractional bins over
// [0, N-1]) and bandwidth parameter (beta, bins). For triangles beta is the
// full base width; for bells it is the Gaussian sigma.
struct FilterBankParams {
  std::vector<double> alphas;
  std::vector<double> betas;
  FilterShape shape = FilterShape::kTriangle;
  int n_bins = 0;

  int NumFilters() const { return static_cast<int>(alphas.size()); }
  void Validate() const;
};

// T x M dB-scaled filterbank outputs.
struct FeatureMatrix {
  Matrix values;
  std::optional<FilterBankParams> params_snapshot;

  int NumFrames() const { return values.rows; }
  int NumFeatures() const { return values.cols; }
};

struct ParamGradients {
  std::vector<double> d_alpha;
  std::vector<double> d_beta;
};

// Unit-peak response of one filter at (fractional) bin n.
// triangle: max(0, 1 - 2|n - alpha| / beta)
// bell:     exp(-(n - alpha)^2 / (2 beta^2))
double FilterResponse(FilterShape shape, double alpha, double beta, double n);

// N x M matrix whose column i samples filter i over integer bins 0..N-1.
// Always derived from the parameters; never stored as independent state.
Matrix BuildWeightMatrix(const FilterBankParams& params);

// values[t][i] = 10*log10(sum_n spectrum[t][n] * W[n][i] + epsilon).
FeatureMatrix FilterbankForward(const SpectrumMatrix& spectrum,
                                const FilterBankParams& params, double epsilon);

// Exact analytic gradients of sum(upstream .* forward(...)) with respect to
// every alpha_i and beta_i. Triangle kinks (n = alpha and |n - alpha| =
// beta/2) use subgradient 0.
ParamGradients FilterbankBackward(const SpectrumMatrix& spectrum,
                                  const FilterBankParams& params,
                                  const Matrix& upstream_grad, double epsilon);

// Mel-scale initialization: M+2 points equally spaced in mel between 0 Hz and
// Nyquist, mapped back to fractional bins. Filter i centers on point i+1;
// triangle beta is the full base width, bell beta is base/4.
FilterBankParams MelInit(int n_filters, int n_bins, int sample_rate,
                         FilterShape shape);

// Clamps betas to >= kBetaMin and alphas to [0, n_bins-1]. Idempotent.
FilterBankParams ProjectParams(const FilterBankParams& params);

// HTK mel scale.
double MelFromHz(double hz);
double HzFromMel(double mel);

// Linear bin <-> Hz map over the retained one-sided bins: bin 0 is 0 Hz and
// bin N-1 is Nyquist.
double HzFromBin(double bin, int n_bins, int sample_rate);
double BinFromHz(double hz, int n_bins, int sample_rate);

std::string FilterBankParamsToJson(const FilterBankParams& params);
FilterBankParams FilterBankParamsFromJson(const std::string& text);

void WriteFeatureFile(const FeatureMatrix& features, const StftConfig& config,
                      const std::string& path);

// Analysis export: one row per filter with the learned centers/bandwidths in
// bins and Hz alongside the mel-scale reference values for the same M and N.
void WriteFilterParamsCsv(const FilterBankParams& params, int sample_rate,
                          const std::string& path, const std::string& config_hash);

}  // namespace lff

#endif  // LFF_FILTERBANK_H_
