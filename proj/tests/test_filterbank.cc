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
#include "lff/filterbank.h"
#include "oracles.h"

using namespace lff;

namespace {

SpectrumMatrix RandomSpectrum(int frames, int bins, uint64_t seed) {
  SpectrumMatrix spec;
  spec.config.window_len = bins;  // shape-only placeholder config
  spec.config.hop = bins;
  spec.config.n_fft = 2 * bins;
  spec.values = Matrix(frames, bins);
  Rng rng(seed);
  for (double& v : spec.values.data) {
    double u = rng.UniformRange(-1.0, 1.0);
    v = u * u;  // non-negative, power-like
  }
  return spec;
}

// Random parameters for gradient checks; triangle instances are resampled
// until every kink (the peak and both support edges) clears the integer
// lattice by the exclusion margin.
FilterBankParams RandomParams(FilterShape shape, int n_bins, int n_filters,
                              Rng& rng, double kink_margin) {
  FilterBankParams params;
  params.shape = shape;
  params.n_bins = n_bins;
  for (int i = 0; i < n_filters; ++i) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      double alpha = rng.UniformRange(1.0, n_bins - 2.0);
      double beta = rng.UniformRange(1.5, n_bins / 2.0);
      if (shape == FilterShape::kTriangle && kink_margin > 0.0) {
        bool clear = true;
        for (int n = 0; n < n_bins && clear; ++n) {
          double d = std::abs(n - alpha);
          if (d < kink_margin || std::abs(d - 0.5 * beta) < kink_margin)
            clear = false;
        }
        if (!clear) continue;
      }
      params.alphas.push_back(alpha);
      params.betas.push_back(beta);
      break;
    }
    REQUIRE(params.alphas.size() == static_cast<size_t>(i + 1));
  }
  return params;
}

double UpstreamLoss(const SpectrumMatrix& spec, const FilterBankParams& params,
                    const Matrix& upstream, double epsilon) {
  FeatureMatrix out = FilterbankForward(spec, params, epsilon);
  double loss = 0.0;
  for (size_t i = 0; i < out.values.data.size(); ++i)
    loss += out.values.data[i] * upstream.data[i];
  return loss;
}

}  // namespace

TEST_SUITE("learnable_filterbank") {

TEST_CASE("filter responses peak at one on the center") {
  CHECK(FilterResponse(FilterShape::kTriangle, 7.3, 4.0, 7.3) == 1.0);
  CHECK(FilterResponse(FilterShape::kBell, 7.3, 4.0, 7.3) == 1.0);
}

TEST_CASE("triangle support is exactly [alpha - beta/2, alpha + beta/2]") {
  double alpha = 20.0, beta = 8.0;
  CHECK(FilterResponse(FilterShape::kTriangle, alpha, beta, alpha + 4.0) == 0.0);
  CHECK(FilterResponse(FilterShape::kTriangle, alpha, beta, alpha - 4.0) == 0.0);
  CHECK(FilterResponse(FilterShape::kTriangle, alpha, beta, alpha + 5.0) == 0.0);
  CHECK(FilterResponse(FilterShape::kTriangle, alpha, beta, alpha + 2.0) ==
        doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("bell response at one sigma from center") {
  CHECK(FilterResponse(FilterShape::kBell, 100.0, 10.0, 110.0) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
}

TEST_CASE("weight matrix column samples the triangle on the bin lattice") {
  FilterBankParams params;
  params.shape = FilterShape::kTriangle;
  params.n_bins = 11;
  params.alphas = {5.0};
  params.betas = {4.0};
  Matrix w = BuildWeightMatrix(params);
  REQUIRE(w.rows == 11);
  REQUIRE(w.cols == 1);
  for (int n = 0; n < 11; ++n) {
    double expect = n == 5 ? 1.0 : (n == 4 || n == 6 ? 0.5 : 0.0);
    CHECK(w.At(n, 0) == doctest::Approx(expect).epsilon(1e-15));
  }
}

TEST_CASE("bell columns sum to the Gaussian integral when support fits") {
  int n_bins = 512;
  for (double beta : {3.0, 8.0, 20.0}) {
    FilterBankParams params;
    params.shape = FilterShape::kBell;
    params.n_bins = n_bins;
    params.alphas = {200.0};
    params.betas = {beta};
    Matrix w = BuildWeightMatrix(params);
    double sum = 0.0;
    for (int n = 0; n < n_bins; ++n) sum += w.At(n, 0);

    // Definite integral over [0, N-1] via erf, and the unbounded closed form.
    double lo = (0.0 - 200.0) / (beta * std::sqrt(2.0));
    double hi = (n_bins - 1.0 - 200.0) / (beta * std::sqrt(2.0));
    double integral = beta * std::sqrt(kPi / 2.0) * (std::erf(hi) - std::erf(lo));
    CHECK(std::abs(sum / integral - 1.0) < 0.01);
    CHECK(std::abs(sum / (beta * std::sqrt(2.0 * kPi)) - 1.0) < 0.01);
  }
}

TEST_CASE("mel-initialized triangles reproduce the independent mel matrix") {
  FilterBankParams params = MelInit(64, 512, 16000, FilterShape::kTriangle);
  Matrix w = BuildWeightMatrix(params);
  Matrix oracle = test::OracleMelWeights(64, 512, 16000);
  REQUIRE(w.rows == oracle.rows);
  REQUIRE(w.cols == oracle.cols);
  for (size_t i = 0; i < w.data.size(); ++i)
    CHECK(std::abs(w.data[i] - oracle.data[i]) < 1e-9);
}

TEST_CASE("forward hits the log floor on an all-zero spectrum") {
  SpectrumMatrix spec = RandomSpectrum(3, 32, 1);
  for (double& v : spec.values.data) v = 0.0;
  FilterBankParams params = MelInit(8, 32, 16000, FilterShape::kTriangle);
  FeatureMatrix out = FilterbankForward(spec, params, 1e-10);
  for (double v : out.values.data)
    CHECK(v == doctest::Approx(10.0 * std::log10(1e-10)).epsilon(1e-12));
}

TEST_CASE("a unit-gain filter passes a single hot bin through the log") {
  SpectrumMatrix spec = RandomSpectrum(1, 64, 2);
  for (double& v : spec.values.data) v = 0.0;
  double value = 3.75;
  spec.values.At(0, 20) = value;

  FilterBankParams params;
  params.shape = FilterShape::kBell;
  params.n_bins = 64;
  params.alphas = {20.0};
  params.betas = {2.0};
  FeatureMatrix out = FilterbankForward(spec, params, 1e-10);
  CHECK(out.values.At(0, 0) ==
        doctest::Approx(10.0 * std::log10(value + 1e-10)).epsilon(1e-12));
}

TEST_CASE("forward matches a naive triple-loop oracle") {
  SpectrumMatrix spec = RandomSpectrum(8, 16, 3);
  Rng rng(4);
  FilterBankParams params = RandomParams(FilterShape::kBell, 16, 4, rng, 0.0);
  double epsilon = 1e-10;
  FeatureMatrix out = FilterbankForward(spec, params, epsilon);

  for (int t = 0; t < 8; ++t) {
    for (int i = 0; i < 4; ++i) {
      double acc = 0.0;
      for (int n = 0; n < 16; ++n) {
        double d = n - params.alphas[i];
        acc += spec.values.At(t, n) *
               std::exp(-d * d / (2.0 * params.betas[i] * params.betas[i]));
      }
      double expect = 10.0 * std::log10(acc + epsilon);
      CHECK(test::RelativeError(out.values.At(t, i), expect) < 1e-9);
    }
  }
}

TEST_CASE("forward rejects mismatched shapes") {
  SpectrumMatrix spec = RandomSpectrum(4, 16, 5);
  FilterBankParams params = MelInit(4, 32, 16000, FilterShape::kTriangle);
  CHECK_THROWS_AS(FilterbankForward(spec, params, 1e-10), ShapeError);
}

TEST_CASE("backward rejects mismatched upstream shapes") {
  SpectrumMatrix spec = RandomSpectrum(4, 16, 66);
  FilterBankParams params = MelInit(3, 16, 16000, FilterShape::kTriangle);
  Matrix bad_rows(3, 3);
  CHECK_THROWS_AS(FilterbankBackward(spec, params, bad_rows, 1e-10), ShapeError);
  Matrix bad_cols(4, 2);
  CHECK_THROWS_AS(FilterbankBackward(spec, params, bad_cols, 1e-10), ShapeError);
}

TEST_CASE("backward is zero for zero upstream gradient") {
  SpectrumMatrix spec = RandomSpectrum(4, 16, 6);
  Rng rng(7);
  FilterBankParams params = RandomParams(FilterShape::kTriangle, 16, 3, rng, 0.0);
  Matrix upstream(4, 3);
  ParamGradients grads = FilterbankBackward(spec, params, upstream, 1e-10);
  for (double g : grads.d_alpha) CHECK(g == 0.0);
  for (double g : grads.d_beta) CHECK(g == 0.0);
}

TEST_CASE("bell center gradient vanishes on a symmetric single-bin spectrum") {
  SpectrumMatrix spec = RandomSpectrum(1, 32, 8);
  for (double& v : spec.values.data) v = 0.0;
  spec.values.At(0, 12) = 2.0;

  FilterBankParams params;
  params.shape = FilterShape::kBell;
  params.n_bins = 32;
  params.alphas = {12.0};
  params.betas = {3.0};
  Matrix upstream(1, 1, 1.0);
  ParamGradients grads = FilterbankBackward(spec, params, upstream, 1e-10);
  CHECK(grads.d_alpha[0] == 0.0);

  // Moving the energy one bin off center breaks the symmetry.
  spec.values.At(0, 12) = 0.0;
  spec.values.At(0, 13) = 2.0;
  ParamGradients off = FilterbankBackward(spec, params, upstream, 1e-10);
  CHECK(off.d_alpha[0] != 0.0);
}

TEST_CASE("analytic gradients match central finite differences") {
  const double step = 1e-4;
  for (FilterShape shape : {FilterShape::kBell, FilterShape::kTriangle}) {
    CAPTURE(static_cast<int>(shape));
    int checked = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
      SpectrumMatrix spec = RandomSpectrum(4, 16, 100 + seed);
      Rng rng(200 + seed);
      FilterBankParams params = RandomParams(shape, 16, 3, rng,
                                             shape == FilterShape::kTriangle ? 0.1
                                                                             : 0.0);
      Matrix upstream(4, 3);
      for (double& u : upstream.data) u = rng.UniformRange(-1.0, 1.0);

      ParamGradients grads = FilterbankBackward(spec, params, upstream, 1e-10);
      for (int i = 0; i < 3; ++i) {
        auto loss_alpha = [&](double a) {
          FilterBankParams p = params;
          p.alphas[static_cast<size_t>(i)] = a;
          return UpstreamLoss(spec, p, upstream, 1e-10);
        };
        auto loss_beta = [&](double b) {
          FilterBankParams p = params;
          p.betas[static_cast<size_t>(i)] = b;
          return UpstreamLoss(spec, p, upstream, 1e-10);
        };
        double fd_alpha = test::CentralDifference(loss_alpha, params.alphas[i], step);
        double fd_beta = test::CentralDifference(loss_beta, params.betas[i], step);
        CHECK(test::RelativeError(grads.d_alpha[i], fd_alpha) < 1e-4);
        CHECK(test::RelativeError(grads.d_beta[i], fd_beta) < 1e-4);
        ++checked;
      }
    }
    CHECK(checked >= 50);
  }
}

TEST_CASE("mel scale maps 1000 Hz to roughly 1000 mel") {
  CHECK(MelFromHz(1000.0) == doctest::Approx(999.99).epsilon(1e-4));
  CHECK(HzFromMel(MelFromHz(1234.5)) == doctest::Approx(1234.5).epsilon(1e-12));
}

TEST_CASE("mel_init yields increasing centers inside the bin range") {
  FilterBankParams params = MelInit(64, 512, 16000, FilterShape::kTriangle);
  REQUIRE(params.NumFilters() == 64);
  for (int i = 1; i < 64; ++i) CHECK(params.alphas[i] > params.alphas[i - 1]);
  for (double b : params.betas) CHECK(b > 0.0);
  CHECK(params.alphas[63] < 511.0);

  FilterBankParams bell = MelInit(64, 512, 16000, FilterShape::kBell);
  for (int i = 0; i < 64; ++i)
    CHECK(bell.betas[i] == doctest::Approx(params.betas[i] / 4.0).epsilon(1e-12));
}

TEST_CASE("mel_init rejects banks too dense for the bin count") {
  CHECK_THROWS_AS(MelInit(200, 64, 16000, FilterShape::kTriangle), ConfigError);
}

TEST_CASE("frozen mel parameters reproduce the independent log-mel pipeline") {
  FilterBankParams params = MelInit(24, 128, 16000, FilterShape::kTriangle);
  for (uint64_t seed = 0; seed < 5; ++seed) {
    SpectrumMatrix spec = RandomSpectrum(6, 128, 300 + seed);
    FeatureMatrix out = FilterbankForward(spec, params, 1e-10);
    Matrix oracle =
        test::OracleLogMelFeatures(spec.values, 24, 128, 16000, 1e-10);
    for (size_t i = 0; i < out.values.data.size(); ++i)
      CHECK(std::abs(out.values.data[i] - oracle.data[i]) < 1e-6);
  }
}

TEST_CASE("project_params clamps and is idempotent") {
  FilterBankParams params;
  params.shape = FilterShape::kTriangle;
  params.n_bins = 64;
  params.alphas = {-4.0, 30.0, 73.0};
  params.betas = {-3.0, 2.0, 0.1};
  FilterBankParams projected = ProjectParams(params);
  CHECK(projected.alphas[0] == 0.0);
  CHECK(projected.alphas[1] == 30.0);
  CHECK(projected.alphas[2] == 63.0);
  CHECK(projected.betas[0] == kBetaMin);
  CHECK(projected.betas[1] == 2.0);
  CHECK(projected.betas[2] == kBetaMin);

  FilterBankParams twice = ProjectParams(projected);
  CHECK(twice.alphas == projected.alphas);
  CHECK(twice.betas == projected.betas);
}

TEST_CASE("responses stay in [0, 1] and hit 1 only at the center") {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    FilterShape shape = trial % 2 ? FilterShape::kTriangle : FilterShape::kBell;
    double alpha = rng.UniformRange(0.0, 63.0);
    double beta = rng.UniformRange(kBetaMin, 40.0);
    double n = rng.UniformRange(-10.0, 73.0);
    double w = FilterResponse(shape, alpha, beta, n);
    CHECK(w >= 0.0);
    CHECK(w <= 1.0);
    if (w == 1.0) CHECK(n == alpha);
  }
}

TEST_CASE("responses are translation covariant") {
  Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    FilterShape shape = trial % 2 ? FilterShape::kTriangle : FilterShape::kBell;
    double alpha = rng.UniformRange(5.0, 50.0);
    double beta = rng.UniformRange(1.0, 20.0);
    double n = rng.UniformRange(0.0, 60.0);
    double delta = rng.UniformRange(-15.0, 15.0);
    double a = FilterResponse(shape, alpha + delta, beta, n + delta);
    double b = FilterResponse(shape, alpha, beta, n);
    CHECK(std::abs(a - b) < 1e-12);
  }
}

TEST_CASE("responses are non-decreasing in the bandwidth") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    FilterShape shape = trial % 2 ? FilterShape::kTriangle : FilterShape::kBell;
    double alpha = rng.UniformRange(5.0, 50.0);
    double n = rng.UniformRange(0.0, 60.0);
    if (n == alpha) continue;
    double prev = -1.0;
    for (double beta = kBetaMin; beta < 40.0; beta += 1.7) {
      double w = FilterResponse(shape, alpha, beta, n);
      CHECK(w >= prev - 1e-15);
      prev = w;
    }
  }
}

TEST_CASE("feature values stay at or above the floor and finite") {
  SpectrumMatrix spec = RandomSpectrum(5, 64, 12);
  FilterBankParams params = MelInit(12, 64, 16000, FilterShape::kBell);
  double epsilon = 1e-10;
  FeatureMatrix out = FilterbankForward(spec, params, epsilon);
  double floor = 10.0 * std::log10(epsilon);
  for (double v : out.values.data) {
    CHECK(std::isfinite(v));
    CHECK(v >= floor - 1e-12);
  }
}

TEST_CASE("feature files share the spectrum binary layout") {
  test::TempDir tmp("featfile");
  SpectrumMatrix spec = RandomSpectrum(5, 64, 13);
  FilterBankParams params = MelInit(12, 64, 16000, FilterShape::kTriangle);
  FeatureMatrix out = FilterbankForward(spec, params, 1e-10);

  StftConfig header;
  header.window_len = 400;
  header.hop = 160;
  header.n_fft = 128;
  WriteFeatureFile(out, header, tmp.Path("f.feat"));
  SpectrumMatrix loaded = ReadSpectrumFile(tmp.Path("f.feat"));
  CHECK(loaded.values.rows == 5);
  CHECK(loaded.values.cols == 12);
  for (size_t i = 0; i < out.values.data.size(); ++i)
    CHECK(loaded.values.data[i] ==
          static_cast<double>(static_cast<float>(out.values.data[i])));
}

TEST_CASE("params serialize to JSON and back") {
  FilterBankParams params = MelInit(6, 64, 16000, FilterShape::kBell);
  std::string text = FilterBankParamsToJson(params);
  FilterBankParams back = FilterBankParamsFromJson(text);
  CHECK(back.shape == params.shape);
  CHECK(back.n_bins == params.n_bins);
  CHECK(back.alphas == params.alphas);
  CHECK(back.betas == params.betas);
}

TEST_CASE("invalid params are rejected") {
  FilterBankParams params = MelInit(4, 64, 16000, FilterShape::kTriangle);
  SUBCASE("beta below floor") {
    params.betas[2] = 0.4;
    CHECK_THROWS_AS(params.Validate(), ConfigError);
  }
  SUBCASE("alpha out of range") {
    params.alphas[0] = 64.0;
    CHECK_THROWS_AS(params.Validate(), ConfigError);
  }
  SUBCASE("length mismatch") {
    params.betas.pop_back();
    CHECK_THROWS_AS(params.Validate(), ConfigError);
  }
}

}  // TEST_SUITE
