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

#include "lff/loss.h"

#include <cmath>

namespace lff {

namespace {

// Row-normalizes m and returns the original row norms.
std::vector<double> NormalizeRows(Matrix& m) {
  std::vector<double> norms(static_cast<size_t>(m.rows));
  for (int r = 0; r < m.rows; ++r) {
    double sq = 0.0;
    for (int c = 0; c < m.cols; ++c) sq += m.At(r, c) * m.At(r, c);
    double norm = std::sqrt(sq);
    if (norm < 1e-30) norm = 1e-30;
    norms[r] = norm;
    for (int c = 0; c < m.cols; ++c) m.At(r, c) /= norm;
  }
  return norms;
}

}  // namespace

AmSoftmaxResult AmSoftmaxLoss(const Matrix& embeddings, const Matrix& class_weights,
                              const std::vector<int>& labels, double scale,
                              double margin) {
  int batch = embeddings.rows;
  int dim = embeddings.cols;
  int classes = class_weights.rows;
  if (class_weights.cols != dim)
    throw ShapeError("class weight dimension does not match embeddings");
  if (static_cast<int>(labels.size()) != batch)
    throw ShapeError("labels length does not match batch");
  if (scale <= 0.0) throw DomainError("scale must be positive");
  if (margin < 0.0 || margin >= 1.0) throw DomainError("margin must lie in [0, 1)");
  for (int b = 0; b < batch; ++b) {
    if (labels[b] < 0 || labels[b] >= classes)
      throw DomainError("label out of range");
  }

  Matrix e_hat = embeddings;
  Matrix w_hat = class_weights;
  std::vector<double> e_norm = NormalizeRows(e_hat);
  std::vector<double> w_norm = NormalizeRows(w_hat);

  AmSoftmaxResult result;
  result.grad_embeddings = Matrix(batch, dim);
  result.grad_class_weights = Matrix(classes, dim);

  // Gradients with respect to the normalized vectors, accumulated first;
  // the normalization Jacobian (I - u u^T)/|u| is applied afterwards.
  Matrix grad_e_hat(batch, dim);
  Matrix grad_w_hat(classes, dim);

  double total_loss = 0.0;
  std::vector<double> logits(static_cast<size_t>(classes));
  std::vector<double> probs(static_cast<size_t>(classes));
  for (int b = 0; b < batch; ++b) {
    for (int c = 0; c < classes; ++c) {
      double cosv = 0.0;
      for (int d = 0; d < dim; ++d) cosv += e_hat.At(b, d) * w_hat.At(c, d);
      logits[c] = scale * (c == labels[b] ? cosv - margin : cosv);
    }
    double max_logit = logits[0];
    for (int c = 1; c < classes; ++c) max_logit = std::max(max_logit, logits[c]);
    double denom = 0.0;
    for (int c = 0; c < classes; ++c) {
      probs[c] = std::exp(logits[c] - max_logit);
      denom += probs[c];
    }
    for (int c = 0; c < classes; ++c) probs[c] /= denom;
    total_loss += -(logits[labels[b]] - max_logit - std::log(denom));

    // d mean-loss / d logit_c = (p_c - 1[c=y]) / batch; the margin shift has
    // unit derivative so d logit / d cos = scale for every class.
    for (int c = 0; c < classes; ++c) {
      double g = (probs[c] - (c == labels[b] ? 1.0 : 0.0)) / batch * scale;
      if (g == 0.0) continue;
      for (int d = 0; d < dim; ++d) {
        grad_e_hat.At(b, d) += g * w_hat.At(c, d);
        grad_w_hat.At(c, d) += g * e_hat.At(b, d);
      }
    }
  }

  for (int b = 0; b < batch; ++b) {
    double dot = 0.0;
    for (int d = 0; d < dim; ++d) dot += grad_e_hat.At(b, d) * e_hat.At(b, d);
    for (int d = 0; d < dim; ++d) {
      result.grad_embeddings.At(b, d) =
          (grad_e_hat.At(b, d) - dot * e_hat.At(b, d)) / e_norm[b];
    }
  }
  for (int c = 0; c < classes; ++c) {
    double dot = 0.0;
    for (int d = 0; d < dim; ++d) dot += grad_w_hat.At(c, d) * w_hat.At(c, d);
    for (int d = 0; d < dim; ++d) {
      result.grad_class_weights.At(c, d) =
          (grad_w_hat.At(c, d) - dot * w_hat.At(c, d)) / w_norm[c];
    }
  }

  result.loss = total_loss / batch;
  return result;
}

}  // namespace lff
