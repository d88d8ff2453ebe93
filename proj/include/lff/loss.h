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

#ifndef LFF_LOSS_H_
#define LFF_LOSS_H_

#include <vector>

#include "lff/common.h"

namespace lff {

struct AmSoftmaxResult {
  double loss = 0.0;
  Matrix grad_embeddings;     // B x D, gradient of the mean loss
  Matrix grad_class_weights;  // C x D
};

// Additive-margin softmax over cosine logits. Embeddings and class weight
// rows are L2-normalized internally; the margin is subtracted from the
// target-class cosine before scaling. Gradients are exact through the
// normalizations.
AmSoftmaxResult AmSoftmaxLoss(const Matrix& embeddings, const Matrix& class_weights,
                              const std::vector<int>& labels, double scale,
                              double margin);

}  // namespace lff

#endif  // LFF_LOSS_H_
