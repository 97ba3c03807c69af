// Copyright 2026 The addtree Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "variants.hpp"

namespace addtree::kernels::scalar {

void accumulate_tree(const FlatTreeView& tree, const double* columns, std::size_t n_rows,
                     double* out) {
  for (std::size_t i = 0; i < n_rows; ++i) {
    std::int64_t node = 0;
    for (std::size_t step = 0; step < tree.depth; ++step) {
      const double x = columns[static_cast<std::size_t>(tree.feature[node]) * n_rows + i];
      node = x < tree.threshold[node] ? tree.left[node] : tree.right[node];
    }
    out[i] += tree.value[node];
  }
}

namespace {

double weighted_sum(const double* values, const double* weights, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) lane[k] += values[i + k] * weights[i + k];
  }
  for (std::size_t i = body; i < n; ++i) lane[i - body] += values[i] * weights[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void squared_error_gradients(const double* margin, const double* y, const double* w,
                             std::size_t n, double* grad, double* hess) {
  for (std::size_t i = 0; i < n; ++i) {
    grad[i] = (margin[i] - y[i]) * w[i];
    hess[i] = w[i];
  }
}

void clip(const double* x, std::size_t n, double low, double high, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t = x[i] > low ? x[i] : low;
    out[i] = t < high ? t : high;
  }
}

}  // namespace

const KernelTable kTable = {Isa::scalar, accumulate_tree, weighted_sum, squared_error_gradients,
                            clip};

}  // namespace addtree::kernels::scalar
