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

// Compiled with -mavx2 (and without -mfma). Only reached after a runtime
// CPU check, so nothing here may be called from generic code paths.

#include <immintrin.h>

#include "variants.hpp"

namespace addtree::kernels::avx2 {
namespace {

void accumulate_tree(const FlatTreeView& tree, const double* columns, std::size_t n_rows,
                     double* out) {
  const auto* feature = reinterpret_cast<const long long*>(tree.feature);
  const auto* left = reinterpret_cast<const long long*>(tree.left);
  const auto* right = reinterpret_cast<const long long*>(tree.right);
  const __m256i stride = _mm256_set1_epi64x(static_cast<long long>(n_rows));
  const __m256i lane_offsets = _mm256_setr_epi64x(0, 1, 2, 3);

  std::size_t i = 0;
  for (; i + 4 <= n_rows; i += 4) {
    const __m256i rows = _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(i)),
                                          lane_offsets);
    __m256i node = _mm256_setzero_si256();
    for (std::size_t step = 0; step < tree.depth; ++step) {
      const __m256i feat = _mm256_i64gather_epi64(feature, node, 8);
      const __m256d thr = _mm256_i64gather_pd(tree.threshold, node, 8);
      // feature * n_rows + row; both factors fit in 32 bits.
      const __m256i offset = _mm256_add_epi64(_mm256_mul_epu32(feat, stride), rows);
      const __m256d x = _mm256_i64gather_pd(columns, offset, 8);
      const __m256d go_left = _mm256_cmp_pd(x, thr, _CMP_LT_OQ);
      const __m256i l = _mm256_i64gather_epi64(left, node, 8);
      const __m256i r = _mm256_i64gather_epi64(right, node, 8);
      node = _mm256_castpd_si256(_mm256_blendv_pd(_mm256_castsi256_pd(r),
                                                  _mm256_castsi256_pd(l), go_left));
    }
    const __m256d leaf = _mm256_i64gather_pd(tree.value, node, 8);
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), leaf));
  }
  for (; i < n_rows; ++i) {
    std::int64_t node = 0;
    for (std::size_t step = 0; step < tree.depth; ++step) {
      const double x = columns[static_cast<std::size_t>(tree.feature[node]) * n_rows + i];
      node = x < tree.threshold[node] ? tree.left[node] : tree.right[node];
    }
    out[i] += tree.value[node];
  }
}

double weighted_sum(const double* values, const double* weights, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(values + i), _mm256_loadu_pd(weights + i));
    acc = _mm256_add_pd(acc, prod);
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t i = body; i < n; ++i) lane[i - body] += values[i] * weights[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void squared_error_gradients(const double* margin, const double* y, const double* w,
                             std::size_t n, double* grad, double* hess) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d wv = _mm256_loadu_pd(w + i);
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(margin + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(grad + i, _mm256_mul_pd(diff, wv));
    _mm256_storeu_pd(hess + i, wv);
  }
  for (; i < n; ++i) {
    grad[i] = (margin[i] - y[i]) * w[i];
    hess[i] = w[i];
  }
}

void clip(const double* x, std::size_t n, double low, double high, double* out) {
  const __m256d lo = _mm256_set1_pd(low);
  const __m256d hi = _mm256_set1_pd(high);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // maxpd(a, b) = a > b ? a : b; minpd(a, b) = a < b ? a : b.
    const __m256d t = _mm256_max_pd(_mm256_loadu_pd(x + i), lo);
    _mm256_storeu_pd(out + i, _mm256_min_pd(t, hi));
  }
  for (; i < n; ++i) {
    const double t = x[i] > low ? x[i] : low;
    out[i] = t < high ? t : high;
  }
}

}  // namespace

const KernelTable kTable = {Isa::avx2, accumulate_tree, weighted_sum, squared_error_gradients,
                            clip};

}  // namespace addtree::kernels::avx2
