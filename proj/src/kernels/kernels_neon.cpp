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

// AArch64 variants. NEON has no gather, so tree routing stays on the scalar
// reference; the dense kernels use two float64x2 registers to mirror the
// four-lane reduction order.

#include <arm_neon.h>

#include "variants.hpp"

namespace addtree::kernels::neon {
namespace {

double weighted_sum(const double* values, const double* weights, std::size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(values + i), vld1q_f64(weights + i)));
    acc23 = vaddq_f64(acc23, vmulq_f64(vld1q_f64(values + i + 2), vld1q_f64(weights + i + 2)));
  }
  double lane[4];
  vst1q_f64(lane, acc01);
  vst1q_f64(lane + 2, acc23);
  for (std::size_t i = body; i < n; ++i) lane[i - body] += values[i] * weights[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void squared_error_gradients(const double* margin, const double* y, const double* w,
                             std::size_t n, double* grad, double* hess) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t wv = vld1q_f64(w + i);
    vst1q_f64(grad + i, vmulq_f64(vsubq_f64(vld1q_f64(margin + i), vld1q_f64(y + i)), wv));
    vst1q_f64(hess + i, wv);
  }
  for (; i < n; ++i) {
    grad[i] = (margin[i] - y[i]) * w[i];
    hess[i] = w[i];
  }
}

void clip(const double* x, std::size_t n, double low, double high, double* out) {
  const float64x2_t lo = vdupq_n_f64(low);
  const float64x2_t hi = vdupq_n_f64(high);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    // Select-based to keep the x86 maxpd/minpd semantics.
    const float64x2_t t = vbslq_f64(vcgtq_f64(v, lo), v, lo);
    vst1q_f64(out + i, vbslq_f64(vcltq_f64(t, hi), t, hi));
  }
  for (; i < n; ++i) {
    const double t = x[i] > low ? x[i] : low;
    out[i] = t < high ? t : high;
  }
}

}  // namespace

const KernelTable kTable = {Isa::neon, scalar::accumulate_tree, weighted_sum,
                            squared_error_gradients, clip};

}  // namespace addtree::kernels::neon
