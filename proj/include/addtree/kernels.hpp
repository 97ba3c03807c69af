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

#pragma once

// Data-parallel inner loops behind prediction, partial dependence and
// gradient evaluation. Each kernel has a scalar reference implementation and
// optional AVX2 / NEON variants chosen once at runtime. Every variant produces
// bit-identical results to the scalar reference: no contraction into FMA, and
// reductions use a fixed four-lane summation order in all variants.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace addtree::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

/// Branch-free node layout for batch routing. Leaves point to themselves and
/// carry feature 0, so a fixed number of routing steps (the tree depth) lands
/// every row on its leaf.
struct FlatTreeView {
  const std::int64_t* feature;
  const double* threshold;
  const std::int64_t* left;
  const std::int64_t* right;
  const double* value;
  std::size_t depth;
};

struct KernelTable {
  Isa isa;
  // out[i] += value of the leaf row i reaches; `columns` is column-major with
  // n_rows rows.
  void (*accumulate_tree)(const FlatTreeView& tree, const double* columns, std::size_t n_rows,
                          double* out);
  // Sum of values[i] * weights[i], four strided partial sums combined as
  // (s0 + s1) + (s2 + s3).
  double (*weighted_sum)(const double* values, const double* weights, std::size_t n);
  // grad[i] = (margin[i] - y[i]) * w[i], hess[i] = w[i].
  void (*squared_error_gradients)(const double* margin, const double* y, const double* w,
                                  std::size_t n, double* grad, double* hess);
  // out[i] = min(max(x[i], low), high) with the comparison semantics of
  // maxpd/minpd (x > low ? x : low, then t < high ? t : high).
  void (*clip)(const double* x, std::size_t n, double low, double high, double* out);
};

// Kernel set compiled into this binary for `isa`, or nullptr.
const KernelTable* table_for(Isa isa);

// ISAs this binary carries and the CPU supports, scalar first.
std::vector<Isa> available_isas();

// Best available set, selected on first call.
const KernelTable& active();

// Overrides the runtime choice (equivalence tests, benchmarks). Throws
// InvalidArgument if `isa` is unavailable.
void set_active(Isa isa);

// Span conveniences over the active table.
inline void accumulate_tree(const FlatTreeView& tree, std::span<const double> columns,
                            std::size_t n_rows, std::span<double> out) {
  active().accumulate_tree(tree, columns.data(), n_rows, out.data());
}
inline double weighted_sum(std::span<const double> values, std::span<const double> weights) {
  return active().weighted_sum(values.data(), weights.data(), values.size());
}

}  // namespace addtree::kernels
