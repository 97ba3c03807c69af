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

#include <cmath>
#include <string>

#include "addtree/error.hpp"
#include "addtree/explain.hpp"
#include "addtree/shapley.hpp"

namespace addtree {

Rational shapley_weight_exact(std::size_t p, std::size_t s) {
  if (p == 0 || s >= p) {
    throw InvalidArgument("Shapley weight needs 0 <= s < p (got s=" + std::to_string(s) +
                          ", p=" + std::to_string(p) + ")");
  }
  if (p > kMaxBruteForceFeatures) throw InvalidArgument("Shapley weight needs p <= 20");
  // s! (p-s-1)! / p! = 1 / (p * C(p-1, s))
  std::uint64_t binom = 1;
  for (std::size_t k = 1; k <= s; ++k) binom = binom * (p - 1 - s + k) / k;
  return {1, static_cast<std::uint64_t>(p) * binom};
}

double shapley_weight(std::size_t p, std::size_t s) { return shapley_weight_exact(p, s).to_double(); }

namespace {

double expected_value_below(const Tree& tree, std::size_t i, std::span<const double> x,
                            FeatureMask subset) {
  const Node& node = tree.node(i);
  if (node.is_leaf()) return node.value;
  const auto f = static_cast<std::size_t>(node.feature);
  if (f < 64 && (subset >> f) & 1u) {
    return expected_value_below(tree, x[f] < node.threshold ? node.left : node.right, x, subset);
  }
  const Node& l = tree.node(node.left);
  const Node& r = tree.node(node.right);
  return (l.cover * expected_value_below(tree, node.left, x, subset) +
          r.cover * expected_value_below(tree, node.right, x, subset)) /
         node.cover;
}

}  // namespace

double contribution_path_dependent(const Ensemble& ensemble, std::span<const double> x,
                                   FeatureMask subset) {
  double v = ensemble.base_score();
  for (const Tree& tree : ensemble.trees()) v += expected_value_below(tree, 0, x, subset);
  return v;
}

double contribution_interventional(const Ensemble& ensemble, std::span<const double> x,
                                   FeatureMask subset, const Dataset& background) {
  if (background.empty()) throw InvalidArgument("interventional contribution needs background rows");
  const std::size_t p = ensemble.n_features();
  if (background.n_features() != p) throw InvalidArgument("background column count mismatch");
  std::vector<double> z(p);
  double total = 0.0;
  for (std::size_t b = 0; b < background.n_rows(); ++b) {
    for (std::size_t j = 0; j < p; ++j) {
      z[j] = (j < 64 && (subset >> j) & 1u) ? x[j] : background.at(b, j);
    }
    total += ensemble.margin(z);
  }
  return total / static_cast<double>(background.n_rows());
}

ShapleyResult shap_bruteforce(const Ensemble& ensemble, std::span<const double> x, ShapMode mode,
                              const Dataset* background) {
  const std::size_t p = ensemble.n_features();
  if (p > kMaxBruteForceFeatures) {
    throw InvalidArgument("brute-force SHAP enumerates 2^p subsets; p=" + std::to_string(p) +
                          " exceeds 20");
  }
  if (x.size() != p) throw InvalidArgument("row length does not match the model");
  if (mode == ShapMode::interventional && background == nullptr) {
    throw InvalidArgument("interventional SHAP needs a background dataset");
  }
  ShapleyResult out;
  if (mode == ShapMode::path_dependent) {
    out.phi = shapley_values<double>(
        p, [&](FeatureMask s) { return contribution_path_dependent(ensemble, x, s); }, &out.bias);
  } else {
    out.phi = shapley_values<double>(
        p, [&](FeatureMask s) { return contribution_interventional(ensemble, x, s, *background); },
        &out.bias);
  }
  return out;
}

}  // namespace addtree
