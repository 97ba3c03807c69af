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

// Path-dependent TreeSHAP. For every leaf, the recursion keeps the set of
// distinct features on the path to it together with, per feature, the fraction
// of cover that flows along the path when the feature is unknown ("zero") and
// whether x itself follows the path ("one"). `pweight` holds the permutation
// weights of the subsets of that path, updated incrementally as features are
// added (extend) or removed (unwind).

#include <algorithm>
#include <string>
#include <vector>

#include "addtree/error.hpp"
#include "addtree/explain.hpp"

namespace addtree {
namespace {

struct PathElement {
  int feature;
  double zero_fraction;
  double one_fraction;
  double pweight;
};

void extend_path(PathElement* path, unsigned depth, double zero_fraction, double one_fraction,
                 int feature) {
  path[depth] = {feature, zero_fraction, one_fraction, depth == 0 ? 1.0 : 0.0};
  for (int i = static_cast<int>(depth) - 1; i >= 0; --i) {
    path[i + 1].pweight += one_fraction * path[i].pweight * (i + 1) / static_cast<double>(depth + 1);
    path[i].pweight = zero_fraction * path[i].pweight * (depth - i) / static_cast<double>(depth + 1);
  }
}

void unwind_path(PathElement* path, unsigned depth, unsigned index) {
  const double one_fraction = path[index].one_fraction;
  const double zero_fraction = path[index].zero_fraction;
  double next_one_portion = path[depth].pweight;

  for (int i = static_cast<int>(depth) - 1; i >= 0; --i) {
    if (one_fraction != 0.0) {
      const double tmp = path[i].pweight;
      path[i].pweight = next_one_portion * (depth + 1) / ((i + 1) * one_fraction);
      next_one_portion =
          tmp - path[i].pweight * zero_fraction * (depth - i) / static_cast<double>(depth + 1);
    } else {
      path[i].pweight = path[i].pweight * (depth + 1) / (zero_fraction * (depth - i));
    }
  }
  for (unsigned i = index; i < depth; ++i) {
    path[i].feature = path[i + 1].feature;
    path[i].zero_fraction = path[i + 1].zero_fraction;
    path[i].one_fraction = path[i + 1].one_fraction;
  }
}

// Total permutation weight the path would have with element `index` removed.
double unwound_path_sum(const PathElement* path, unsigned depth, unsigned index) {
  const double one_fraction = path[index].one_fraction;
  const double zero_fraction = path[index].zero_fraction;
  double next_one_portion = path[depth].pweight;
  double total = 0.0;
  for (int i = static_cast<int>(depth) - 1; i >= 0; --i) {
    if (one_fraction != 0.0) {
      const double tmp = next_one_portion * (depth + 1) / ((i + 1) * one_fraction);
      total += tmp;
      next_one_portion =
          path[i].pweight - tmp * zero_fraction * ((depth - i) / static_cast<double>(depth + 1));
    } else if (zero_fraction != 0.0) {
      total += (path[i].pweight / zero_fraction) / ((depth - i) / static_cast<double>(depth + 1));
    }
  }
  return total;
}

void recurse(const Tree& tree, std::span<const double> x, std::span<double> phi,
             std::size_t node_index, unsigned depth, PathElement* parent_path,
             double parent_zero_fraction, double parent_one_fraction, int parent_feature) {
  const Node& node = tree.node(node_index);

  // Each level works on its own copy of the path, stored right after the
  // parent's.
  PathElement* path = parent_path + depth + 1;
  std::copy(parent_path, parent_path + depth + 1, path);
  extend_path(path, depth, parent_zero_fraction, parent_one_fraction, parent_feature);

  if (node.is_leaf()) {
    for (unsigned i = 1; i <= depth; ++i) {
      const double w = unwound_path_sum(path, depth, i);
      const PathElement& el = path[i];
      phi[el.feature] += w * (el.one_fraction - el.zero_fraction) * node.value;
    }
    return;
  }

  const auto hot = static_cast<std::size_t>(x[node.feature] < node.threshold ? node.left : node.right);
  const auto cold = static_cast<std::size_t>(hot == static_cast<std::size_t>(node.left) ? node.right : node.left);
  const double hot_zero_fraction = tree.node(hot).cover / node.cover;
  const double cold_zero_fraction = tree.node(cold).cover / node.cover;
  double incoming_zero_fraction = 1.0;
  double incoming_one_fraction = 1.0;

  // A feature already on the path is removed and re-added with the combined
  // fractions.
  unsigned path_index = 0;
  for (; path_index <= depth; ++path_index) {
    if (path[path_index].feature == node.feature) break;
  }
  if (path_index != depth + 1) {
    incoming_zero_fraction = path[path_index].zero_fraction;
    incoming_one_fraction = path[path_index].one_fraction;
    unwind_path(path, depth, path_index);
    depth -= 1;
  }

  recurse(tree, x, phi, hot, depth + 1, path, hot_zero_fraction * incoming_zero_fraction,
          incoming_one_fraction, node.feature);
  recurse(tree, x, phi, cold, depth + 1, path, cold_zero_fraction * incoming_zero_fraction, 0.0,
          node.feature);
}

double tree_expectation(const Tree& tree, std::size_t i) {
  const Node& node = tree.node(i);
  if (node.is_leaf()) return node.value;
  return (tree.node(node.left).cover * tree_expectation(tree, node.left) +
          tree.node(node.right).cover * tree_expectation(tree, node.right)) /
         node.cover;
}

void tree_shap(const Tree& tree, std::span<const double> x, std::span<double> phi,
               std::vector<PathElement>& scratch) {
  if (tree.node(0).is_leaf()) return;
  const std::size_t max_depth = tree.depth() + 2;
  scratch.assign(max_depth * (max_depth + 1) / 2, PathElement{});
  recurse(tree, x, phi, 0, 0, scratch.data(), 1.0, 1.0, -1);
}

}  // namespace

double expected_margin(const Ensemble& ensemble) {
  double v = ensemble.base_score();
  for (const Tree& tree : ensemble.trees()) v += tree_expectation(tree, 0);
  return v;
}

std::vector<double> treeshap_row(const Ensemble& ensemble, std::span<const double> x) {
  if (x.size() != ensemble.n_features()) throw InvalidArgument("row length does not match the model");
  std::vector<double> phi(ensemble.n_features(), 0.0);
  std::vector<PathElement> scratch;
  for (const Tree& tree : ensemble.trees()) tree_shap(tree, x, phi, scratch);
  return phi;
}

ShapMatrix treeshap(const Ensemble& ensemble, const Dataset& data) {
  if (data.n_features() != ensemble.n_features()) {
    throw InvalidArgument("data has " + std::to_string(data.n_features()) +
                          " columns, model expects " + std::to_string(ensemble.n_features()));
  }
  ShapMatrix out;
  out.n_rows = data.n_rows();
  out.n_features = data.n_features();
  out.values.assign(out.n_rows * out.n_features, 0.0);
  out.bias = expected_margin(ensemble);
  out.feature_names = ensemble.feature_names();

  std::vector<PathElement> scratch;
  std::vector<double> x(out.n_features);
  for (std::size_t i = 0; i < out.n_rows; ++i) {
    for (std::size_t j = 0; j < out.n_features; ++j) x[j] = data.at(i, j);
    std::span<double> phi(out.values.data() + i * out.n_features, out.n_features);
    for (const Tree& tree : ensemble.trees()) tree_shap(tree, x, phi, scratch);
  }
  return out;
}

std::vector<double> ShapMatrix::column(std::size_t j) const {
  std::vector<double> out(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) out[i] = at(i, j);
  return out;
}

}  // namespace addtree
