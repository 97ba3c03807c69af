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

#include "addtree/tree.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "addtree/error.hpp"

namespace addtree {

Tree::Tree() : nodes_{Node::leaf(0.0, 1.0)} { build_flat(); }

Tree::Tree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw FormatError("tree has no nodes");
  const auto n = static_cast<std::int32_t>(nodes_.size());
  std::vector<int> parents(nodes_.size(), 0);
  for (std::int32_t i = 0; i < n; ++i) {
    const Node& node = nodes_[i];
    if (!(node.cover > 0.0) || !std::isfinite(node.cover)) {
      throw FormatError("node " + std::to_string(i) + " has non-positive cover");
    }
    if (node.is_leaf()) {
      if (!std::isfinite(node.value)) {
        throw FormatError("leaf " + std::to_string(i) + " has a non-finite value");
      }
      continue;
    }
    if (node.left <= 0 || node.left >= n || node.right <= 0 || node.right >= n ||
        node.left == node.right) {
      throw FormatError("node " + std::to_string(i) + " has invalid children");
    }
    if (!std::isfinite(node.threshold)) {
      throw FormatError("node " + std::to_string(i) + " has a non-finite threshold");
    }
    ++parents[node.left];
    ++parents[node.right];
    const double sum = nodes_[node.left].cover + nodes_[node.right].cover;
    if (std::abs(sum - node.cover) > 1e-9 * node.cover) {
      throw FormatError("cover of node " + std::to_string(i) + " is not the sum of its children");
    }
  }
  for (std::int32_t i = 1; i < n; ++i) {
    if (parents[i] != 1) {
      throw FormatError("node " + std::to_string(i) + " does not have exactly one parent");
    }
  }
  if (parents[0] != 0) throw FormatError("root node has a parent");

  // One parent per non-root node leaves cycles only in components detached
  // from the root; a reachability walk rules those out and yields the depth.
  std::vector<std::pair<std::int32_t, std::size_t>> stack{{0, 0}};
  std::size_t reached = 0;
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    ++reached;
    depth_ = std::max(depth_, d);
    if (!nodes_[i].is_leaf()) {
      stack.emplace_back(nodes_[i].left, d + 1);
      stack.emplace_back(nodes_[i].right, d + 1);
    }
  }
  if (reached != nodes_.size()) throw FormatError("tree has nodes unreachable from the root");
  build_flat();
}

void Tree::build_flat() {
  const std::size_t n = nodes_.size();
  flat_feature_.resize(n);
  flat_threshold_.resize(n);
  flat_left_.resize(n);
  flat_right_.resize(n);
  flat_value_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Node& node = nodes_[i];
    if (node.is_leaf()) {
      flat_feature_[i] = 0;
      flat_threshold_[i] = 0.0;
      flat_left_[i] = static_cast<std::int64_t>(i);
      flat_right_[i] = static_cast<std::int64_t>(i);
      flat_value_[i] = node.value;
    } else {
      flat_feature_[i] = node.feature;
      flat_threshold_[i] = node.threshold;
      flat_left_[i] = node.left;
      flat_right_[i] = node.right;
      flat_value_[i] = 0.0;
    }
  }
}

kernels::FlatTreeView Tree::flat() const {
  return {flat_feature_.data(), flat_threshold_.data(), flat_left_.data(),
          flat_right_.data(),   flat_value_.data(),     depth_};
}

double Tree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const Node& node = nodes_[i];
    i = static_cast<std::size_t>(x[node.feature] < node.threshold ? node.left : node.right);
  }
  return nodes_[i].value;
}

std::set<int> Tree::features_used() const {
  std::set<int> out;
  for (const Node& node : nodes_) {
    if (!node.is_leaf()) out.insert(node.feature);
  }
  return out;
}

Tree Tree::scaled(double factor) const {
  auto nodes = nodes_;
  for (Node& node : nodes) {
    if (node.is_leaf()) node.value *= factor;
  }
  return Tree(std::move(nodes));
}

}  // namespace addtree
