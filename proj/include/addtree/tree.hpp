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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "addtree/dataset.hpp"
#include "addtree/kernels.hpp"

namespace addtree {

/// One node of a regression tree. Internal nodes route a row left iff
/// x[feature] < threshold (ties go right). `cover` is the sum of training case
/// weights that reached the node.
struct Node {
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;
  double cover = 1.0;

  bool is_leaf() const { return feature < 0; }

  static Node leaf(double value, double cover) {
    Node n;
    n.value = value;
    n.cover = cover;
    return n;
  }
  static Node split(std::int32_t feature, double threshold, std::int32_t left,
                    std::int32_t right, double cover) {
    Node n;
    n.feature = feature;
    n.threshold = threshold;
    n.left = left;
    n.right = right;
    n.cover = cover;
    return n;
  }
};

/// Immutable binary regression tree, root at index 0.
class Tree {
 public:
  // Single leaf with value 0.
  Tree();
  // Validates the node array: every non-root node has exactly one parent,
  // indices are in range, covers are positive and additive (relative 1e-9).
  explicit Tree(std::vector<Node> nodes);

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(std::size_t i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t depth() const { return depth_; }

  double predict(std::span<const double> x) const;
  std::set<int> features_used() const;

  // Copy with every leaf value multiplied by `factor`.
  Tree scaled(double factor) const;

  kernels::FlatTreeView flat() const;

 private:
  void build_flat();

  std::vector<Node> nodes_;
  std::size_t depth_ = 0;
  std::vector<std::int64_t> flat_feature_;
  std::vector<double> flat_threshold_;
  std::vector<std::int64_t> flat_left_;
  std::vector<std::int64_t> flat_right_;
  std::vector<double> flat_value_;
};

struct TreeConstraints {
  int max_depth = 6;
  // Interaction-constraint group for this tree; unset means all features.
  std::optional<std::vector<int>> allowed_features;
  // Per-feature sign in {-1, 0, +1}; empty means unconstrained.
  std::vector<int> monotone;
  double min_split_loss = 0.0;
  double min_child_weight = 0.0;
  // Bernoulli keep-probability per candidate feature at each node; 1 = off.
  double colsample_bynode = 1.0;
  std::uint64_t seed = 0;
};

/// Quantile-binned copy of a feature matrix. Feature j has
/// thresholds(j).size() + 1 bins; a value lands in bin b iff it is
/// >= thresholds[b-1] and < thresholds[b], so "bin <= b" is exactly the set
/// routed left by a split at thresholds[b].
class BinnedMatrix {
 public:
  static constexpr std::size_t kDefaultMaxBins = 256;

  explicit BinnedMatrix(const Dataset& data, std::size_t max_bins = kDefaultMaxBins);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_features() const { return thresholds_.size(); }
  const std::vector<double>& thresholds(std::size_t j) const { return thresholds_[j]; }
  std::size_t n_bins(std::size_t j) const { return thresholds_[j].size() + 1; }
  std::span<const std::uint16_t> bins(std::size_t j) const {
    return {bins_.data() + j * n_rows_, n_rows_};
  }

 private:
  std::size_t n_rows_ = 0;
  std::vector<std::vector<double>> thresholds_;
  std::vector<std::uint16_t> bins_;
};

/// Candidate split thresholds for one column: midpoints between consecutive
/// distinct values, thinned to quantiles when there are more than
/// max_bins distinct values.
std::vector<double> quantile_thresholds(std::span<const double> column, std::size_t max_bins);

/// Depth-wise greedy tree on gradient statistics. Gain is
/// 1/2 [GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)], leaf value -G/(H+l).
Tree fit_tree(const BinnedMatrix& bins, std::span<const double> weights,
              std::span<const double> gradients, std::span<const double> hessians,
              const TreeConstraints& constraints, double reg_lambda);

Tree fit_tree(const Dataset& data, std::span<const double> gradients,
              std::span<const double> hessians, const TreeConstraints& constraints,
              double reg_lambda);

}  // namespace addtree
