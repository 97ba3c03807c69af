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

#include <algorithm>
#include <string>
#include <vector>

#include "addtree/error.hpp"
#include "addtree/explain.hpp"
#include "addtree/kernels.hpp"

namespace addtree {

std::string_view to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::pd:
      return "pd";
    case CurveKind::ice:
      return "ice";
    case CurveKind::shap_dependence:
      return "shap_dependence";
  }
  return "unknown";
}

std::vector<double> unique_grid(std::span<const double> column) {
  std::vector<double> grid(column.begin(), column.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::vector<double> equispaced_grid(double low, double high, std::size_t k) {
  if (k < 2 || !(low <= high)) throw InvalidArgument("equispaced grid needs k >= 2 and low <= high");
  std::vector<double> grid(k);
  const double step = (high - low) / static_cast<double>(k - 1);
  for (std::size_t i = 0; i < k; ++i) grid[i] = low + step * static_cast<double>(i);
  grid.back() = high;
  return grid;
}

namespace {

void check_feature(const Ensemble& ensemble, std::size_t feature) {
  if (feature >= ensemble.n_features()) {
    throw InvalidArgument("feature index " + std::to_string(feature) + " out of range (model has " +
                          std::to_string(ensemble.n_features()) + " features)");
  }
}

double pd_below(const Tree& tree, std::size_t i, std::size_t feature, double value) {
  const Node& node = tree.node(i);
  if (node.is_leaf()) return node.value;
  if (static_cast<std::size_t>(node.feature) == feature) {
    return pd_below(tree, value < node.threshold ? node.left : node.right, feature, value);
  }
  return (tree.node(node.left).cover * pd_below(tree, node.left, feature, value) +
          tree.node(node.right).cover * pd_below(tree, node.right, feature, value)) /
         node.cover;
}

}  // namespace

CurveData partial_dependence(const Ensemble& ensemble, std::size_t feature,
                             std::span<const double> grid, const Dataset& data, bool weighted) {
  check_feature(ensemble, feature);
  if (grid.empty()) throw InvalidArgument("partial dependence needs a non-empty grid");
  if (data.empty()) throw InvalidArgument("partial dependence needs data rows");
  if (data.n_features() != ensemble.n_features()) {
    throw InvalidArgument("data column count does not match the model");
  }
  const std::size_t n = data.n_rows();
  std::vector<double> columns(data.values().begin(), data.values().end());
  std::vector<double> margins(n);
  const std::vector<double> ones(n, 1.0);
  const auto weights = weighted ? data.weights() : std::span<const double>(ones);
  const double total_weight = kernels::weighted_sum(weights, ones);

  CurveData curve{CurveKind::pd, feature, {}};
  curve.points.reserve(grid.size());
  auto column = columns.begin() + static_cast<std::ptrdiff_t>(feature * n);
  for (double v : grid) {
    std::fill(column, column + static_cast<std::ptrdiff_t>(n), v);
    ensemble.margins(columns, n, margins);
    curve.points.push_back({v, kernels::weighted_sum(margins, weights) / total_weight});
  }
  return curve;
}

CurveData pd_fast_tree(const Ensemble& ensemble, std::size_t feature, std::span<const double> grid) {
  check_feature(ensemble, feature);
  CurveData curve{CurveKind::pd, feature, {}};
  curve.points.reserve(grid.size());
  for (double v : grid) {
    double m = ensemble.base_score();
    for (const Tree& tree : ensemble.trees()) m += pd_below(tree, 0, feature, v);
    curve.points.push_back({v, m});
  }
  return curve;
}

CurveData ice_curve(const Ensemble& ensemble, std::size_t feature, std::span<const double> grid,
                    std::span<const double> x) {
  check_feature(ensemble, feature);
  if (x.size() != ensemble.n_features()) throw InvalidArgument("row length does not match the model");
  std::vector<double> z(x.begin(), x.end());
  CurveData curve{CurveKind::ice, feature, {}};
  curve.points.reserve(grid.size());
  for (double v : grid) {
    z[feature] = v;
    curve.points.push_back({v, ensemble.margin(z)});
  }
  return curve;
}

CurveData shap_dependence(const ShapMatrix& shap, const Dataset& data, std::size_t feature) {
  if (feature >= shap.n_features || data.n_rows() != shap.n_rows) {
    throw InvalidArgument("SHAP matrix and data do not line up");
  }
  CurveData curve{CurveKind::shap_dependence, feature, {}};
  curve.points.reserve(shap.n_rows);
  for (std::size_t i = 0; i < shap.n_rows; ++i) {
    curve.points.push_back({data.at(i, feature), shap.at(i, feature)});
  }
  return curve;
}

}  // namespace addtree
