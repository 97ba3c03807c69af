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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "addtree/boost.hpp"
#include "addtree/dataset.hpp"
#include "addtree/shapley.hpp"

namespace addtree {

/// n x p SHAP values on the margin scale plus the bias phi_o, stored row-major.
struct ShapMatrix {
  std::size_t n_rows = 0;
  std::size_t n_features = 0;
  std::vector<double> values;
  double bias = 0.0;
  std::vector<std::string> feature_names;

  double at(std::size_t i, std::size_t j) const { return values[i * n_features + j]; }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * n_features, n_features};
  }
  std::vector<double> column(std::size_t j) const;
};

struct CurvePoint {
  double value;
  double prediction;
};

enum class CurveKind { pd, ice, shap_dependence };
std::string_view to_string(CurveKind kind);

struct CurveData {
  CurveKind kind = CurveKind::pd;
  std::size_t feature = 0;
  std::vector<CurvePoint> points;
};

enum class ShapMode { path_dependent, interventional };

struct ShapleyResult {
  std::vector<double> phi;
  double bias = 0.0;
};

// v(S) realized by cover-weighted descent: follow x at splits on features in
// S, otherwise average both children by cover. Summed over trees plus
// base_score.
double contribution_path_dependent(const Ensemble& ensemble, std::span<const double> x,
                                   FeatureMask subset);

// Mean over background rows b of margin(z), z = x on `subset` and b elsewhere.
double contribution_interventional(const Ensemble& ensemble, std::span<const double> x,
                                   FeatureMask subset, const Dataset& background);

// Shapley values of one row by full subset enumeration; bias = v(empty set).
ShapleyResult shap_bruteforce(const Ensemble& ensemble, std::span<const double> x, ShapMode mode,
                              const Dataset* background = nullptr);

/// Path-dependent TreeSHAP: the polynomial-time extend/unwind path recursion,
/// per tree, accumulated in model order. bias is the cover-weighted expected
/// margin.
ShapMatrix treeshap(const Ensemble& ensemble, const Dataset& data);
std::vector<double> treeshap_row(const Ensemble& ensemble, std::span<const double> x);
double expected_margin(const Ensemble& ensemble);

// Sorted distinct values.
std::vector<double> unique_grid(std::span<const double> column);
// k equally spaced points from low to high inclusive (k >= 2).
std::vector<double> equispaced_grid(double low, double high, std::size_t k);

/// Empirical PD on the margin scale: for each grid value v, the (weighted)
/// mean margin after overwriting column j of `data` with v.
CurveData partial_dependence(const Ensemble& ensemble, std::size_t feature,
                             std::span<const double> grid, const Dataset& data,
                             bool weighted = false);

/// Cover-weighted recursive PD: follows the grid value at splits on
/// `feature`, averages children by cover elsewhere. Matches the empirical
/// definition on the training data when no split on another feature sits
/// below a split on `feature`.
CurveData pd_fast_tree(const Ensemble& ensemble, std::size_t feature,
                       std::span<const double> grid);

CurveData ice_curve(const Ensemble& ensemble, std::size_t feature, std::span<const double> grid,
                    std::span<const double> x);

// (x_ij, phi_ij) in row order.
CurveData shap_dependence(const ShapMatrix& shap, const Dataset& data, std::size_t feature);

}  // namespace addtree
