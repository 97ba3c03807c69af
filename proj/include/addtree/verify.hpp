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
#include <set>
#include <string>
#include <vector>

#include "addtree/boost.hpp"
#include "addtree/dataset.hpp"
#include "addtree/explain.hpp"

namespace addtree {

inline constexpr double kDefaultTolerance = 1e-9;

// Outcome of comparing one feature's SHAP dependence values with its PD curve.
struct AdditivityReport {
  std::size_t feature = 0;
  bool is_structurally_additive = false;
  double shift_constant = 0.0;
  double max_abs_deviation = 0.0;
  double scatter = 0.0;
  double tolerance = kDefaultTolerance;

  // Only structurally additive features are asserted.
  bool passed() const { return !is_structurally_additive || max_abs_deviation <= tolerance; }
};

/// Features j such that every tree splitting on j splits on nothing else.
/// Features no tree uses are included.
std::set<std::size_t> detect_additive_features(const Ensemble& ensemble);

/// Path-dependent TreeSHAP on `data` against the (case-weighted) PD of `data`
/// evaluated at the distinct values of column j. c is the mean of
/// phi_ij - PD_j(x_ij); scatter is the largest phi range among rows sharing an
/// exact feature value.
AdditivityReport check_proposition(const Ensemble& ensemble, std::size_t feature,
                                   const Dataset& data, double tolerance = kDefaultTolerance);

enum class OutputScale { margin, response };

/// Same comparison with brute-force interventional Shapley values using
/// `data` as background and as PD sample. On the response scale both the
/// game and the PD average exp(margin) (log link) instead of the margin.
/// Enumerates 2^p subsets per row, so keep p and n small.
AdditivityReport check_proposition_interventional(const Ensemble& ensemble, std::size_t feature,
                                                  const Dataset& data, OutputScale scale,
                                                  double tolerance = kDefaultTolerance);

// max_i |bias + sum_j phi_ij - margin(x_i)| using treeshap.
double check_local_accuracy(const Ensemble& ensemble, const Dataset& data);

/// Whether the SHAP dependence pairs of `feature`, sorted by feature value,
/// move in the direction of the model's monotone sign for that feature
/// (allowing `slack` of backwards movement). Throws InvalidArgument when the
/// feature has no monotone sign or is not structurally additive.
bool check_monotone_additive(const Ensemble& ensemble, std::size_t feature, const Dataset& data,
                             double slack = 1e-12);

// Everything `addtree verify` reports.
struct VerificationSummary {
  std::vector<AdditivityReport> features;
  double local_accuracy_residual = 0.0;
  double tolerance = kDefaultTolerance;

  bool local_accuracy_ok() const { return local_accuracy_residual <= tolerance; }
  bool ok() const;
};

VerificationSummary verify_model(const Ensemble& ensemble, const Dataset& data,
                                 double tolerance = kDefaultTolerance);

std::string to_json(const AdditivityReport& report, const std::vector<std::string>& names);
std::string to_json(const VerificationSummary& summary, const std::vector<std::string>& names);

}  // namespace addtree
