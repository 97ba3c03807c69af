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

#include "addtree/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <json.hpp>

#include "addtree/error.hpp"
#include "addtree/shapley.hpp"

namespace addtree {
namespace {

// Shift estimate, deviation and duplicate-value scatter for one feature given
// its SHAP column and a PD curve on the distinct values of the column.
AdditivityReport compare_with_pd(std::size_t feature, std::span<const double> values,
                                 std::span<const double> phi, const CurveData& pd,
                                 bool additive, double tolerance) {
  AdditivityReport report;
  report.feature = feature;
  report.is_structurally_additive = additive;
  report.tolerance = tolerance;

  const std::size_t n = values.size();
  std::vector<double> residual(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = std::lower_bound(pd.points.begin(), pd.points.end(), values[i],
                                     [](const CurvePoint& p, double v) { return p.value < v; });
    if (it == pd.points.end() || it->value != values[i]) {
      throw InvalidArgument("PD grid does not contain every sample value");
    }
    residual[i] = phi[i] - it->prediction;
  }
  // Running mean: exact when every residual is the same.
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += (residual[i] - mean) / static_cast<double>(i + 1);
  report.shift_constant = mean;
  for (double r : residual) {
    report.max_abs_deviation = std::max(report.max_abs_deviation, std::abs(r - report.shift_constant));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start;
    double lo = phi[order[start]], hi = lo;
    while (end < n && values[order[end]] == values[order[start]]) {
      lo = std::min(lo, phi[order[end]]);
      hi = std::max(hi, phi[order[end]]);
      ++end;
    }
    report.scatter = std::max(report.scatter, hi - lo);
    start = end;
  }
  return report;
}

void check_inputs(const Ensemble& ensemble, std::size_t feature, const Dataset& data,
                  double tolerance) {
  if (data.empty()) throw InvalidArgument("verification needs data rows");
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (feature >= ensemble.n_features()) throw InvalidArgument("feature index out of range");
  if (data.n_features() != ensemble.n_features()) {
    throw InvalidArgument("data column count does not match the model");
  }
}

AdditivityReport check_with_shap(const Ensemble& ensemble, std::size_t feature, const Dataset& data,
                                 const ShapMatrix& shap, bool additive, double tolerance) {
  const auto values = data.column(feature);
  const auto grid = unique_grid(values);
  const CurveData pd = partial_dependence(ensemble, feature, grid, data, /*weighted=*/true);
  const auto phi = shap.column(feature);
  return compare_with_pd(feature, values, phi, pd, additive, tolerance);
}

}  // namespace

std::set<std::size_t> detect_additive_features(const Ensemble& ensemble) {
  std::vector<bool> interacts(ensemble.n_features(), false);
  for (const Tree& tree : ensemble.trees()) {
    const auto used = tree.features_used();
    if (used.size() < 2) continue;
    for (int f : used) interacts[static_cast<std::size_t>(f)] = true;
  }
  std::set<std::size_t> out;
  for (std::size_t j = 0; j < interacts.size(); ++j) {
    if (!interacts[j]) out.insert(j);
  }
  return out;
}

AdditivityReport check_proposition(const Ensemble& ensemble, std::size_t feature,
                                   const Dataset& data, double tolerance) {
  check_inputs(ensemble, feature, data, tolerance);
  const ShapMatrix shap = treeshap(ensemble, data);
  return check_with_shap(ensemble, feature, data, shap,
                         detect_additive_features(ensemble).contains(feature), tolerance);
}

AdditivityReport check_proposition_interventional(const Ensemble& ensemble, std::size_t feature,
                                                  const Dataset& data, OutputScale scale,
                                                  double tolerance) {
  check_inputs(ensemble, feature, data, tolerance);
  const std::size_t p = ensemble.n_features();
  const std::size_t n = data.n_rows();
  if (p > kMaxBruteForceFeatures) throw InvalidArgument("brute-force check needs p <= 20");

  std::vector<double> block(n * p);
  std::vector<double> margins(n);
  auto mean_output = [&]() {
    ensemble.margins(block, n, margins);
    double total = 0.0;
    for (double m : margins) total += scale == OutputScale::response ? std::exp(m) : m;
    return total / static_cast<double>(n);
  };

  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = data.row(i);
    auto game = [&](FeatureMask subset) {
      for (std::size_t j = 0; j < p; ++j) {
        const bool fixed = (subset >> j) & 1u;
        for (std::size_t b = 0; b < n; ++b) block[j * n + b] = fixed ? x[j] : data.at(b, j);
      }
      return mean_output();
    };
    phi[i] = shapley_values<double>(p, game)[feature];
  }

  CurveData pd{CurveKind::pd, feature, {}};
  const auto values = data.column(feature);
  std::copy(data.values().begin(), data.values().end(), block.begin());
  for (double v : unique_grid(values)) {
    std::fill(block.begin() + static_cast<std::ptrdiff_t>(feature * n),
              block.begin() + static_cast<std::ptrdiff_t>((feature + 1) * n), v);
    pd.points.push_back({v, mean_output()});
  }
  return compare_with_pd(feature, values, phi, pd,
                         detect_additive_features(ensemble).contains(feature), tolerance);
}

double check_local_accuracy(const Ensemble& ensemble, const Dataset& data) {
  const ShapMatrix shap = treeshap(ensemble, data);
  const auto margins = ensemble.predict(data, /*output_margin=*/true);
  double worst = 0.0;
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    double total = shap.bias;
    for (double v : shap.row(i)) total += v;
    worst = std::max(worst, std::abs(total - margins[i]));
  }
  return worst;
}

bool check_monotone_additive(const Ensemble& ensemble, std::size_t feature, const Dataset& data,
                             double slack) {
  if (feature >= ensemble.n_features()) throw InvalidArgument("feature index out of range");
  const int sign = ensemble.monotone_sign(feature);
  if (sign == 0) {
    throw InvalidArgument("feature '" + ensemble.feature_names()[feature] +
                          "' was not trained with a monotone constraint");
  }
  if (!detect_additive_features(ensemble).contains(feature)) {
    throw InvalidArgument("feature '" + ensemble.feature_names()[feature] +
                          "' is not structurally additive");
  }
  const ShapMatrix shap = treeshap(ensemble, data);
  const auto values = data.column(feature);
  std::vector<std::size_t> order(data.n_rows());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const double step = shap.at(order[k], feature) - shap.at(order[k - 1], feature);
    if (sign * step < -slack) return false;
  }
  return true;
}

bool VerificationSummary::ok() const {
  return local_accuracy_ok() &&
         std::all_of(features.begin(), features.end(), [](const auto& r) { return r.passed(); });
}

VerificationSummary verify_model(const Ensemble& ensemble, const Dataset& data, double tolerance) {
  if (data.empty()) throw InvalidArgument("verification needs data rows");
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  VerificationSummary summary;
  summary.tolerance = tolerance;
  const ShapMatrix shap = treeshap(ensemble, data);
  const auto additive = detect_additive_features(ensemble);
  for (std::size_t j = 0; j < ensemble.n_features(); ++j) {
    check_inputs(ensemble, j, data, tolerance);
    summary.features.push_back(
        check_with_shap(ensemble, j, data, shap, additive.contains(j), tolerance));
  }
  summary.local_accuracy_residual = check_local_accuracy(ensemble, data);
  return summary;
}

namespace {

nlohmann::json report_json(const AdditivityReport& r, const std::vector<std::string>& names) {
  return {{"feature", r.feature < names.size() ? names[r.feature] : std::to_string(r.feature)},
          {"index", r.feature},
          {"is_structurally_additive", r.is_structurally_additive},
          {"shift_constant", r.shift_constant},
          {"max_abs_deviation", r.max_abs_deviation},
          {"scatter", r.scatter},
          {"tolerance", r.tolerance},
          {"asserted", r.is_structurally_additive},
          {"passed", r.passed()}};
}

}  // namespace

std::string to_json(const AdditivityReport& report, const std::vector<std::string>& names) {
  return report_json(report, names).dump(2);
}

std::string to_json(const VerificationSummary& summary, const std::vector<std::string>& names) {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& r : summary.features) features.push_back(report_json(r, names));
  return nlohmann::json{{"features", std::move(features)},
                        {"local_accuracy_residual", summary.local_accuracy_residual},
                        {"tolerance", summary.tolerance},
                        {"ok", summary.ok()}}
      .dump(2);
}

}  // namespace addtree
