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

// Export of dependence curves for plotting: raw curve tables and the
// PD-vs-SHAP presentation with the SHAP series nudged just below the PD.

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "addtree/boost.hpp"
#include "addtree/dataset.hpp"
#include "addtree/explain.hpp"

namespace addtree {

enum class SeriesType { pd, shap };
std::string_view to_string(SeriesType type);

struct PlotRow {
  std::string feature;
  SeriesType type;
  double value;
  double prediction;
};

struct FeaturePlot {
  std::string feature;
  CurveData pd;              // unique-value grid of the sample
  CurveData shap;            // raw phi, row order
  double shift = 0.0;        // added to every exported SHAP value
  double eps = 0.0;          // (PD range) / 40
};

/// The shift puts the mean SHAP value at the first grid value exactly eps
/// below the PD there: shift = PD(v_1) - mean(phi | x = v_1) - eps.
struct PlotExport {
  std::vector<FeaturePlot> features;

  std::vector<PlotRow> rows() const;
};

PlotExport build_plot_export(const Ensemble& ensemble, const Dataset& sample,
                             std::span<const std::size_t> features);

void write_plot_csv(const PlotExport& plot, std::ostream& out);
void write_plot_json(const PlotExport& plot, std::ostream& out);
// One 600x400 panel per feature, stacked vertically, PD and SHAP as two
// point series.
void write_plot_svg(const PlotExport& plot, std::ostream& out);

// Unshifted long-format tables: feature,value,prediction,kind.
void write_curves_csv(std::span<const CurveData> curves, const std::vector<std::string>& names,
                      std::ostream& out);
void write_curves_json(std::span<const CurveData> curves, const std::vector<std::string>& names,
                       std::ostream& out);
// One shap_dependence curve per feature.
std::vector<CurveData> shap_curves(const ShapMatrix& shap, const Dataset& data);

}  // namespace addtree
