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

#include "addtree/report.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <json.hpp>

#include "addtree/error.hpp"
#include "addtree/text.hpp"

namespace addtree {

std::string_view to_string(SeriesType type) { return type == SeriesType::pd ? "PD" : "SHAP"; }

PlotExport build_plot_export(const Ensemble& ensemble, const Dataset& sample,
                             std::span<const std::size_t> features) {
  if (sample.empty()) throw InvalidArgument("plot export needs sample rows");
  const ShapMatrix shap = treeshap(ensemble, sample);
  PlotExport out;
  for (std::size_t j : features) {
    if (j >= ensemble.n_features()) throw InvalidArgument("feature index out of range");
    FeaturePlot plot;
    plot.feature = ensemble.feature_names()[j];
    const auto values = sample.column(j);
    const auto grid = unique_grid(values);
    plot.pd = partial_dependence(ensemble, j, grid, sample, /*weighted=*/true);
    plot.shap = shap_dependence(shap, sample, j);

    const auto [lo, hi] = std::minmax_element(
        plot.pd.points.begin(), plot.pd.points.end(),
        [](const CurvePoint& a, const CurvePoint& b) { return a.prediction < b.prediction; });
    plot.eps = (hi->prediction - lo->prediction) / 40.0;

    const double anchor = grid.front();
    double anchor_sum = 0.0;
    std::size_t anchor_count = 0;
    for (const CurvePoint& p : plot.shap.points) {
      if (p.value == anchor) {
        anchor_sum += p.prediction;
        ++anchor_count;
      }
    }
    plot.shift = plot.pd.points.front().prediction -
                 anchor_sum / static_cast<double>(anchor_count) - plot.eps;
    out.features.push_back(std::move(plot));
  }
  return out;
}

std::vector<PlotRow> PlotExport::rows() const {
  std::vector<PlotRow> out;
  for (const FeaturePlot& f : features) {
    for (const CurvePoint& p : f.pd.points) {
      out.push_back({f.feature, SeriesType::pd, p.value, p.prediction});
    }
    for (const CurvePoint& p : f.shap.points) {
      out.push_back({f.feature, SeriesType::shap, p.value, p.prediction + f.shift});
    }
  }
  return out;
}

void write_plot_csv(const PlotExport& plot, std::ostream& out) {
  out << "feature,type,value,prediction\n";
  for (const PlotRow& row : plot.rows()) {
    out << row.feature << ',' << to_string(row.type) << ',' << format_double(row.value) << ','
        << format_double(row.prediction) << '\n';
  }
}

void write_plot_json(const PlotExport& plot, std::ostream& out) {
  nlohmann::json features = nlohmann::json::array();
  for (const FeaturePlot& f : plot.features) {
    features.push_back({{"feature", f.feature}, {"shift", f.shift}, {"eps", f.eps}});
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const PlotRow& row : plot.rows()) {
    rows.push_back({{"feature", row.feature},
                    {"type", std::string(to_string(row.type))},
                    {"value", row.value},
                    {"prediction", row.prediction}});
  }
  out << nlohmann::json{{"features", std::move(features)}, {"rows", std::move(rows)}}.dump(1)
      << '\n';
}

namespace {

constexpr int kPanelWidth = 600;
constexpr int kPanelHeight = 400;
constexpr int kMargin = 50;

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_xml(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_plot_svg(const PlotExport& plot, std::ostream& out) {
  const auto rows = plot.rows();
  const int height = kPanelHeight * static_cast<int>(std::max<std::size_t>(1, plot.features.size()));
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPanelWidth << "\" height=\""
      << height << "\" viewBox=\"0 0 " << kPanelWidth << ' ' << height << "\">\n";
  for (std::size_t k = 0; k < plot.features.size(); ++k) {
    const FeaturePlot& f = plot.features[k];
    double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
    for (const PlotRow& r : rows) {
      if (r.feature != f.feature) continue;
      x_lo = std::min(x_lo, r.value);
      x_hi = std::max(x_hi, r.value);
      y_lo = std::min(y_lo, r.prediction);
      y_hi = std::max(y_hi, r.prediction);
    }
    if (x_hi == x_lo) { x_lo -= 0.5; x_hi += 0.5; }
    if (y_hi == y_lo) { y_lo -= 0.5; y_hi += 0.5; }
    const double plot_w = kPanelWidth - 2 * kMargin;
    const double plot_h = kPanelHeight - 2 * kMargin;
    auto sx = [&](double v) { return kMargin + (v - x_lo) / (x_hi - x_lo) * plot_w; };
    auto sy = [&](double v) { return kMargin + (y_hi - v) / (y_hi - y_lo) * plot_h; };

    out << "<svg x=\"0\" y=\"" << kPanelHeight * static_cast<int>(k) << "\" width=\"" << kPanelWidth
        << "\" height=\"" << kPanelHeight << "\">\n";
    out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#999\"/>\n";
    out << "<text x=\"" << kPanelWidth / 2 << "\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">"
        << escape_xml(f.feature) << "</text>\n";
    out << "<text x=\"" << kMargin << "\" y=\"" << kPanelHeight - 15 << "\" font-size=\"11\">"
        << fixed(x_lo) << "</text>\n";
    out << "<text x=\"" << kPanelWidth - kMargin << "\" y=\"" << kPanelHeight - 15
        << "\" text-anchor=\"end\" font-size=\"11\">" << fixed(x_hi) << "</text>\n";
    out << "<text x=\"5\" y=\"" << kMargin + 10 << "\" font-size=\"11\">" << fixed(y_hi) << "</text>\n";
    out << "<text x=\"5\" y=\"" << kPanelHeight - kMargin << "\" font-size=\"11\">" << fixed(y_lo)
        << "</text>\n";
    for (SeriesType type : {SeriesType::shap, SeriesType::pd}) {
      const char* color = type == SeriesType::pd ? "#3b528b" : "#5ec962";
      out << "<g class=\"" << to_string(type) << "\" fill=\"" << color << "\" fill-opacity=\"0.8\">\n";
      for (const PlotRow& r : rows) {
        if (r.feature != f.feature || r.type != type) continue;
        out << "<circle cx=\"" << fixed(sx(r.value)) << "\" cy=\"" << fixed(sy(r.prediction))
            << "\" r=\"2\"/>\n";
      }
      out << "</g>\n";
    }
    out << "<text x=\"" << kPanelWidth - kMargin << "\" y=\"" << kMargin - 8
        << "\" text-anchor=\"end\" font-size=\"11\"><tspan fill=\"#3b528b\">PD</tspan> "
           "<tspan fill=\"#5ec962\">SHAP</tspan></text>\n";
    out << "</svg>\n";
  }
  out << "</svg>\n";
}

void write_curves_csv(std::span<const CurveData> curves, const std::vector<std::string>& names,
                      std::ostream& out) {
  out << "feature,value,prediction,kind\n";
  for (const CurveData& c : curves) {
    const std::string& name = names.at(c.feature);
    for (const CurvePoint& p : c.points) {
      out << name << ',' << format_double(p.value) << ',' << format_double(p.prediction) << ','
          << to_string(c.kind) << '\n';
    }
  }
}

void write_curves_json(std::span<const CurveData> curves, const std::vector<std::string>& names,
                       std::ostream& out) {
  nlohmann::json doc = nlohmann::json::array();
  for (const CurveData& c : curves) {
    nlohmann::json points = nlohmann::json::array();
    for (const CurvePoint& p : c.points) points.push_back({p.value, p.prediction});
    doc.push_back({{"feature", names.at(c.feature)},
                   {"kind", std::string(to_string(c.kind))},
                   {"points", std::move(points)}});
  }
  out << doc.dump(1) << '\n';
}

std::vector<CurveData> shap_curves(const ShapMatrix& shap, const Dataset& data) {
  std::vector<CurveData> out;
  for (std::size_t j = 0; j < shap.n_features; ++j) out.push_back(shap_dependence(shap, data, j));
  return out;
}

}  // namespace addtree
