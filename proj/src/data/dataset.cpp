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

#include "addtree/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "addtree/error.hpp"
#include "addtree/random.hpp"
#include "addtree/text.hpp"

namespace addtree {

Dataset::Dataset(std::vector<std::string> feature_names, std::vector<double> columns,
                 std::size_t n_rows, std::vector<double> response, std::vector<double> weights)
    : names_(std::move(feature_names)),
      columns_(std::move(columns)),
      n_rows_(n_rows),
      response_(std::move(response)),
      weights_(std::move(weights)) {
  if (columns_.size() != names_.size() * n_rows_) {
    throw DataError("feature matrix has " + std::to_string(columns_.size()) +
                    " values, expected " + std::to_string(names_.size()) + " x " +
                    std::to_string(n_rows_));
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : names_) {
    if (!seen.insert(name).second) throw DataError("duplicate feature name '" + name + "'");
  }
  for (std::size_t j = 0; j < names_.size(); ++j) {
    for (std::size_t i = 0; i < n_rows_; ++i) {
      if (!std::isfinite(columns_[j * n_rows_ + i])) {
        throw DataError("non-finite value in feature '" + names_[j] + "' at row " +
                        std::to_string(i + 1));
      }
    }
  }
  if (!response_.empty()) {
    if (response_.size() != n_rows_) throw DataError("response length does not match rows");
    for (std::size_t i = 0; i < n_rows_; ++i) {
      if (!std::isfinite(response_[i])) {
        throw DataError("non-finite response at row " + std::to_string(i + 1));
      }
    }
  }
  if (weights_.empty()) {
    weights_.assign(n_rows_, 1.0);
  } else {
    if (weights_.size() != n_rows_) throw DataError("weights length does not match rows");
    for (std::size_t i = 0; i < n_rows_; ++i) {
      if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
        throw DataError("weight at row " + std::to_string(i + 1) + " is not a positive number");
      }
    }
  }
}

std::optional<std::size_t> Dataset::find_feature(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::vector<double> Dataset::row(std::size_t i) const {
  std::vector<double> out(names_.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = at(i, j);
  return out;
}

bool Dataset::has_unit_weights() const {
  return std::all_of(weights_.begin(), weights_.end(), [](double w) { return w == 1.0; });
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  std::vector<double> cols(rows.size() * names_.size());
  std::vector<double> response;
  std::vector<double> weights(rows.size());
  for (std::size_t j = 0; j < names_.size(); ++j) {
    const auto src = column(j);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (rows[k] >= n_rows_) throw InvalidArgument("row index out of range");
      cols[j * rows.size() + k] = src[rows[k]];
    }
  }
  if (has_response()) {
    response.resize(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) response[k] = response_[rows[k]];
  }
  for (std::size_t k = 0; k < rows.size(); ++k) weights[k] = weights_[rows[k]];
  return Dataset(names_, std::move(cols), rows.size(), std::move(response), std::move(weights));
}

Dataset Dataset::select_features(std::span<const std::string> names) const {
  std::vector<double> cols;
  cols.reserve(names.size() * n_rows_);
  for (const auto& name : names) {
    const auto j = find_feature(name);
    if (!j) throw DataError("data has no column named '" + name + "'");
    const auto src = column(*j);
    cols.insert(cols.end(), src.begin(), src.end());
  }
  return Dataset(std::vector<std::string>(names.begin(), names.end()), std::move(cols), n_rows_,
                 response_, weights_);
}

Dataset Dataset::with_weights(std::vector<double> weights) const {
  return Dataset(names_, columns_, n_rows_, response_, std::move(weights));
}

Dataset Dataset::with_response(std::vector<double> response) const {
  return Dataset(names_, columns_, n_rows_, std::move(response), weights_);
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string unquote(std::string_view cell) {
  cell = trim(cell);
  if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') {
    cell = cell.substr(1, cell.size() - 2);
  }
  return std::string(cell);
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, std::optional<std::string> response_column,
                 std::optional<std::string> weight_column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line) || trim(line).empty()) {
    throw FormatError("'" + path.string() + "' has no header row");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  std::vector<std::string> header;
  for (auto cell : split_commas(line)) header.push_back(unquote(cell));
  {
    std::unordered_set<std::string> seen;
    for (const auto& name : header) {
      if (!seen.insert(name).second) throw DataError("duplicate column name '" + name + "'");
    }
  }

  auto locate = [&](const std::optional<std::string>& name) -> std::optional<std::size_t> {
    if (!name) return std::nullopt;
    auto it = std::find(header.begin(), header.end(), *name);
    if (it == header.end()) throw DataError("no column named '" + *name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto response_idx = locate(response_column);
  const auto weight_idx = locate(weight_column);

  std::vector<std::size_t> feature_idx;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == response_idx || c == weight_idx) continue;
    feature_idx.push_back(c);
    names.push_back(header[c]);
  }

  std::vector<std::vector<double>> cols(header.size());
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split_commas(line);
    if (cells.size() != header.size()) {
      throw DataError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                      " cells, header has " + std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto value = parse_double(cells[c]);
      if (!value) {
        throw DataError("non-numeric value '" + std::string(trim(cells[c])) + "' at row " +
                        std::to_string(row) + ", column " + header[c]);
      }
      if (!std::isfinite(*value)) {
        throw DataError("missing or non-finite value at row " + std::to_string(row) +
                        ", column " + header[c]);
      }
      cols[c].push_back(*value);
    }
  }

  std::vector<double> features;
  features.reserve(feature_idx.size() * row);
  for (auto c : feature_idx) features.insert(features.end(), cols[c].begin(), cols[c].end());
  std::vector<double> response = response_idx ? std::move(cols[*response_idx]) : std::vector<double>{};
  std::vector<double> weights = weight_idx ? std::move(cols[*weight_idx]) : std::vector<double>{};
  return Dataset(std::move(names), std::move(features), row, std::move(response),
                 std::move(weights));
}

std::string to_csv(const Dataset& data, const CsvColumns& columns) {
  std::ostringstream out;
  const auto& names = data.feature_names();
  bool first = true;
  auto sep = [&] {
    if (!first) out << ',';
    first = false;
  };
  for (const auto& name : names) {
    sep();
    out << name;
  }
  if (data.has_response()) {
    sep();
    out << columns.response;
  }
  if (columns.weight) {
    sep();
    out << *columns.weight;
  }
  out << '\n';
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    first = true;
    for (std::size_t j = 0; j < names.size(); ++j) {
      sep();
      out << format_double(data.at(i, j));
    }
    if (data.has_response()) {
      sep();
      out << format_double(data.response()[i]);
    }
    if (columns.weight) {
      sep();
      out << format_double(data.weights()[i]);
    }
    out << '\n';
  }
  return out.str();
}

void save_csv(const Dataset& data, const std::filesystem::path& path, const CsvColumns& columns) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << to_csv(data, columns);
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::vector<std::size_t> sample_rows(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k > n) {
    throw InvalidArgument("cannot sample " + std::to_string(k) + " rows from " +
                          std::to_string(n));
  }
  Rng rng(seed);
  auto perm = rng.permutation(n);
  perm.resize(k);
  return perm;
}

}  // namespace addtree
