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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace addtree {

/// Immutable tabular data: an n x p feature matrix stored column-major,
/// an optional response and strictly positive case weights.
///
/// Construction validates everything downstream code relies on: all values
/// finite, unique feature names, weights > 0 with one per row.
class Dataset {
 public:
  Dataset() = default;

  /// `columns` holds p contiguous columns of `n_rows` values each. Empty
  /// `weights` means unit weights.
  Dataset(std::vector<std::string> feature_names, std::vector<double> columns,
          std::size_t n_rows, std::vector<double> response = {},
          std::vector<double> weights = {});

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_features() const { return names_.size(); }
  bool empty() const { return n_rows_ == 0; }

  const std::vector<std::string>& feature_names() const { return names_; }
  std::optional<std::size_t> find_feature(std::string_view name) const;

  std::span<const double> values() const { return columns_; }
  std::span<const double> column(std::size_t j) const {
    return {columns_.data() + j * n_rows_, n_rows_};
  }
  double at(std::size_t row, std::size_t col) const { return columns_[col * n_rows_ + row]; }
  std::vector<double> row(std::size_t i) const;

  bool has_response() const { return !response_.empty(); }
  std::span<const double> response() const { return response_; }
  std::span<const double> weights() const { return weights_; }
  bool has_unit_weights() const;

  Dataset select_rows(std::span<const std::size_t> rows) const;
  /// Reorders/projects features by name; throws DataError on unknown names.
  Dataset select_features(std::span<const std::string> names) const;
  Dataset with_weights(std::vector<double> weights) const;
  Dataset with_response(std::vector<double> response) const;

 private:
  std::vector<std::string> names_;
  std::vector<double> columns_;
  std::size_t n_rows_ = 0;
  std::vector<double> response_;
  std::vector<double> weights_;
};

/// Reads a comma-separated file with a header row. Every column other than
/// the response and weight columns becomes a feature, in header order.
Dataset load_csv(const std::filesystem::path& path,
                 std::optional<std::string> response_column = std::nullopt,
                 std::optional<std::string> weight_column = std::nullopt);

struct CsvColumns {
  std::string response = "y";
  // Written only when set.
  std::optional<std::string> weight;
};

/// Writes features, then response (if any), then weights (if requested),
/// using shortest round-trip formatting.
void save_csv(const Dataset& data, const std::filesystem::path& path,
              const CsvColumns& columns = {});
std::string to_csv(const Dataset& data, const CsvColumns& columns = {});

/// Rows drawn without replacement; throws InvalidArgument if k > n.
std::vector<std::size_t> sample_rows(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace addtree
