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
#include <span>
#include <string>
#include <vector>

#include "addtree/dataset.hpp"
#include "addtree/objective.hpp"
#include "addtree/tree.hpp"

namespace addtree {

/// The fitted model f: margin(x) = base_score + sum_k tree_k(x), prediction
/// = margin or exp(margin) under a log link. Leaf values are stored already
/// shrunk by the learning rate.
class Ensemble {
 public:
  Ensemble() = default;
  Ensemble(std::vector<std::string> feature_names, double base_score, Link link,
           double learning_rate, std::vector<Tree> trees, std::vector<int> monotone = {});

  const std::vector<Tree>& trees() const { return trees_; }
  double base_score() const { return base_score_; }
  Link link() const { return link_; }
  double learning_rate() const { return learning_rate_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  std::size_t n_features() const { return feature_names_.size(); }
  // Monotone signs the model was trained with; empty when unconstrained.
  const std::vector<int>& monotone() const { return monotone_; }
  int monotone_sign(std::size_t feature) const {
    return feature < monotone_.size() ? monotone_[feature] : 0;
  }

  double margin(std::span<const double> x) const;

  // Margins for a column-major block, summed tree by tree in model order.
  void margins(std::span<const double> columns, std::size_t n_rows, std::span<double> out) const;

  std::vector<double> predict(const Dataset& data, bool output_margin = false) const;

  // Keeps the first `n_trees` trees.
  Ensemble truncated(std::size_t n_trees) const;

 private:
  std::vector<std::string> feature_names_;
  double base_score_ = 0.0;
  Link link_ = Link::identity;
  double learning_rate_ = 1.0;
  std::vector<Tree> trees_;
  std::vector<int> monotone_;
};

struct BoostParams {
  Objective objective = Objective::squared_error;
  int n_rounds = 100;
  double learning_rate = 0.1;
  double reg_lambda = 1.0;
  TreeConstraints constraints;
  // Disjoint feature groups; round r grows its tree inside group r mod G.
  std::vector<std::vector<int>> interaction_groups;
  std::optional<int> early_stopping_rounds;
  double validation_fraction = 0.0;
  std::uint64_t seed = 0;
};

struct FitReport {
  std::size_t rounds_used = 0;
  double train_deviance = 0.0;
  std::optional<double> validation_deviance;
  // Training deviance before round 1 and after every round.
  std::vector<double> train_history;
  std::vector<double> validation_history;
};

Ensemble fit(const Dataset& data, const BoostParams& params, FitReport* report = nullptr);

// Throws InvalidArgument unless groups are disjoint, non-empty and index
// existing features.
void validate_interaction_groups(const std::vector<std::vector<int>>& groups,
                                 std::size_t n_features);

}  // namespace addtree
