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

#include "addtree/boost.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "addtree/error.hpp"
#include "addtree/kernels.hpp"
#include "addtree/random.hpp"

namespace addtree {

Ensemble::Ensemble(std::vector<std::string> feature_names, double base_score, Link link,
                   double learning_rate, std::vector<Tree> trees, std::vector<int> monotone)
    : feature_names_(std::move(feature_names)),
      base_score_(base_score),
      link_(link),
      learning_rate_(learning_rate),
      trees_(std::move(trees)),
      monotone_(std::move(monotone)) {
  if (!std::isfinite(base_score_)) throw InvalidArgument("base_score must be finite");
  if (!(learning_rate_ > 0.0 && learning_rate_ <= 1.0)) {
    throw InvalidArgument("learning_rate must lie in (0, 1]");
  }
  if (!monotone_.empty() && monotone_.size() != feature_names_.size()) {
    throw InvalidArgument("monotone signs must match the feature count");
  }
  for (const Tree& tree : trees_) {
    for (int f : tree.features_used()) {
      if (static_cast<std::size_t>(f) >= feature_names_.size()) {
        throw FormatError("tree splits on feature " + std::to_string(f) + " but the model has " +
                          std::to_string(feature_names_.size()) + " features");
      }
    }
  }
}

double Ensemble::margin(std::span<const double> x) const {
  double m = base_score_;
  for (const Tree& tree : trees_) m += tree.predict(x);
  return m;
}

void Ensemble::margins(std::span<const double> columns, std::size_t n_rows,
                       std::span<double> out) const {
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n_rows), base_score_);
  for (const Tree& tree : trees_) kernels::accumulate_tree(tree.flat(), columns, n_rows, out);
}

std::vector<double> Ensemble::predict(const Dataset& data, bool output_margin) const {
  if (data.n_features() != n_features()) {
    throw InvalidArgument("data has " + std::to_string(data.n_features()) +
                          " columns, model expects " + std::to_string(n_features()));
  }
  std::vector<double> out(data.n_rows());
  margins(data.values(), data.n_rows(), out);
  if (link_ == Link::log && !output_margin) {
    for (double& v : out) v = std::exp(v);
  }
  return out;
}

Ensemble Ensemble::truncated(std::size_t n_trees) const {
  std::vector<Tree> kept(trees_.begin(),
                         trees_.begin() + static_cast<std::ptrdiff_t>(std::min(n_trees, trees_.size())));
  return Ensemble(feature_names_, base_score_, link_, learning_rate_, std::move(kept), monotone_);
}

void validate_interaction_groups(const std::vector<std::vector<int>>& groups,
                                 std::size_t n_features) {
  std::vector<int> owner(n_features, -1);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw InvalidArgument("interaction group " + std::to_string(g) + " is empty");
    for (int f : groups[g]) {
      if (f < 0 || static_cast<std::size_t>(f) >= n_features) {
        throw InvalidArgument("interaction group refers to feature index " + std::to_string(f) +
                              " but the data has " + std::to_string(n_features) + " features");
      }
      if (owner[f] >= 0) {
        throw InvalidArgument("feature index " + std::to_string(f) +
                              " appears in more than one interaction group");
      }
      owner[f] = static_cast<int>(g);
    }
  }
}

Ensemble fit(const Dataset& data, const BoostParams& params, FitReport* report) {
  if (data.empty()) throw InvalidArgument("cannot train on empty data");
  if (!data.has_response()) throw InvalidArgument("training data has no response");
  if (params.n_rounds <= 0) throw InvalidArgument("n_rounds must be positive");
  if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0)) {
    throw InvalidArgument("learning_rate must lie in (0, 1]");
  }
  if (!(params.reg_lambda >= 0.0)) throw InvalidArgument("reg_lambda must be >= 0");
  validate_interaction_groups(params.interaction_groups, data.n_features());
  check_response(params.objective, data.response());

  const std::size_t n = data.n_rows();
  Dataset train = data;
  Dataset valid;
  const bool early_stopping = params.early_stopping_rounds.has_value();
  if (early_stopping) {
    if (*params.early_stopping_rounds <= 0) {
      throw InvalidArgument("early_stopping_rounds must be positive");
    }
    if (!(params.validation_fraction > 0.0 && params.validation_fraction < 1.0)) {
      throw InvalidArgument("early stopping needs a validation_fraction in (0, 1)");
    }
    const auto n_valid = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(params.validation_fraction * static_cast<double>(n))));
    if (n_valid >= n) throw InvalidArgument("validation split leaves no training rows");
    Rng rng(params.seed);
    auto perm = rng.permutation(n);
    std::vector<std::size_t> valid_rows(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_valid));
    std::vector<std::size_t> train_rows(perm.begin() + static_cast<std::ptrdiff_t>(n_valid), perm.end());
    std::sort(valid_rows.begin(), valid_rows.end());
    std::sort(train_rows.begin(), train_rows.end());
    train = data.select_rows(train_rows);
    valid = data.select_rows(valid_rows);
  }

  const BinnedMatrix bins(train);
  const auto y = train.response();
  const auto w = train.weights();
  const double base = initial_margin(params.objective, y, w);
  std::vector<double> margin(train.n_rows(), base);
  std::vector<double> valid_margin(valid.n_rows(), base);
  std::vector<double> grad(train.n_rows()), hess(train.n_rows());

  FitReport local;
  local.train_history.push_back(mean_deviance(params.objective, y, margin, w));
  std::size_t best_rounds = 0;
  double best_valid = 0.0;
  if (early_stopping) {
    best_valid = mean_deviance(params.objective, valid.response(), valid_margin, valid.weights());
    local.validation_history.push_back(best_valid);
  }

  std::vector<Tree> trees;
  for (int round = 0; round < params.n_rounds; ++round) {
    compute_gradients(params.objective, margin, y, w, grad, hess);
    TreeConstraints constraints = params.constraints;
    constraints.seed = params.constraints.seed + static_cast<std::uint64_t>(round);
    if (!params.interaction_groups.empty()) {
      constraints.allowed_features =
          params.interaction_groups[static_cast<std::size_t>(round) % params.interaction_groups.size()];
    }
    Tree tree = fit_tree(bins, w, grad, hess, constraints, params.reg_lambda)
                    .scaled(params.learning_rate);
    kernels::accumulate_tree(tree.flat(), train.values(), train.n_rows(), margin);
    local.train_history.push_back(mean_deviance(params.objective, y, margin, w));
    trees.push_back(std::move(tree));

    if (early_stopping) {
      kernels::accumulate_tree(trees.back().flat(), valid.values(), valid.n_rows(), valid_margin);
      const double dev =
          mean_deviance(params.objective, valid.response(), valid_margin, valid.weights());
      local.validation_history.push_back(dev);
      if (dev < best_valid) {
        best_valid = dev;
        best_rounds = trees.size();
      } else if (trees.size() - best_rounds >= static_cast<std::size_t>(*params.early_stopping_rounds)) {
        break;
      }
    } else {
      best_rounds = trees.size();
    }
  }
  trees.resize(best_rounds);

  local.rounds_used = best_rounds;
  local.train_deviance = local.train_history[best_rounds];
  if (early_stopping) local.validation_deviance = local.validation_history[best_rounds];
  if (report != nullptr) *report = std::move(local);

  return Ensemble(data.feature_names(), base, link_of(params.objective), params.learning_rate,
                  std::move(trees), params.constraints.monotone);
}

}  // namespace addtree
