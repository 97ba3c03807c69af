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

#include <cmath>

#include <gtest/gtest.h>
#include <json.hpp>

#include "addtree/boost.hpp"
#include "addtree/error.hpp"
#include "addtree/explain.hpp"
#include "addtree/random.hpp"
#include "addtree/synth.hpp"
#include "addtree/verify.hpp"
#include "oracles.hpp"

namespace addtree {
namespace {

Dataset synthetic(std::size_t n, std::uint64_t seed, SynthScheme scheme) {
  SynthSpec spec;
  spec.n_rows = n;
  spec.seed = seed;
  spec.scheme = scheme;
  return generate_synthetic(spec);
}

Ensemble train(const Dataset& d, int depth, std::vector<std::vector<int>> groups = {},
               std::vector<int> monotone = {}, int rounds = 60) {
  BoostParams p;
  p.objective = Objective::gamma_log_link;
  p.n_rounds = rounds;
  p.learning_rate = 0.2;
  p.constraints.max_depth = depth;
  p.constraints.monotone = std::move(monotone);
  p.interaction_groups = std::move(groups);
  return fit(d, p);
}

Tree tree_on(std::vector<int> features, Rng& rng, std::size_t depth = 2) {
  return testing::random_tree(rng, std::move(features), depth);
}

TEST(DetectAdditive, Examples) {
  Rng rng(1);
  std::vector<Tree> stumps;
  for (int k = 0; k < 8; ++k) stumps.push_back(tree_on({k % 4}, rng, 1));
  const Ensemble all(testing::feature_names(4), 0, Link::identity, 1, stumps);
  EXPECT_EQ(detect_additive_features(all), (std::set<std::size_t>{0, 1, 2, 3}));

  const Tree t1({Node::split(0, 0, 1, 2, 2), Node::leaf(0, 1), Node::leaf(1, 1)});
  const Tree t2({Node::split(1, 0, 1, 2, 4), Node::leaf(0, 2), Node::split(2, 0, 3, 4, 2),
                 Node::leaf(1, 1), Node::leaf(2, 1)});
  const Ensemble mixed(testing::feature_names(5), 0, Link::identity, 1, {t1, t2});
  EXPECT_EQ(detect_additive_features(mixed), (std::set<std::size_t>{0, 3, 4}));

  const Ensemble empty(testing::feature_names(3), 0, Link::identity, 1, {});
  EXPECT_EQ(detect_additive_features(empty), (std::set<std::size_t>{0, 1, 2}));
}

// Deviation recomputed from the oracle PD and treeshap column.
double oracle_deviation(const Ensemble& e, std::size_t j, const Dataset& d) {
  const ShapMatrix s = treeshap(e, d);
  std::vector<double> r(d.n_rows());
  double c = 0;
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    r[i] = s.at(i, j) - testing::oracle_pd(e, j, d.at(i, j), d, true);
    c += r[i];
  }
  c /= d.n_rows();
  double worst = 0;
  for (double v : r) worst = std::max(worst, std::abs(v - c));
  return worst;
}

TEST(CheckProposition, DepthOneEveryFeature) {
  const Ensemble e = train(synthetic(800, 2, SynthScheme::partly_additive), 1);
  const Dataset eval = synthetic(150, 40, SynthScheme::partly_additive);
  for (std::size_t j = 0; j < 6; ++j) {
    const AdditivityReport r = check_proposition(e, j, eval);
    EXPECT_TRUE(r.is_structurally_additive);
    EXPECT_LE(r.max_abs_deviation, 1e-9);
    EXPECT_TRUE(r.passed());
    EXPECT_LE(oracle_deviation(e, j, eval), 1e-9);
  }
}

TEST(CheckProposition, AbsentFeature) {
  Rng rng(3);
  std::vector<Tree> trees;
  for (int k = 0; k < 6; ++k) trees.push_back(tree_on({0, 1}, rng));
  const Ensemble e(testing::feature_names(3), 0.2, Link::identity, 1, trees);
  const Dataset d = testing::random_rows(4, 3, 40);
  const AdditivityReport r = check_proposition(e, 2, d);
  EXPECT_TRUE(r.is_structurally_additive);
  EXPECT_EQ(r.max_abs_deviation, 0.0);
  EXPECT_EQ(r.scatter, 0.0);
  const double pd = partial_dependence(e, 2, std::vector<double>{0.0}, d).points[0].prediction;
  EXPECT_NEAR(r.shift_constant, -pd, 1e-12);
  const ShapMatrix s = treeshap(e, d);
  for (double v : s.column(2)) EXPECT_EQ(v, 0.0);
}

TEST(CheckProposition, InteractingFeatureShowsScatter) {
  const Dataset d = synthetic(1500, 5, SynthScheme::partly_additive);
  const Ensemble e = train(d, 2, {{0, 1, 2, 3}, {4}, {5}}, {}, 100);
  const Dataset sample = d.select_rows(sample_rows(d.n_rows(), 500, 1));
  double best_scatter = 0;
  for (std::size_t j : {0u, 1u, 2u, 3u}) {
    const AdditivityReport r = check_proposition(e, j, sample);
    if (!r.is_structurally_additive) best_scatter = std::max(best_scatter, r.scatter);
  }
  EXPECT_GT(best_scatter, 1e-6);
  for (std::size_t j : {4u, 5u}) {
    const AdditivityReport r = check_proposition(e, j, sample);
    EXPECT_TRUE(r.is_structurally_additive);
    EXPECT_LE(r.max_abs_deviation, 1e-9);
  }
}

TEST(CheckProposition, Errors) {
  const Ensemble e = testing::random_ensemble(1, 2, 1, 2);
  EXPECT_THROW(check_proposition(e, 0, Dataset(testing::feature_names(2), {}, 0)), InvalidArgument);
  EXPECT_THROW(check_proposition(e, 0, testing::random_rows(1, 2, 5), 0.0), InvalidArgument);
  EXPECT_THROW(check_proposition(e, 7, testing::random_rows(1, 2, 5)), InvalidArgument);
}

TEST(CheckProposition, SoundOnRandomGroupConstrainedEnsembles) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const std::size_t p = 3 + rng.below(5);
    std::vector<std::vector<int>> groups(1);
    for (std::size_t f = 0; f < p; ++f) {
      if (f > 0 && rng.uniform() < 0.5) groups.emplace_back();
      groups.back().push_back(static_cast<int>(f));
    }
    std::vector<Tree> trees;
    const std::size_t k = 1 + rng.below(15);
    for (std::size_t t = 0; t < k; ++t) {
      trees.push_back(tree_on(groups[t % groups.size()], rng, 1 + rng.below(3)));
    }
    const Ensemble e(testing::feature_names(p), rng.normal(), Link::identity, 1, trees);
    const Dataset d = testing::random_rows(seed + 500, p, 60);
    for (std::size_t j : detect_additive_features(e)) {
      EXPECT_LE(check_proposition(e, j, d).max_abs_deviation, 1e-9) << seed;
    }
  }
}

TEST(CheckProposition, CaseWeights) {
  Dataset d = synthetic(600, 8, SynthScheme::additive_only);
  Rng rng(9);
  std::vector<double> w(d.n_rows());
  for (double& v : w) v = rng.uniform(0.1, 5.0);
  d = d.with_weights(w);
  const Ensemble e = train(d, 1);
  const Dataset sample = d.select_rows(sample_rows(d.n_rows(), 200, 2));
  for (std::size_t j = 0; j < 6; ++j) EXPECT_LE(check_proposition(e, j, sample).max_abs_deviation, 1e-9);
}

TEST(Interventional, MarginScalePassesResponseScaleFails) {
  const Dataset d = synthetic(500, 13, SynthScheme::additive_only);
  const Ensemble e = train(d, 1);
  const Dataset sample = d.select_rows(sample_rows(d.n_rows(), 30, 3));
  double worst_margin = 0, worst_response = 0;
  for (std::size_t j = 0; j < 6; ++j) {
    worst_margin = std::max(
        worst_margin,
        check_proposition_interventional(e, j, sample, OutputScale::margin).max_abs_deviation);
    worst_response = std::max(
        worst_response,
        check_proposition_interventional(e, j, sample, OutputScale::response).max_abs_deviation);
  }
  EXPECT_LE(worst_margin, 1e-9);
  EXPECT_GT(worst_response, 1e-3);
}

TEST(LocalAccuracy, Examples) {
  const Dataset d = testing::random_rows(1, 3, 200);
  const Ensemble empty(testing::feature_names(3), 1.25, Link::identity, 1, {});
  EXPECT_EQ(check_local_accuracy(empty, d), 0.0);
  const Tree s({Node::split(1, 0.1, 1, 2, 7), Node::leaf(-0.3, 4), Node::leaf(0.9, 3)});
  const Ensemble stump(testing::feature_names(3), 0.5, Link::identity, 1, {s});
  EXPECT_LE(check_local_accuracy(stump, d), 1e-12);
  const Ensemble deep = train(synthetic(500, 2, SynthScheme::partly_additive), 5);
  EXPECT_LE(check_local_accuracy(deep, synthetic(200, 3, SynthScheme::partly_additive)), 1e-9);
}

TEST(Monotone, DepthOneIncreasingFeature) {
  const Dataset d = synthetic(800, 4, SynthScheme::additive_only);
  const Ensemble e = train(d, 1, {}, {1, 0, 0, 0, 0, 0});
  EXPECT_TRUE(check_monotone_additive(e, 0, d));
  const Ensemble dec = train(d, 1, {}, {0, 0, 0, -1, 0, 0});
  EXPECT_TRUE(check_monotone_additive(dec, 3, d));
  // hour enters as a sine: an unconstrained fit is not monotone
  const Ensemble free = train(d, 1, {}, {0, 0, 0, 0, 0, 0});
  EXPECT_THROW(check_monotone_additive(free, 3, d), InvalidArgument);
}

TEST(Monotone, ConstantModelAndPreconditions) {
  const Dataset d = testing::random_rows(2, 2, 30);
  const Ensemble constant(testing::feature_names(2), 3.0, Link::identity, 1,
                          {Tree({Node::leaf(1.0, 1.0)})}, {1, -1});
  EXPECT_TRUE(check_monotone_additive(constant, 0, d));
  EXPECT_TRUE(check_monotone_additive(constant, 1, d));
  const Tree both({Node::split(0, 0, 1, 2, 4), Node::leaf(0, 2), Node::split(1, 0, 3, 4, 2),
                   Node::leaf(1, 1), Node::leaf(2, 1)});
  const Ensemble interacting(testing::feature_names(2), 0, Link::identity, 1, {both}, {1, 0});
  EXPECT_THROW(check_monotone_additive(interacting, 0, d), InvalidArgument);
  EXPECT_THROW(check_monotone_additive(interacting, 1, d), InvalidArgument);
}

TEST(VerifyModel, SummaryAndJson) {
  const Dataset d = synthetic(600, 6, SynthScheme::partly_additive);
  const Ensemble e = train(d, 2, {{0, 1, 2, 3}, {4}, {5}});
  const VerificationSummary s = verify_model(e, d.select_rows(sample_rows(600, 200, 1)));
  ASSERT_EQ(s.features.size(), 6u);
  EXPECT_TRUE(s.ok());
  EXPECT_TRUE(s.features[4].is_structurally_additive);
  const auto doc = nlohmann::json::parse(to_json(s, e.feature_names()));
  EXPECT_EQ(doc["features"].size(), 6u);
  EXPECT_EQ(doc["features"][4]["feature"], "part_time");
  EXPECT_TRUE(doc["ok"].get<bool>());
  const auto one = nlohmann::json::parse(to_json(s.features[0], e.feature_names()));
  EXPECT_EQ(one["feature"], "log_initial");
}

TEST(VerifyModel, FailsWhenToleranceIsTooTight) {
  const Dataset d = synthetic(300, 6, SynthScheme::additive_only);
  const Ensemble e = train(d, 1);
  const VerificationSummary s = verify_model(e, d, 1e-30);
  bool any_failed = false;
  for (const auto& r : s.features) any_failed |= !r.passed();
  EXPECT_EQ(s.ok(), !any_failed && s.local_accuracy_ok());
  EXPECT_FALSE(s.ok());
}

}  // namespace
}  // namespace addtree
