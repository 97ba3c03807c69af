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

// Reference implementations used only by tests. They share no code with the
// library beyond the model data structures they read.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "addtree/boost.hpp"
#include "addtree/dataset.hpp"
#include "addtree/random.hpp"
#include "addtree/tree.hpp"

namespace addtree::testing {

using Exact = boost::multiprecision::cpp_rational;

inline double oracle_tree_value(const Tree& tree, std::span<const double> x) {
  int i = 0;
  while (!tree.node(i).is_leaf()) {
    const Node& n = tree.node(i);
    i = x[n.feature] < n.threshold ? n.left : n.right;
  }
  return tree.node(i).value;
}

inline double oracle_margin(const Ensemble& e, std::span<const double> x) {
  double m = e.base_score();
  for (const Tree& t : e.trees()) m += oracle_tree_value(t, x);
  return m;
}

inline double oracle_cover_expectation(const Tree& tree, int i, std::span<const double> x,
                                       std::uint64_t mask) {
  const Node& n = tree.node(i);
  if (n.is_leaf()) return n.value;
  if (mask >> n.feature & 1) {
    return oracle_cover_expectation(tree, x[n.feature] < n.threshold ? n.left : n.right, x, mask);
  }
  const Node& l = tree.node(n.left);
  const Node& r = tree.node(n.right);
  return (l.cover * oracle_cover_expectation(tree, n.left, x, mask) +
          r.cover * oracle_cover_expectation(tree, n.right, x, mask)) /
         n.cover;
}

inline double oracle_path_value(const Ensemble& e, std::span<const double> x, std::uint64_t mask) {
  double v = e.base_score();
  for (const Tree& t : e.trees()) v += oracle_cover_expectation(t, 0, x, mask);
  return v;
}

inline Exact factorial(unsigned n) {
  Exact f = 1;
  for (unsigned k = 2; k <= n; ++k) f *= k;
  return f;
}

// s! (p - s - 1)! / p!
inline Exact oracle_weight(unsigned p, unsigned s) {
  return factorial(s) * factorial(p - s - 1) / factorial(p);
}

// Shapley values with exact rational weights and exact rational arithmetic on
// the (exactly representable) double game values.
inline std::vector<Exact> oracle_shapley_exact(unsigned p,
                                               const std::function<double(std::uint64_t)>& v) {
  std::vector<Exact> values(std::size_t{1} << p);
  for (std::uint64_t m = 0; m < values.size(); ++m) values[m] = Exact(v(m));
  std::vector<Exact> phi(p, Exact(0));
  for (unsigned j = 0; j < p; ++j) {
    for (std::uint64_t m = 0; m < values.size(); ++m) {
      if (m >> j & 1) continue;
      const unsigned s = static_cast<unsigned>(__builtin_popcountll(m));
      phi[j] += oracle_weight(p, s) * (values[m | (std::uint64_t{1} << j)] - values[m]);
    }
  }
  return phi;
}

// Same enumeration in double with exact weights rounded once.
inline std::vector<double> oracle_shapley(unsigned p, const std::function<double(std::uint64_t)>& v) {
  std::vector<double> values(std::size_t{1} << p);
  for (std::uint64_t m = 0; m < values.size(); ++m) values[m] = v(m);
  std::vector<double> w(p);
  for (unsigned s = 0; s < p; ++s) w[s] = static_cast<double>(oracle_weight(p, s));
  std::vector<double> phi(p, 0.0);
  for (unsigned j = 0; j < p; ++j) {
    for (std::uint64_t m = 0; m < values.size(); ++m) {
      if (m >> j & 1) continue;
      phi[j] += w[__builtin_popcountll(m)] * (values[m | (std::uint64_t{1} << j)] - values[m]);
    }
  }
  return phi;
}

inline double oracle_pd(const Ensemble& e, std::size_t j, double v, const Dataset& data,
                        bool weighted) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    auto x = data.row(i);
    x[j] = v;
    const double w = weighted ? data.weights()[i] : 1.0;
    num += w * oracle_margin(e, x);
    den += w;
  }
  return num / den;
}

// Feature values and thresholds come from a coarse lattice so rows often tie
// with each other and with thresholds.
inline double lattice(Rng& rng) { return static_cast<double>(rng.below(9)) * 0.25 - 1.0; }

struct RandomTreeBuilder {
  Rng& rng;
  std::vector<int> features;
  std::vector<Node> nodes;

  int build(std::size_t depth) {
    const int index = static_cast<int>(nodes.size());
    nodes.push_back(Node{});
    if (depth == 0 || rng.uniform() < 0.25) {
      nodes[index] = Node::leaf(rng.uniform(-2.0, 2.0), static_cast<double>(1 + rng.below(20)));
      return index;
    }
    const int f = features[rng.below(features.size())];
    const double t = lattice(rng) + 0.125;
    const int l = build(depth - 1);
    const int r = build(depth - 1);
    nodes[index] = Node::split(f, t, l, r, nodes[l].cover + nodes[r].cover);
    return index;
  }
};

inline Tree random_tree(Rng& rng, std::vector<int> features, std::size_t depth) {
  RandomTreeBuilder b{rng, std::move(features), {}};
  b.build(depth);
  return Tree(std::move(b.nodes));
}

inline std::vector<std::string> feature_names(std::size_t p) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
  return names;
}

inline Ensemble random_ensemble(std::uint64_t seed, std::size_t p, std::size_t depth,
                                std::size_t n_trees) {
  Rng rng(seed);
  std::vector<int> all;
  for (std::size_t j = 0; j < p; ++j) all.push_back(static_cast<int>(j));
  std::vector<Tree> trees;
  for (std::size_t k = 0; k < n_trees; ++k) trees.push_back(random_tree(rng, all, depth));
  return Ensemble(feature_names(p), rng.uniform(-1.0, 1.0), Link::identity, 1.0, std::move(trees));
}

inline Dataset random_rows(std::uint64_t seed, std::size_t p, std::size_t n) {
  Rng rng(seed);
  std::vector<double> cols(p * n);
  for (double& v : cols) v = lattice(rng);
  return Dataset(feature_names(p), std::move(cols), n);
}

inline std::filesystem::path temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "addtree_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace addtree::testing
