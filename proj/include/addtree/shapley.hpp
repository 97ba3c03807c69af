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

// Exact Shapley values by subset enumeration.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "addtree/error.hpp"

namespace addtree {

using FeatureMask = std::uint64_t;

inline constexpr std::size_t kMaxBruteForceFeatures = 20;

struct Rational {
  std::uint64_t num;
  std::uint64_t den;

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// s! (p - s - 1)! / p! in lowest terms. Requires s < p <= 20.
Rational shapley_weight_exact(std::size_t p, std::size_t s);
double shapley_weight(std::size_t p, std::size_t s);

/// phi_j = sum over S not containing j of w(|S|) (v(S + j) - v(S)).
///
/// `game(mask)` is evaluated once per subset, masks in increasing integer
/// order, and contributions are accumulated in that same order. `Value` may be
/// an exact rational type; it must be constructible from std::uint64_t.
template <class Value, class Game>
std::vector<Value> shapley_values(std::size_t p, Game&& game, Value* empty_value = nullptr) {
  if (p > kMaxBruteForceFeatures) {
    throw InvalidArgument("brute-force Shapley needs p <= 20");
  }
  const FeatureMask n_subsets = FeatureMask{1} << p;
  std::vector<Value> v;
  v.reserve(n_subsets);
  for (FeatureMask mask = 0; mask < n_subsets; ++mask) v.push_back(game(mask));

  std::vector<Value> weights;
  for (std::size_t s = 0; s < p; ++s) {
    const Rational w = shapley_weight_exact(p, s);
    weights.push_back(Value(w.num) / Value(w.den));
  }

  std::vector<Value> phi(p, Value(std::uint64_t{0}));
  for (FeatureMask mask = 0; mask < n_subsets; ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    for (std::size_t j = 0; j < p; ++j) {
      const FeatureMask bit = FeatureMask{1} << j;
      if (mask & bit) continue;
      phi[j] += weights[size] * (v[mask | bit] - v[mask]);
    }
  }
  if (empty_value != nullptr) *empty_value = v[0];
  return phi;
}

}  // namespace addtree
