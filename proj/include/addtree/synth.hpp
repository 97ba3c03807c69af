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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "addtree/dataset.hpp"

namespace addtree {

enum class SynthScheme { additive_only, partly_additive };

std::string_view to_string(SynthScheme scheme);
SynthScheme parse_synth_scheme(std::string_view text);

struct SynthSpec {
  std::size_t n_rows = 1000;
  std::uint64_t seed = 0;
  double noise_sd = 0.3;
  SynthScheme scheme = SynthScheme::additive_only;
};

/// Synthetic claims-like data with six features:
///
///   0 log_initial    log(clip(lognormal(7, 1.2), 1e2, 1e5))  ties at both clip bounds
///   1 log_weekly_pay log(clip(lognormal(6.2, 0.5), 100, 2000))
///   2 log_age        log(uniform integer age in [17, 70])
///   3 hour           uniform integer in [0, 23]
///   4 part_time      Bernoulli(0.1)
///   5 female         Bernoulli(0.3)
///
/// The log-scale margin is
///
///   6 + 0.8 (log_initial - 7) + 0.3 (log_weekly_pay - 6.2) + 0.5 (log_age - 3.6)
///     + 0.4 sin(2 pi hour / 24) + 0.2 part_time + 0.3 female
///
/// and scheme partly_additive adds 0.6 (log_initial - 7) (log_age - 3.6).
/// The response is exp(margin + noise_sd * N(0, 1)).
///
/// Under partly_additive, log_initial and log_age interact; every other
/// feature enters additively under both schemes.
Dataset generate_synthetic(const SynthSpec& spec);

inline constexpr std::array<std::string_view, 6> kSynthFeatureNames = {
    "log_initial", "log_weekly_pay", "log_age", "hour", "part_time", "female"};
inline constexpr std::array<std::size_t, 2> kSynthInteractingFeatures = {0, 2};

// Noise-free margin of one synthetic row, the formula documented above.
double synthetic_margin(std::span<const double> row, SynthScheme scheme);

}  // namespace addtree
