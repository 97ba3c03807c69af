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

#include <span>
#include <string_view>

namespace addtree {

enum class Objective { squared_error, gamma_log_link };
enum class Link { identity, log };

std::string_view to_string(Objective objective);
std::string_view to_string(Link link);
Objective parse_objective(std::string_view text);
Link parse_link(std::string_view text);
Link link_of(Objective objective);

// Lower clamp on per-row hessians.
inline constexpr double kHessianFloor = 1e-16;

struct GradPair {
  double grad;
  double hess;
};

// Per-row loss as a function of the margin:
//   squared_error   (m - y)^2 / 2
//   gamma_log_link  m + y exp(-m)
double loss(Objective objective, double y, double margin);

// First and second derivative of loss() w.r.t. the margin, unweighted and
// without the hessian floor.
GradPair gradient(Objective objective, double y, double margin);

// Weighted gradients for a batch. Hessians are floored at kHessianFloor * w.
void compute_gradients(Objective objective, std::span<const double> margin,
                       std::span<const double> y, std::span<const double> w,
                       std::span<double> grad, std::span<double> hess);

// Weighted mean deviance: squared error (y - mu)^2, gamma
// 2 [(y - mu)/mu - log(y/mu)].
double mean_deviance(Objective objective, std::span<const double> y,
                     std::span<const double> margin, std::span<const double> w);

// Link-scale weighted mean of the response.
double initial_margin(Objective objective, std::span<const double> y, std::span<const double> w);

// Throws DataError if the response is outside the objective's domain.
void check_response(Objective objective, std::span<const double> y);

}  // namespace addtree
