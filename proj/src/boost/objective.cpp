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

#include "addtree/objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "addtree/error.hpp"
#include "addtree/kernels.hpp"

namespace addtree {

std::string_view to_string(Objective objective) {
  return objective == Objective::squared_error ? "squared_error" : "gamma_log_link";
}

std::string_view to_string(Link link) { return link == Link::identity ? "identity" : "log"; }

Objective parse_objective(std::string_view text) {
  if (text == "squared_error" || text == "reg:squarederror") return Objective::squared_error;
  if (text == "gamma_log_link" || text == "gamma" || text == "reg:gamma") {
    return Objective::gamma_log_link;
  }
  throw InvalidArgument("unknown objective '" + std::string(text) + "'");
}

Link parse_link(std::string_view text) {
  if (text == "identity") return Link::identity;
  if (text == "log") return Link::log;
  throw FormatError("unknown link '" + std::string(text) + "'");
}

Link link_of(Objective objective) {
  return objective == Objective::gamma_log_link ? Link::log : Link::identity;
}

double loss(Objective objective, double y, double margin) {
  if (objective == Objective::squared_error) {
    const double r = margin - y;
    return 0.5 * r * r;
  }
  return margin + y * std::exp(-margin);
}

GradPair gradient(Objective objective, double y, double margin) {
  if (objective == Objective::squared_error) return {margin - y, 1.0};
  const double scaled = y * std::exp(-margin);
  return {1.0 - scaled, scaled};
}

void compute_gradients(Objective objective, std::span<const double> margin,
                       std::span<const double> y, std::span<const double> w,
                       std::span<double> grad, std::span<double> hess) {
  const std::size_t n = margin.size();
  if (objective == Objective::squared_error) {
    kernels::active().squared_error_gradients(margin.data(), y.data(), w.data(), n, grad.data(),
                                              hess.data());
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const GradPair gp = gradient(objective, y[i], margin[i]);
    grad[i] = gp.grad * w[i];
    hess[i] = std::max(gp.hess, kHessianFloor) * w[i];
  }
}

double mean_deviance(Objective objective, std::span<const double> y,
                     std::span<const double> margin, std::span<const double> w) {
  std::vector<double> unit(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (objective == Objective::squared_error) {
      const double r = y[i] - margin[i];
      unit[i] = r * r;
    } else {
      // With mu = exp(m): (y - mu)/mu - log(y/mu) = y exp(-m) - 1 - log(y) + m.
      unit[i] = 2.0 * (y[i] * std::exp(-margin[i]) - 1.0 - std::log(y[i]) + margin[i]);
    }
  }
  const double total_weight = kernels::weighted_sum(w, std::vector<double>(w.size(), 1.0));
  return kernels::weighted_sum(unit, w) / total_weight;
}

double initial_margin(Objective objective, std::span<const double> y, std::span<const double> w) {
  const double mean = kernels::weighted_sum(y, w) /
                      kernels::weighted_sum(w, std::vector<double>(w.size(), 1.0));
  return objective == Objective::gamma_log_link ? std::log(mean) : mean;
}

void check_response(Objective objective, std::span<const double> y) {
  if (objective != Objective::gamma_log_link) return;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0)) {
      throw DataError("gamma objective needs a positive response; row " + std::to_string(i + 1) +
                      " has " + std::to_string(y[i]));
    }
  }
}

}  // namespace addtree
