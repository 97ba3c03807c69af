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

#include "addtree/transforms.hpp"

#include <cmath>
#include <string>

#include "addtree/error.hpp"
#include "addtree/kernels.hpp"
#include "addtree/text.hpp"

namespace addtree {

std::vector<double> clip(std::span<const double> x, double low, double high) {
  if (std::isnan(low) || std::isnan(high) || low > high) {
    throw InvalidArgument("clip bounds must satisfy low <= high");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i])) throw InvalidArgument("clip input is NaN at index " + std::to_string(i));
  }
  std::vector<double> out(x.size());
  kernels::active().clip(x.data(), x.size(), low, high, out.data());
  return out;
}

std::vector<double> log_transform(std::span<const double> x, bool plus_one) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool ok = plus_one ? x[i] >= 0.0 : x[i] > 0.0;
    if (!ok) {
      throw DataError(std::string(plus_one ? "log1p" : "log") + " domain error at index " +
                      std::to_string(i) + " (value " + format_double(x[i]) + ")");
    }
    out[i] = plus_one ? std::log1p(x[i]) : std::log(x[i]);
  }
  return out;
}

}  // namespace addtree
