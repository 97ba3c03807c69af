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
#include <vector>

namespace addtree {

// Elementwise min(max(x, low), high). Throws InvalidArgument if low > high
// or any input is NaN.
std::vector<double> clip(std::span<const double> x, double low, double high);

// Natural log, or log1p when `plus_one` is set. Throws DataError naming the
// first index outside the domain.
std::vector<double> log_transform(std::span<const double> x, bool plus_one = false);

}  // namespace addtree
