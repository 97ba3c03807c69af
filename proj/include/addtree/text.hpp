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

#include <string>
#include <string_view>
#include <optional>

namespace addtree {

// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

// Parses a full-string decimal number; nullopt on any trailing junk.
std::optional<double> parse_double(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace addtree
