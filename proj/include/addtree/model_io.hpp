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

#include <filesystem>
#include <string>
#include <string_view>

#include "addtree/boost.hpp"

namespace addtree {

// Format tag and version written to every model file. Field names are frozen
// per version; see docs/model_format.md.
inline constexpr std::string_view kModelFormat = "addtree-model";
inline constexpr int kModelFormatVersion = 1;

std::string model_to_json(const Ensemble& ensemble);
// Throws FormatError (malformed, checksum mismatch) or VersionError.
Ensemble model_from_json(std::string_view text);

void save_model(const Ensemble& ensemble, const std::filesystem::path& path);
Ensemble load_model(const std::filesystem::path& path);

}  // namespace addtree
