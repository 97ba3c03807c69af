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

#include "addtree/model_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "addtree/error.hpp"

namespace addtree {
namespace {

using json = nlohmann::json;

std::string fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json node_to_json(const Node& node) {
  if (node.is_leaf()) return {{"leaf", node.value}, {"cover", node.cover}};
  return {{"feature", node.feature},
          {"threshold", node.threshold},
          {"left", node.left},
          {"right", node.right},
          {"cover", node.cover}};
}

Node node_from_json(const json& j) {
  if (j.contains("leaf")) return Node::leaf(j.at("leaf").get<double>(), j.at("cover").get<double>());
  return Node::split(j.at("feature").get<std::int32_t>(), j.at("threshold").get<double>(),
                     j.at("left").get<std::int32_t>(), j.at("right").get<std::int32_t>(),
                     j.at("cover").get<double>());
}

json model_body(const Ensemble& ensemble) {
  json trees = json::array();
  for (const Tree& tree : ensemble.trees()) {
    json nodes = json::array();
    for (const Node& node : tree.nodes()) nodes.push_back(node_to_json(node));
    trees.push_back({{"nodes", std::move(nodes)}});
  }
  return {{"feature_names", ensemble.feature_names()},
          {"base_score", ensemble.base_score()},
          {"link", std::string(to_string(ensemble.link()))},
          {"learning_rate", ensemble.learning_rate()},
          {"monotone", ensemble.monotone()},
          {"trees", std::move(trees)}};
}

}  // namespace

std::string model_to_json(const Ensemble& ensemble) {
  const json body = model_body(ensemble);
  json doc = {{"format", std::string(kModelFormat)},
              {"version", kModelFormatVersion},
              {"model", body},
              {"checksum", "fnv1a64:" + fnv1a64(body.dump())}};
  return doc.dump(1) + "\n";
}

Ensemble model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed model file: ") + e.what());
  }
  try {
    if (!doc.is_object() || doc.value("format", "") != kModelFormat) {
      throw FormatError("not an addtree model file");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw VersionError("model format version " + std::to_string(version) +
                         " is not supported (this build reads version " +
                         std::to_string(kModelFormatVersion) + ")");
    }
    const json& body = doc.at("model");
    // A file without a checksum is accepted as hand-authored.
    if (doc.contains("checksum")) {
      const std::string expected = "fnv1a64:" + fnv1a64(body.dump());
      if (doc.at("checksum").get<std::string>() != expected) {
        throw FormatError("model checksum mismatch (file edited or corrupted)");
      }
    }
    std::vector<Tree> trees;
    for (const json& t : body.at("trees")) {
      std::vector<Node> nodes;
      for (const json& n : t.at("nodes")) nodes.push_back(node_from_json(n));
      trees.emplace_back(std::move(nodes));
    }
    return Ensemble(body.at("feature_names").get<std::vector<std::string>>(),
                    body.at("base_score").get<double>(), parse_link(body.at("link").get<std::string>()),
                    body.at("learning_rate").get<double>(), std::move(trees),
                    body.value("monotone", std::vector<int>{}));
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model file: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("invalid model: ") + e.what());
  }
}

void save_model(const Ensemble& ensemble, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << model_to_json(ensemble);
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

Ensemble load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace addtree
