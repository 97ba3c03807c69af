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

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "addtree/boost.hpp"
#include "addtree/dataset.hpp"
#include "addtree/model_io.hpp"
#include "addtree/report.hpp"
#include "addtree/synth.hpp"
#include "addtree/text.hpp"
#include "cli.hpp"
#include "oracles.hpp"

namespace addtree {
namespace {

using testing::temp_path;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "addtree");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string p(const std::string& name) { return temp_path("cli_" + name).string(); }

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      t.header = cells;
      first = false;
    } else {
      t.rows.push_back(cells);
    }
  }
  return t;
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    ASSERT_EQ(run({"synth", "--n", "800", "--seed", "3", "--scheme", "partly_additive", "--out",
                   p("part.csv")})
                  .code,
              0);
    ASSERT_EQ(run({"synth", "--n", "800", "--seed", "4", "--out", p("add.csv")}).code, 0);
    ASSERT_EQ(run({"train", "--data", p("add.csv"), "--objective", "gamma", "--max-depth", "1",
                   "--rounds", "80", "--learning-rate", "0.2", "--out-model", p("stumps.json")})
                  .code,
              0);
    ASSERT_EQ(run({"train", "--data", p("part.csv"), "--objective", "gamma", "--max-depth", "2",
                   "--interaction-groups", "0,1,2,3;4;5", "--rounds", "80", "--out-model",
                   p("groups.json")})
                  .code,
              0);
  }
};

TEST_F(Cli, SynthIsDeterministic) {
  ASSERT_EQ(run({"synth", "--n", "100", "--seed", "1", "--scheme", "additive_only", "--out", p("a1.csv")}).code, 0);
  ASSERT_EQ(run({"synth", "--n", "100", "--seed", "1", "--scheme", "additive_only", "--out", p("a2.csv")}).code, 0);
  EXPECT_EQ(read_file(p("a1.csv")), read_file(p("a2.csv")));
}

TEST_F(Cli, SynthUsageErrors) {
  EXPECT_EQ(run({"synth", "--n", "0", "--out", p("zero.csv")}).code, cli::kUsage);
  EXPECT_EQ(run({"synth", "--n", "10"}).code, cli::kUsage);
  EXPECT_EQ(run({"synth", "--n", "10", "--scheme", "bogus", "--out", p("b.csv")}).code, cli::kUsage);
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

TEST_F(Cli, PartlyAdditiveHeaderNamesInteractingFeatures) {
  const std::string header = read_file(p("part.csv")).substr(0, read_file(p("part.csv")).find('\n'));
  EXPECT_NE(header.find("log_initial"), std::string::npos);
  EXPECT_NE(header.find("log_age"), std::string::npos);
}

TEST_F(Cli, TrainPrintsRoundsAndDeviance) {
  const Result r = run({"train", "--data", p("add.csv"), "--objective", "gamma", "--rounds", "300",
                        "--early-stopping", "5", "--learning-rate", "0.3", "--seed", "2",
                        "--out-model", p("es.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("rounds used: "), std::string::npos);
  EXPECT_NE(r.out.find("train deviance: "), std::string::npos);
  EXPECT_NE(r.out.find("validation deviance: "), std::string::npos);
}

TEST_F(Cli, DepthOneModelVerifiesAllAdditive) {
  const Result r = run({"verify", "--model", p("stumps.json"), "--data", p("add.csv")});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.out.find("not asserted"), std::string::npos);
  std::size_t yes = 0;
  for (std::size_t pos = 0; (pos = r.out.find(" yes ", pos)) != std::string::npos; ++pos) ++yes;
  EXPECT_EQ(yes, 6u);
  const Result j = run({"verify", "--model", p("stumps.json"), "--data", p("add.csv"), "--json"});
  EXPECT_EQ(j.code, 0);
  const auto doc = nlohmann::json::parse(j.out);
  for (const auto& f : doc["features"]) EXPECT_TRUE(f["is_structurally_additive"].get<bool>());
}

TEST_F(Cli, PartlyAdditiveModelReportsScatter) {
  const Result r = run({"verify", "--model", p("groups.json"), "--data", p("part.csv")});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("not asserted, scatter="), std::string::npos);
}

TEST_F(Cli, TooTightToleranceFailsWithExitOne) {
  const Result r = run({"verify", "--model", p("stumps.json"), "--data", p("add.csv"),
                        "--tolerance", "1e-300"});
  EXPECT_EQ(r.code, cli::kVerificationFailed) << r.out;
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST_F(Cli, InteractionGroupsAreHonoured) {
  ASSERT_EQ(run({"synth", "--n", "300", "--seed", "5", "--out", p("six.csv")}).code, 0);
  // project to three features plus response
  const Dataset six = load_csv(p("six.csv"), "y");
  const std::vector<std::string> keep{"log_initial", "log_weekly_pay", "log_age"};
  save_csv(six.select_features(keep), p("three.csv"));
  const Result r = run({"train", "--data", p("three.csv"), "--max-depth", "3",
                        "--interaction-groups", "0,1;2", "--rounds", "20", "--objective", "gamma",
                        "--out-model", p("three.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Ensemble e = load_model(p("three.json"));
  for (const Tree& t : e.trees()) {
    const auto used = t.features_used();
    const bool a = std::all_of(used.begin(), used.end(), [](int f) { return f <= 1; });
    const bool b = std::all_of(used.begin(), used.end(), [](int f) { return f == 2; });
    EXPECT_TRUE(a || b);
  }
}

TEST_F(Cli, TrainErrors) {
  Result r = run({"train", "--data", p("add.csv"), "--interaction-groups", "0;99", "--out-model", p("x.json")});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find("99"), std::string::npos);
  r = run({"train", "--data", p("add.csv"), "--interaction-groups", "0,1;1,2", "--out-model", p("x.json")});
  EXPECT_EQ(r.code, cli::kUsage);
  r = run({"train", "--data", p("add.csv"), "--interaction-groups", "0,a", "--out-model", p("x.json")});
  EXPECT_EQ(r.code, cli::kUsage);
  r = run({"train", "--data", p("add.csv"), "--monotone", "0:2", "--out-model", p("x.json")});
  EXPECT_EQ(r.code, cli::kUsage);
  std::ofstream(p("neg.csv")) << "x,y\n1,1\n2,-1\n3,2\n";
  r = run({"train", "--data", p("neg.csv"), "--objective", "gamma", "--out-model", p("x.json")});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find("positive"), std::string::npos);
  r = run({"train", "--data", p("missing.csv"), "--out-model", p("x.json")});
  EXPECT_EQ(r.code, cli::kIoOrFormat);
  r = run({"train", "--data", p("add.csv"), "--rounds", "ten", "--out-model", p("x.json")});
  EXPECT_EQ(r.code, cli::kUsage);
}

TEST_F(Cli, MonotoneFlagIsStoredInTheModel) {
  ASSERT_EQ(run({"train", "--data", p("add.csv"), "--max-depth", "1", "--monotone", "0:1,3:-1",
                 "--rounds", "10", "--out-model", p("mono.json")})
                .code,
            0);
  EXPECT_EQ(load_model(p("mono.json")).monotone(), (std::vector<int>{1, 0, 0, -1, 0, 0}));
}

TEST_F(Cli, ExplainShapSeriesIsVerticalTranslateOfPd) {
  const Result r = run({"explain", "--model", p("stumps.json"), "--data", p("add.csv"), "--sample",
                        "300", "--seed", "536", "--out", p("plot.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const CsvTable t = parse_csv(read_file(p("plot.csv")));
  EXPECT_EQ(t.header, (std::vector<std::string>{"feature", "type", "value", "prediction"}));
  std::map<std::string, std::map<double, double>> pd;
  for (const auto& row : t.rows) {
    if (row[1] == "PD") pd[row[0]][*parse_double(row[2])] = *parse_double(row[3]);
  }
  ASSERT_EQ(pd.size(), 6u);
  std::map<std::string, std::vector<double>> gaps;
  for (const auto& row : t.rows) {
    if (row[1] != "SHAP") continue;
    const double v = *parse_double(row[2]);
    ASSERT_TRUE(pd[row[0]].contains(v));
    gaps[row[0]].push_back(*parse_double(row[3]) - pd[row[0]][v]);
  }
  for (const auto& [feature, g] : gaps) {
    ASSERT_EQ(g.size(), 300u);
    const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
    EXPECT_LE(*hi - *lo, 1e-9) << feature;
    // eps rule: the anchor gap is -(PD range)/40 for every row
    double pd_lo = INFINITY, pd_hi = -INFINITY;
    for (const auto& [v, y] : pd[feature]) {
      pd_lo = std::min(pd_lo, y);
      pd_hi = std::max(pd_hi, y);
    }
    EXPECT_NEAR(g.front(), -(pd_hi - pd_lo) / 40, 1e-9) << feature;
  }
}

TEST_F(Cli, ExplainCsvAndJsonCarryIdenticalNumbers) {
  ASSERT_EQ(run({"explain", "--model", p("groups.json"), "--data", p("part.csv"), "--sample", "200",
                 "--features", "hour,female", "--out", p("e.csv")})
                .code,
            0);
  ASSERT_EQ(run({"explain", "--model", p("groups.json"), "--data", p("part.csv"), "--sample", "200",
                 "--features", "hour,female", "--format", "json", "--out", p("e.json")})
                .code,
            0);
  const CsvTable t = parse_csv(read_file(p("e.csv")));
  const auto doc = nlohmann::json::parse(read_file(p("e.json")));
  ASSERT_EQ(doc["rows"].size(), t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& j = doc["rows"][i];
    EXPECT_EQ(j["feature"].get<std::string>(), t.rows[i][0]);
    EXPECT_EQ(j["type"].get<std::string>(), t.rows[i][1]);
    EXPECT_EQ(j["value"].get<double>(), *parse_double(t.rows[i][2]));
    EXPECT_EQ(j["prediction"].get<double>(), *parse_double(t.rows[i][3]));
  }
}

TEST_F(Cli, ExplainSvgAndRaw) {
  ASSERT_EQ(run({"explain", "--model", p("groups.json"), "--data", p("part.csv"), "--sample", "100",
                 "--features", "hour,female", "--format", "svg", "--out", p("e.svg")})
                .code,
            0);
  const std::string svg = read_file(p("e.svg"));
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("height=\"800\""), std::string::npos);
  EXPECT_NE(svg.find(">hour<"), std::string::npos);
  EXPECT_NE(svg.find(">female<"), std::string::npos);
  ASSERT_EQ(run({"explain", "--model", p("groups.json"), "--data", p("part.csv"), "--features",
                 "female", "--raw", "--out", p("raw.csv")})
                .code,
            0);
  const CsvTable raw = parse_csv(read_file(p("raw.csv")));
  EXPECT_EQ(raw.header, (std::vector<std::string>{"feature", "value", "prediction", "kind"}));
  std::size_t shap_rows = 0, pd_rows = 0;
  for (const auto& row : raw.rows) {
    shap_rows += row[3] == "shap_dependence";
    pd_rows += row[3] == "pd";
  }
  EXPECT_EQ(shap_rows, 800u);
  EXPECT_EQ(pd_rows, 2u);
}

TEST_F(Cli, ExplainErrors) {
  Result r = run({"explain", "--model", p("stumps.json"), "--data", p("add.csv"), "--sample",
                  "1000", "--seed", "536", "--out", p("e2.csv")});
  EXPECT_EQ(r.code, cli::kUsage);
  r = run({"explain", "--model", p("stumps.json"), "--data", p("add.csv"), "--features", "salary",
           "--out", p("e2.csv")});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find("salary"), std::string::npos);
  r = run({"explain", "--model", p("stumps.json"), "--data", p("add.csv"), "--format", "png",
           "--out", p("e2.csv")});
  EXPECT_EQ(r.code, cli::kUsage);
  r = run({"explain", "--model", p("nope.json"), "--data", p("add.csv"), "--out", p("e2.csv")});
  EXPECT_EQ(r.code, cli::kIoOrFormat);
  r = run({"verify", "--model", p("stumps.json"), "--data", p("three.csv")});
  EXPECT_NE(r.code, 0);
}

TEST_F(Cli, HandEditedModelStillHasLocalAccuracy) {
  ASSERT_EQ(run({"explain", "--model", p("stumps.json"), "--data", p("add.csv"), "--raw",
                 "--features", "female", "--out", p("snap_before.csv")})
                .code,
            0);
  auto doc = nlohmann::json::parse(read_file(p("stumps.json")));
  for (auto& tree : doc["model"]["trees"]) {
    bool edited = false;
    for (auto& node : tree["nodes"]) {
      if (node.contains("leaf") && tree["nodes"][0].value("feature", -1) == 5) {
        node["leaf"] = node["leaf"].get<double>() + 0.5;
        edited = true;
        break;
      }
    }
    if (edited) break;
  }
  std::ofstream(p("edited_bad.json")) << doc.dump(1);
  EXPECT_EQ(run({"verify", "--model", p("edited_bad.json"), "--data", p("add.csv")}).code,
            cli::kIoOrFormat);
  doc.erase("checksum");
  std::ofstream(p("edited.json")) << doc.dump(1);
  const Result r = run({"verify", "--model", p("edited.json"), "--data", p("add.csv")});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  ASSERT_EQ(run({"explain", "--model", p("edited.json"), "--data", p("add.csv"), "--raw",
                 "--features", "female", "--out", p("snap_after.csv")})
                .code,
            0);
  EXPECT_NE(read_file(p("snap_before.csv")), read_file(p("snap_after.csv")));
}

TEST_F(Cli, RepeatedRunsAreBitIdentical) {
  for (int k = 0; k < 2; ++k) {
    const std::string s = std::to_string(k);
    ASSERT_EQ(run({"train", "--data", p("part.csv"), "--objective", "gamma", "--max-depth", "3",
                   "--rounds", "30", "--colsample", "0.7", "--seed", "9", "--out-model",
                   p("det" + s + ".json")})
                  .code,
              0);
    ASSERT_EQ(run({"explain", "--model", p("det" + s + ".json"), "--data", p("part.csv"),
                   "--sample", "150", "--seed", "4", "--out", p("det" + s + ".csv")})
                  .code,
              0);
  }
  EXPECT_EQ(read_file(p("det0.json")), read_file(p("det1.json")));
  EXPECT_EQ(read_file(p("det0.csv")), read_file(p("det1.csv")));
}

// Fixed seed matrix pinned against files under tests/golden.
TEST(CliGolden, PinnedOutputs) {
  const std::filesystem::path golden = ADDTREE_GOLDEN_DIR;
  for (const char* scheme : {"additive_only", "partly_additive"}) {
    for (const char* seed : {"1", "2"}) {
      const std::string tag = std::string(scheme) + "_" + seed;
      ASSERT_EQ(run({"synth", "--n", "120", "--seed", seed, "--scheme", scheme, "--out",
                     p("g_" + tag + ".csv")})
                    .code,
                0);
      ASSERT_EQ(run({"train", "--data", p("g_" + tag + ".csv"), "--objective", "gamma",
                     "--max-depth", "2", "--interaction-groups", "0,1,2,3;4;5", "--rounds", "15",
                     "--learning-rate", "0.3", "--seed", seed, "--out-model",
                     p("g_" + tag + ".json")})
                    .code,
                0);
      ASSERT_EQ(run({"explain", "--model", p("g_" + tag + ".json"), "--data",
                     p("g_" + tag + ".csv"), "--sample", "40", "--seed", seed, "--features",
                     "log_age,female", "--out", p("g_plot_" + tag + ".csv")})
                    .code,
                0);
      EXPECT_EQ(read_file(p("g_" + tag + ".csv")), read_file(golden / ("data_" + tag + ".csv")))
          << tag;
      EXPECT_EQ(read_file(p("g_plot_" + tag + ".csv")), read_file(golden / ("plot_" + tag + ".csv")))
          << tag;
    }
  }
}

TEST(CliGolden, LibraryCallsReproduceThePinnedExport) {
  const std::filesystem::path golden = ADDTREE_GOLDEN_DIR;
  SynthSpec spec;
  spec.n_rows = 120;
  spec.seed = 2;
  spec.scheme = SynthScheme::partly_additive;
  const Dataset data = generate_synthetic(spec);
  EXPECT_EQ(to_csv(data), read_file(golden / "data_partly_additive_2.csv"));
  BoostParams params;
  params.objective = Objective::gamma_log_link;
  params.n_rounds = 15;
  params.learning_rate = 0.3;
  params.constraints.max_depth = 2;
  params.interaction_groups = {{0, 1, 2, 3}, {4}, {5}};
  params.seed = 2;
  const Ensemble model = fit(data, params);
  const Dataset sample = data.select_rows(sample_rows(data.n_rows(), 40, 2));
  const std::vector<std::size_t> features{2, 5};
  std::ostringstream out;
  write_plot_csv(build_plot_export(model, sample, features), out);
  EXPECT_EQ(out.str(), read_file(golden / "plot_partly_additive_2.csv"));
}

}  // namespace
}  // namespace addtree
