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

#include "cli.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "addtree/boost.hpp"
#include "addtree/dataset.hpp"
#include "addtree/error.hpp"
#include "addtree/model_io.hpp"
#include "addtree/report.hpp"
#include "addtree/synth.hpp"
#include "addtree/text.hpp"
#include "addtree/verify.hpp"

namespace addtree::cli {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

int parse_int(const std::string& text, const std::string& what) {
  const std::string t(trim(text));
  int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw InvalidArgument("cannot parse " + what + " '" + text + "' as an integer");
  }
  return value;
}

// "0,1,2;3;4,5"
std::vector<std::vector<int>> parse_groups(const std::string& text) {
  std::vector<std::vector<int>> groups;
  if (trim(text).empty()) return groups;
  for (const std::string& group : split(text, ';')) {
    std::vector<int> members;
    for (const std::string& item : split(group, ',')) {
      members.push_back(parse_int(item, "interaction group member"));
    }
    groups.push_back(std::move(members));
  }
  return groups;
}

// "2:1,3:-1"
std::vector<int> parse_monotone(const std::string& text, std::size_t n_features) {
  std::vector<int> signs(n_features, 0);
  if (trim(text).empty()) return signs;
  for (const std::string& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) {
      throw InvalidArgument("monotone constraint '" + item + "' is not of the form index:sign");
    }
    const int index = parse_int(parts[0], "monotone feature index");
    const int sign = parse_int(parts[1], "monotone sign");
    if (index < 0 || static_cast<std::size_t>(index) >= n_features) {
      throw InvalidArgument("monotone constraint refers to feature index " + std::to_string(index) +
                            " but the data has " + std::to_string(n_features) + " features");
    }
    if (sign < -1 || sign > 1) {
      throw InvalidArgument("monotone sign for feature " + std::to_string(index) +
                            " must be -1, 0 or 1");
    }
    signs[index] = sign;
  }
  return signs;
}

// Loads the data columns the model was trained on, in model order.
Dataset load_for_model(const Ensemble& model, const std::string& path,
                       const std::optional<std::string>& weights) {
  const Dataset raw = load_csv(path, std::nullopt, weights);
  try {
    return raw.select_features(model.feature_names());
  } catch (const DataError& e) {
    throw InvalidArgument(std::string("data does not match the model: ") + e.what());
  }
}

std::string sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << v;
  return s.str();
}

struct SynthArgs {
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::string scheme = "additive_only";
  double noise_sd = 0.3;
  std::string out;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  if (a.n == 0) throw InvalidArgument("--n must be positive");
  SynthSpec spec;
  spec.n_rows = a.n;
  spec.seed = a.seed;
  spec.noise_sd = a.noise_sd;
  spec.scheme = parse_synth_scheme(a.scheme);
  save_csv(generate_synthetic(spec), a.out);
  out << "wrote " << a.n << " rows to " << a.out << '\n';
  return kOk;
}

struct TrainArgs {
  std::string data;
  std::string response = "y";
  std::optional<std::string> weights;
  std::string objective = "squared_error";
  int max_depth = 6;
  std::string groups;
  std::string monotone;
  int rounds = 100;
  double learning_rate = 0.1;
  double lambda = 1.0;
  std::optional<int> early_stopping;
  double validation_fraction = 0.2;
  double min_split_loss = 0.0;
  double min_child_weight = 0.0;
  double colsample = 1.0;
  std::uint64_t seed = 0;
  std::string out_model;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const Dataset data = load_csv(a.data, a.response, a.weights);
  BoostParams params;
  params.objective = parse_objective(a.objective);
  params.n_rounds = a.rounds;
  params.learning_rate = a.learning_rate;
  params.reg_lambda = a.lambda;
  params.constraints.max_depth = a.max_depth;
  params.constraints.monotone = parse_monotone(a.monotone, data.n_features());
  params.constraints.min_split_loss = a.min_split_loss;
  params.constraints.min_child_weight = a.min_child_weight;
  params.constraints.colsample_bynode = a.colsample;
  params.interaction_groups = parse_groups(a.groups);
  params.early_stopping_rounds = a.early_stopping;
  if (a.early_stopping) params.validation_fraction = a.validation_fraction;
  params.seed = a.seed;

  try {
    check_response(params.objective, data.response());
  } catch (const DataError& e) {
    throw InvalidArgument(std::string(e.what()) + " (objective " + a.objective + ")");
  }

  FitReport report;
  const Ensemble model = fit(data, params, &report);
  save_model(model, a.out_model);
  out << "rounds used: " << report.rounds_used << '\n';
  out << "train deviance: " << format_double(report.train_deviance) << '\n';
  if (report.validation_deviance) {
    out << "validation deviance: " << format_double(*report.validation_deviance) << '\n';
  }
  return kOk;
}

struct ExplainArgs {
  std::string model;
  std::string data;
  std::string features;
  std::optional<std::size_t> sample;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
  bool raw = false;
};

int cmd_explain(const ExplainArgs& a, std::ostream& out) {
  const Ensemble model = load_model(a.model);
  Dataset data = load_for_model(model, a.data, std::nullopt);
  if (a.sample) {
    if (*a.sample == 0) throw InvalidArgument("--sample must be positive");
    if (*a.sample > data.n_rows()) {
      throw InvalidArgument("--sample " + std::to_string(*a.sample) + " exceeds the " +
                            std::to_string(data.n_rows()) + " rows of the data");
    }
    data = data.select_rows(sample_rows(data.n_rows(), *a.sample, a.seed));
  }

  std::vector<std::size_t> features;
  if (trim(a.features).empty()) {
    for (std::size_t j = 0; j < model.n_features(); ++j) features.push_back(j);
  } else {
    for (const std::string& item : split(a.features, ',')) {
      const std::string name(trim(item));
      const auto j = data.find_feature(name);
      if (!j) throw InvalidArgument("unknown feature '" + name + "'");
      features.push_back(*j);
    }
  }

  std::ofstream file(a.out, std::ios::binary);
  if (!file) throw IoError("cannot open '" + a.out + "' for writing");
  if (a.raw) {
    const ShapMatrix shap = treeshap(model, data);
    std::vector<CurveData> curves;
    for (std::size_t j : features) {
      curves.push_back(partial_dependence(model, j, unique_grid(data.column(j)), data, true));
      curves.push_back(shap_dependence(shap, data, j));
    }
    if (a.format == "csv") {
      write_curves_csv(curves, model.feature_names(), file);
    } else if (a.format == "json") {
      write_curves_json(curves, model.feature_names(), file);
    } else {
      throw InvalidArgument("--raw supports csv and json only");
    }
  } else {
    const PlotExport plot = build_plot_export(model, data, features);
    if (a.format == "csv") {
      write_plot_csv(plot, file);
    } else if (a.format == "json") {
      write_plot_json(plot, file);
    } else {
      write_plot_svg(plot, file);
    }
  }
  file.close();
  if (!file) throw IoError("failed writing '" + a.out + "'");
  out << "wrote " << features.size() << " feature(s) from " << data.n_rows() << " rows to " << a.out
      << '\n';
  return kOk;
}

struct VerifyArgs {
  std::string model;
  std::string data;
  double tolerance = kDefaultTolerance;
  std::optional<std::string> weights;
  bool json = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  if (!(a.tolerance > 0.0)) throw InvalidArgument("--tolerance must be positive");
  const Ensemble model = load_model(a.model);
  const Dataset data = load_for_model(model, a.data, a.weights);
  const VerificationSummary summary = verify_model(model, data, a.tolerance);
  const auto& names = model.feature_names();
  if (a.json) {
    out << to_json(summary, names) << '\n';
    return summary.ok() ? kOk : kVerificationFailed;
  }

  std::size_t width = 7;
  for (const auto& name : names) width = std::max(width, name.size());
  out << std::left << std::setw(static_cast<int>(width)) << "feature"
      << "  additive  " << std::setw(11) << "c" << "  " << std::setw(11) << "max dev"
      << "  status\n";
  for (const AdditivityReport& r : summary.features) {
    out << std::left << std::setw(static_cast<int>(width)) << names[r.feature] << "  "
        << std::setw(8) << (r.is_structurally_additive ? "yes" : "no") << "  ";
    if (r.is_structurally_additive) {
      out << std::setw(11) << sci(r.shift_constant) << "  " << std::setw(11)
          << sci(r.max_abs_deviation) << "  " << (r.passed() ? "ok" : "FAIL") << '\n';
    } else {
      out << std::setw(11) << "-" << "  " << std::setw(11) << "-"
          << "  not asserted, scatter=" << sci(r.scatter) << '\n';
    }
  }
  out << "local accuracy residual: " << sci(summary.local_accuracy_residual) << "  "
      << (summary.local_accuracy_ok() ? "ok" : "FAIL") << '\n';
  out << (summary.ok() ? "all asserted checks passed" : "verification FAILED") << '\n';
  return summary.ok() ? kOk : kVerificationFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Additive tree ensembles with SHAP and partial dependence checks", "addtree"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Write a synthetic data set as CSV");
  s->add_option("--n", synth.n, "Number of rows")->capture_default_str();
  s->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  s->add_option("--scheme", synth.scheme, "additive_only or partly_additive")->capture_default_str();
  s->add_option("--noise-sd", synth.noise_sd, "Noise standard deviation on the log scale")
      ->capture_default_str();
  s->add_option("--out", synth.out, "Output CSV")->required();

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Fit a boosted tree ensemble");
  t->add_option("--data", train.data, "Training CSV")->required();
  t->add_option("--response", train.response, "Response column")->capture_default_str();
  t->add_option("--weights", train.weights, "Case weight column");
  t->add_option("--objective", train.objective, "squared_error or gamma")->capture_default_str();
  t->add_option("--max-depth", train.max_depth, "Maximum tree depth")->capture_default_str();
  t->add_option("--interaction-groups", train.groups,
                "Semicolon-separated groups of comma-separated 0-based feature indices");
  t->add_option("--monotone", train.monotone, "Comma-separated index:sign pairs, e.g. 2:1,3:-1");
  t->add_option("--rounds", train.rounds, "Boosting rounds")->capture_default_str();
  t->add_option("--learning-rate", train.learning_rate, "Shrinkage")->capture_default_str();
  t->add_option("--lambda", train.lambda, "L2 penalty on leaf values")->capture_default_str();
  t->add_option("--early-stopping", train.early_stopping,
                "Stop after this many rounds without validation improvement");
  t->add_option("--validation-fraction", train.validation_fraction,
                "Share of rows held out when early stopping")
      ->capture_default_str();
  t->add_option("--min-split-loss", train.min_split_loss)->capture_default_str();
  t->add_option("--min-child-weight", train.min_child_weight)->capture_default_str();
  t->add_option("--colsample", train.colsample, "Feature share per node")->capture_default_str();
  t->add_option("--seed", train.seed)->capture_default_str();
  t->add_option("--out-model", train.out_model, "Output model file")->required();

  ExplainArgs explain;
  auto* e = app.add_subcommand("explain", "Export PD and SHAP dependence data");
  e->add_option("--model", explain.model)->required();
  e->add_option("--data", explain.data)->required();
  e->add_option("--features", explain.features, "Comma-separated feature names (default all)");
  e->add_option("--sample", explain.sample, "Rows sampled without replacement");
  e->add_option("--seed", explain.seed)->capture_default_str();
  e->add_option("--out", explain.out)->required();
  e->add_option("--format", explain.format)
      ->check(CLI::IsMember({"csv", "json", "svg"}))
      ->capture_default_str();
  e->add_flag("--raw", explain.raw, "Unshifted PD and SHAP curves");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check SHAP dependence against partial dependence");
  v->add_option("--model", verify.model)->required();
  v->add_option("--data", verify.data)->required();
  v->add_option("--tolerance", verify.tolerance)->capture_default_str();
  v->add_option("--weights", verify.weights, "Case weight column");
  v->add_flag("--json", verify.json, "Print the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    std::ostringstream help_out, help_err;
    const int code = app.exit(ex, help_out, help_err);
    out << help_out.str();
    err << help_err.str();
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*s) return cmd_synth(synth, out);
    if (*t) return cmd_train(train, out);
    if (*e) return cmd_explain(explain, out);
    return cmd_verify(verify, out);
  } catch (const InvalidArgument& ex) {
    err << "error: " << ex.what() << '\n';
    return kUsage;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kIoOrFormat;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kIoOrFormat;
  }
}

}  // namespace addtree::cli
