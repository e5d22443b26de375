// Copyright 2026 The ctrnli Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: validate, shorten, train, predict, evaluate, report.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "ctrnli/error.hpp"
#include "ctrnli/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

int exit_code_for(ctrnli::ErrorCode code) {
  switch (code) {
    case ctrnli::ErrorCode::RuntimeUnavailable:
    case ctrnli::ErrorCode::MissingCheckpoint:
    case ctrnli::ErrorCode::Io:
    case ctrnli::ErrorCode::CacheCorruption:
      return kExitRuntime;
    default:
      return kExitValidation;
  }
}

struct Options {
  std::string config;
  std::string split = "test";
  std::string strategy;
  std::string baseline;
  std::optional<std::uint64_t> seed;
  std::string component;
  std::vector<std::string> predictions;
  bool verbose = false;
};

ctrnli::RunConfig effective_config(const Options& options) {
  ctrnli::RunConfig config = ctrnli::load_config(options.config);
  if (!options.strategy.empty()) {
    auto kind = ctrnli::parse_strategy(options.strategy);
    if (!kind) {
      throw ctrnli::Error(ctrnli::ErrorCode::InvalidConfig,
                          "unknown strategy '" + options.strategy + "'");
    }
    config.strategy.kind = *kind;
  }
  if (options.seed) config.set_seed(*options.seed);
  return config;
}

ctrnli::Split split_of(const Options& options) {
  auto split = ctrnli::parse_split(options.split);
  if (!split) {
    throw ctrnli::Error(ctrnli::ErrorCode::InvalidConfig, "unknown split '" + options.split + "'");
  }
  return *split;
}

std::string cell(const nlohmann::json& value) {
  if (value.is_number()) return fmt::format("{:.4f}", value.get<double>());
  if (value.is_string()) return value.get<std::string>();
  return "-";
}

int run_report(const Options& options) {
  const ctrnli::RunConfig config = effective_config(options);
  const auto file = config.paths.output / "reports" / options.split / "report.json";
  std::ifstream in(file);
  if (!in) {
    throw ctrnli::Error(ctrnli::ErrorCode::Io,
                        "no report at " + file.string() + "; run `evaluate` first");
  }
  const auto document = nlohmann::json::parse(in);
  std::cout << "| Method |";
  for (const char* column : ctrnli::kTableColumns) std::cout << ' ' << column << " |";
  std::cout << "\n|---|";
  for (std::size_t i = 0; i < std::size(ctrnli::kTableColumns); ++i) std::cout << "---|";
  std::cout << '\n';
  for (const auto& model : document.at("models")) {
    std::cout << "| " << model.at("model_tag").get<std::string>() << " | "
              << cell(model.at("macro_f1")) << " | " << cell(model.at("precision")) << " | "
              << cell(model.at("recall")) << " | " << cell(model.at("faithfulness")) << " | "
              << cell(model.at("consistency")) << " |\n";
  }
  const auto& agreement = document.at("agreement");
  if (!agreement.is_null()) {
    std::cout << "\nAgreement over " << agreement.at("common_ids").get<std::size_t>() << " instances\n";
    const auto& tags = agreement.at("model_tags");
    const auto& matrix = agreement.at("matrix");
    for (std::size_t i = 0; i < tags.size(); ++i) {
      std::cout << tags[i].get<std::string>();
      for (const auto& v : matrix[i]) std::cout << fmt::format("  {:.4f}", v.get<double>());
      std::cout << '\n';
    }
  }
  return kExitOk;
}

int run(const std::string& command, const Options& options) {
  if (command == "report") return run_report(options);

  ctrnli::Pipeline pipeline(effective_config(options));
  if (command == "validate") {
    const auto diagnostics = pipeline.validate();
    for (const auto& d : diagnostics) std::cerr << ctrnli::format_diagnostic(d) << '\n';
    if (!diagnostics.empty()) {
      std::cerr << diagnostics.size() << " problem(s) found\n";
      return kExitValidation;
    }
    std::cout << "ok\n";
    return kExitOk;
  }
  if (command == "shorten") {
    const auto stats = pipeline.shorten(split_of(options));
    std::cout << fmt::format("{} instances, {} shortened, {} from cache -> {}\n", stats.instances,
                             stats.generated, stats.reused, stats.cache_file.string());
    return kExitOk;
  }
  if (command == "train") {
    const bool summarizer = options.component == "summarizer";
    const auto outcome = pipeline.train(summarizer ? ctrnli::Component::Summarizer
                                                   : ctrnli::Component::Classifier);
    std::cout << fmt::format("best epoch {}; scores in {}\n", outcome.best_epoch,
                             outcome.scores_file.string());
    return kExitOk;
  }
  if (command == "predict") {
    if (!options.baseline.empty() && options.baseline != "lexical") {
      throw ctrnli::Error(ctrnli::ErrorCode::InvalidConfig,
                          "unknown baseline '" + options.baseline + "'");
    }
    const auto file = pipeline.predict(split_of(options), options.baseline == "lexical");
    std::cout << file.string() << '\n';
    return kExitOk;
  }
  if (command == "evaluate") {
    const ctrnli::Split split = split_of(options);
    std::vector<std::filesystem::path> files(options.predictions.begin(),
                                             options.predictions.end());
    if (files.empty()) {
      const auto dir = pipeline.config().paths.output / "predictions";
      const std::string prefix = options.split + "-";
      if (std::filesystem::is_directory(dir)) {
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
          const std::string name = entry.path().filename().string();
          if (name.starts_with(prefix) && name.ends_with(".jsonl")) files.push_back(entry.path());
        }
      }
      std::sort(files.begin(), files.end());
    }
    const auto outputs = pipeline.evaluate(split, files);
    std::cout << outputs.report_json.string() << '\n';
    return kExitOk;
  }
  return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clinical trial NLI with premise shortening"};
  app.require_subcommand(1);
  Options options;

  auto add_common = [&](CLI::App* sub, bool with_split) {
    sub->add_option("--config", options.config, "Run config (TOML)")->required()->check(CLI::ExistingFile);
    if (with_split) {
      sub->add_option("--split", options.split, "Data split")
          ->check(CLI::IsMember({"train", "dev", "test"}));
    }
    sub->add_option("--strategy", options.strategy,
                    "truncate, extractive, abstractive-combined or abstractive-distinct");
    sub->add_option("--seed", options.seed, "Override the run seed");
    sub->add_flag("-v,--verbose", options.verbose, "Log progress");
  };

  add_common(app.add_subcommand("validate", "Check corpus and instance files"), false);
  add_common(app.add_subcommand("shorten", "Shorten premises into the cache"), true);
  auto* train = app.add_subcommand("train", "Fine-tune the summarizer or the classifier");
  add_common(train, false);
  train->add_option("component", options.component, "summarizer or classifier")
      ->required()
      ->check(CLI::IsMember({"summarizer", "classifier"}));
  auto* predict = app.add_subcommand("predict", "Write predictions for a split");
  add_common(predict, true);
  predict->add_option("--baseline", options.baseline, "Use a non-neural baseline (lexical)")
      ->check(CLI::IsMember({"lexical"}));
  auto* evaluate = app.add_subcommand("evaluate", "Score prediction files");
  add_common(evaluate, true);
  evaluate->add_option("--predictions", options.predictions,
                       "Prediction files (default: every file for the split)");
  add_common(app.add_subcommand("report", "Print the results table of an evaluated split"), true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors count as validation failures; --help still exits 0.
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  auto logger = spdlog::stderr_color_mt("ctrnli");
  spdlog::set_default_logger(logger);
  spdlog::set_level(options.verbose ? spdlog::level::info : spdlog::level::warn);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, options);
  } catch (const ctrnli::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
