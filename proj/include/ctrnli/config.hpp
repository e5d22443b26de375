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

#ifndef CTRNLI_CONFIG_HPP_
#define CTRNLI_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctrnli/corpus.hpp"
#include "ctrnli/nli.hpp"
#include "ctrnli/shortening.hpp"
#include "ctrnli/summarizer.hpp"
#include "json.hpp"

namespace ctrnli {

enum class Split { Train, Dev, Test };
std::string_view split_name(Split split);
std::optional<Split> parse_split(std::string_view text);

struct RunPaths {
  std::filesystem::path corpus;
  std::filesystem::path train;
  std::filesystem::path dev;
  std::filesystem::path test;
  std::filesystem::path output;

  const std::filesystem::path& instances(Split split) const;
};

struct TokenizerSettings {
  // Existing vocabulary; when empty one is trained on the train split.
  std::filesystem::path vocab;
  std::size_t max_vocab = 16000;
};

struct RunConfig {
  std::string name = "run";
  std::uint64_t seed = 0;
  std::filesystem::path base_dir;  // relative paths resolve against this
  RunPaths paths;
  TokenizerSettings tokenizer;
  ShorteningStrategy strategy;
  SummarizerConfig summarizer;
  FineTuneConfig finetune;
  PremiseMode finetune_mode = PremiseMode::Distinct;
  // Weights used by the abstractive strategies; empty selects the best
  // fine-tuned checkpoint of this run, or the base model if there is none.
  std::filesystem::path summarizer_checkpoint;
  ClassifierConfig classifier;

  // Sets the run seed and every component seed.
  void set_seed(std::uint64_t value);

  // Effective settings with keys sorted, paths relative to base_dir.
  nlohmann::json canonical_json() const;
  // SHA-256 of canonical_json(); independent of field order in the file.
  std::string hash() const;

  // CTRNLI_CACHE_DIR when set, else <output>/cache.
  std::filesystem::path cache_root() const;
};

// Parses a TOML run config. Relative paths resolve against `base_dir`.
RunConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& file);

// Missing inputs, one diagnostic per path.
std::vector<Diagnostic> check_paths(const RunConfig& config);

}  // namespace ctrnli

#endif  // CTRNLI_CONFIG_HPP_
