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

#ifndef CTRNLI_TESTS_FIXTURES_HPP_
#define CTRNLI_TESTS_FIXTURES_HPP_

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "ctrnli/corpus.hpp"
#include "ctrnli/tokenizer.hpp"
#include "ctrnli/types.hpp"
#include "json.hpp"

namespace ctrnli::testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("ctrnli-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& file, const std::string& contents) {
  std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  out << contents;
}

inline std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline ClinicalTrialReport make_trial(const std::string& id,
                                      const std::vector<std::string>& lines = {"line"}) {
  ClinicalTrialReport trial;
  trial.trial_id = id;
  for (SectionId section : kAllSections) trial.section(section) = lines;
  return trial;
}

inline NLIInstance make_single(const std::string& id, const std::string& trial,
                               std::optional<Label> label, const std::string& statement = "s",
                               SectionId section = SectionId::Results) {
  NLIInstance instance;
  instance.instance_id = id;
  instance.instance_type = InstanceType::Single;
  instance.section = section;
  instance.primary_trial = trial;
  instance.statement = statement;
  instance.label = label;
  return instance;
}

inline NLIInstance make_comparison(const std::string& id, const std::string& primary,
                                   const std::string& secondary, std::optional<Label> label,
                                   const std::string& statement = "s",
                                   SectionId section = SectionId::Results) {
  NLIInstance instance = make_single(id, primary, label, statement, section);
  instance.instance_type = InstanceType::Comparison;
  instance.secondary_trial = secondary;
  return instance;
}

// Pseudo-words "w0", "w1", ... joined by spaces.
inline std::string numbered_words(std::size_t count, std::size_t offset = 0) {
  std::string out;
  for (std::size_t i = 0; i < count; ++i) {
    if (!out.empty()) out += ' ';
    out += "w" + std::to_string(offset + i);
  }
  return out;
}

// Tokenizer whose vocabulary covers lowercase letters, digits and basic
// punctuation character by character plus a few whole words.
inline WordPieceTokenizer toy_tokenizer() {
  std::vector<std::string> texts = {
      "abcdefghijklmnopqrstuvwxyz ABCDEFGHIJKLMNOPQRSTUVWXYZ 0123456789 . , ; : ! ? ( ) - ' \" % /",
      "the patients trial primary secondary results were treated with drug dose",
  };
  return WordPieceTokenizer::train(texts, 2000);
}

}  // namespace ctrnli::testing

#endif  // CTRNLI_TESTS_FIXTURES_HPP_
