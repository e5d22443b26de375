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

#ifndef CTRNLI_TFIDF_HPP_
#define CTRNLI_TFIDF_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"

namespace ctrnli {

// Smoothed inverse document frequencies over the training premises:
//   idf(t) = ln((1 + N) / (1 + df(t))) + 1
struct TfidfModel {
  std::map<std::string, double> idf;
  std::size_t num_documents = 0;
  std::string fitted_on;

  std::optional<double> weight(std::string_view term) const;
  std::string fingerprint() const;

  nlohmann::json to_json() const;
  static TfidfModel from_json(const nlohmann::json& value);
  void save(const std::filesystem::path& file) const;
  static TfidfModel load(const std::filesystem::path& file);
};

// Only training texts may be passed in; the result is always stamped
// fitted_on = "train".
TfidfModel fit_tfidf(std::span<const std::string> train_texts);

// Mean idf over the sentence's in-vocabulary token occurrences, which is
// the mean tf-idf weight normalized by sentence length. 0 when no token is
// in the vocabulary.
double sentence_score(std::string_view sentence, const TfidfModel& model);

// Greedy selection by descending score (ties: earlier sentence first),
// skipping sentences that would push the total past `word_limit` words.
// Selected sentences are emitted verbatim in document order, space-joined.
std::string extractive_summarize(std::string_view document, const TfidfModel& model,
                                 std::size_t word_limit = 300);

}  // namespace ctrnli

#endif  // CTRNLI_TFIDF_HPP_
