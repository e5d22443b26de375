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

#include "ctrnli/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <vector>

#include "ctrnli/error.hpp"
#include "ctrnli/hash.hpp"
#include "ctrnli/text.hpp"

namespace ctrnli {

std::optional<double> TfidfModel::weight(std::string_view term) const {
  auto it = idf.find(std::string(term));
  if (it == idf.end()) return std::nullopt;
  return it->second;
}

std::string TfidfModel::fingerprint() const { return "tfidf-" + short_hash(to_json().dump()); }

nlohmann::json TfidfModel::to_json() const {
  nlohmann::json out;
  out["fitted_on"] = fitted_on;
  out["num_documents"] = num_documents;
  out["idf"] = idf;
  return out;
}

TfidfModel TfidfModel::from_json(const nlohmann::json& value) {
  TfidfModel model;
  try {
    model.fitted_on = value.at("fitted_on").get<std::string>();
    model.num_documents = value.at("num_documents").get<std::size_t>();
    model.idf = value.at("idf").get<std::map<std::string, double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, std::string("tfidf model: ") + e.what());
  }
  return model;
}

void TfidfModel::save(const std::filesystem::path& file) const {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + file.string());
  out << to_json().dump(1) << '\n';
}

TfidfModel TfidfModel::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + file.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, e.what());
  }
}

TfidfModel fit_tfidf(std::span<const std::string> train_texts) {
  if (train_texts.empty()) throw Error(ErrorCode::EmptyCorpus, "no training documents");
  std::map<std::string, std::size_t> document_frequency;
  for (const auto& document : train_texts) {
    const auto tokens = text::word_tokens(document);
    for (const auto& term : std::set<std::string>(tokens.begin(), tokens.end())) {
      ++document_frequency[term];
    }
  }
  TfidfModel model;
  model.fitted_on = "train";
  model.num_documents = train_texts.size();
  const double n = static_cast<double>(train_texts.size());
  for (const auto& [term, df] : document_frequency) {
    model.idf.emplace(term, std::log((1.0 + n) / (1.0 + static_cast<double>(df))) + 1.0);
  }
  return model;
}

double sentence_score(std::string_view sentence, const TfidfModel& model) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& term : text::word_tokens(sentence)) {
    if (auto w = model.weight(term)) {
      total += *w;
      ++count;
    }
  }
  return count == 0 ? 0.0 : total / static_cast<double>(count);
}

std::string extractive_summarize(std::string_view document, const TfidfModel& model,
                                 std::size_t word_limit) {
  const auto sentences = text::split_sentences(document);
  std::vector<double> scores;
  std::vector<std::size_t> words;
  for (const auto& s : sentences) {
    const auto body = document.substr(s.begin, s.end - s.begin);
    scores.push_back(sentence_score(body, model));
    words.push_back(text::count_words(body));
  }

  std::vector<std::size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<bool> chosen(sentences.size(), false);
  std::size_t total = 0;
  for (std::size_t index : order) {
    if (total + words[index] > word_limit) continue;
    chosen[index] = true;
    total += words[index];
  }

  std::string summary;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (!chosen[i]) continue;
    if (!summary.empty()) summary.push_back(' ');
    summary.append(document.substr(sentences[i].begin, sentences[i].end - sentences[i].begin));
  }
  return summary;
}

}  // namespace ctrnli
