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

#include "ctrnli/rouge.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "ctrnli/text.hpp"

namespace ctrnli {
namespace {

std::map<std::string, std::size_t> unigram_counts(std::string_view text) {
  std::map<std::string, std::size_t> counts;
  for (auto& token : text::word_tokens(text)) ++counts[std::move(token)];
  return counts;
}

}  // namespace

RougeScore rouge1(std::string_view candidate, std::string_view reference) {
  const auto cand = unigram_counts(candidate);
  const auto ref = unigram_counts(reference);
  std::size_t cand_total = 0;
  std::size_t ref_total = 0;
  std::size_t overlap = 0;
  for (const auto& [term, n] : cand) {
    cand_total += n;
    if (auto it = ref.find(term); it != ref.end()) overlap += std::min(n, it->second);
  }
  for (const auto& [term, n] : ref) ref_total += n;

  RougeScore score;
  if (cand_total > 0) score.precision = static_cast<double>(overlap) / static_cast<double>(cand_total);
  if (ref_total > 0) score.recall = static_cast<double>(overlap) / static_cast<double>(ref_total);
  if (score.precision + score.recall > 0.0) {
    score.f1 = 2.0 * score.precision * score.recall / (score.precision + score.recall);
  }
  return score;
}

}  // namespace ctrnli
