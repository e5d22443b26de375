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

#ifndef CTRNLI_TEXT_HPP_
#define CTRNLI_TEXT_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ctrnli::text {

// Lowercased runs of letters and digits. Bytes >= 0x80 count as letters so
// UTF-8 words stay whole. Shared by TF-IDF, ROUGE-1 and the lexical baseline.
std::vector<std::string> word_tokens(std::string_view text);

// Whitespace-delimited word count (the unit of the extractive word limit).
std::size_t count_words(std::string_view text);

// A sentence is a byte range of its source, so it is verbatim by construction.
struct Sentence {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Splits at newlines and after '.', '?' or '!' when followed by whitespace.
// Ranges are trimmed; blank pieces are dropped.
std::vector<Sentence> split_sentences(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace ctrnli::text

#endif  // CTRNLI_TEXT_HPP_
