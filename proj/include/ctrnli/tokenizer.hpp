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

#ifndef CTRNLI_TOKENIZER_HPP_
#define CTRNLI_TOKENIZER_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ctrnli {

struct Token {
  int id = 0;
  // Byte range of the source text the token covers.
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Cased WordPiece tokenizer: whitespace split, ASCII punctuation as single
// pieces, then greedy longest-match-first over the vocabulary with "##"
// continuation pieces. A word containing a character outside the vocabulary
// becomes one [UNK].
//
// Re-encoding any token-boundary prefix of a text reproduces the same token
// prefix, which is what makes truncate() exact.
class WordPieceTokenizer {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kCls = 2;
  static constexpr int kSep = 3;
  static constexpr int kBos = 4;
  static constexpr int kEos = 5;
  static constexpr std::size_t kNumSpecial = 6;

  explicit WordPieceTokenizer(std::vector<std::string> vocabulary);

  // Vocabulary = special tokens, `reserved` words, every character seen (as
  // start and continuation pieces), then the most frequent words (ties by
  // byte order) until `max_vocab` entries.
  static WordPieceTokenizer train(std::span<const std::string> texts, std::size_t max_vocab,
                                  std::span<const std::string> reserved = {});

  static WordPieceTokenizer load(const std::filesystem::path& vocab_file);
  void save(const std::filesystem::path& vocab_file) const;

  std::vector<Token> encode(std::string_view text) const;
  std::vector<int> ids(std::string_view text) const;
  std::size_t count(std::string_view text) const;

  // Longest prefix of `text` holding at most `max_tokens` tokens, cut at a
  // token end so the original spelling and spacing are kept.
  std::string truncate(std::string_view text, std::size_t max_tokens) const;

  // Special tokens other than [UNK] are dropped.
  std::string decode(std::span<const int> ids) const;

  std::size_t vocab_size() const { return vocabulary_.size(); }
  const std::string& token(int id) const { return vocabulary_.at(static_cast<std::size_t>(id)); }
  std::optional<int> find(std::string_view piece) const;
  const std::string& fingerprint() const { return fingerprint_; }

 private:
  void encode_word(std::string_view text, std::size_t begin, std::size_t end,
                   std::vector<Token>& out) const;

  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, int> index_;
  std::string fingerprint_;
};

}  // namespace ctrnli

#endif  // CTRNLI_TOKENIZER_HPP_
