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

#include "ctrnli/tokenizer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>

#include "ctrnli/error.hpp"
#include "ctrnli/hash.hpp"

namespace ctrnli {
namespace {

constexpr std::size_t kMaxWordBytes = 100;
const char* const kSpecialTokens[] = {"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[BOS]", "[EOS]"};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u) != 0;
}

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;  // stray continuation byte, treated as its own character
}

struct Piece {
  std::size_t begin;
  std::size_t end;
};

// Whitespace-separated chunks, with each ASCII punctuation byte split out.
std::vector<Piece> pretokenize(std::string_view text) {
  std::vector<Piece> pieces;
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_space(text[i])) {
      ++i;
    } else if (is_punct(text[i])) {
      pieces.push_back({i, i + 1});
      ++i;
    } else {
      std::size_t j = i;
      while (j < text.size() && !is_space(text[j]) && !is_punct(text[j])) ++j;
      pieces.push_back({i, j});
      i = j;
    }
  }
  return pieces;
}

}  // namespace

WordPieceTokenizer::WordPieceTokenizer(std::vector<std::string> vocabulary)
    : vocabulary_(std::move(vocabulary)) {
  if (vocabulary_.size() < kNumSpecial) {
    throw Error(ErrorCode::InvalidConfig, "vocabulary lacks the special tokens");
  }
  for (std::size_t i = 0; i < kNumSpecial; ++i) {
    if (vocabulary_[i] != kSpecialTokens[i]) {
      throw Error(ErrorCode::InvalidConfig,
                  "vocabulary entry " + std::to_string(i) + " must be " + kSpecialTokens[i]);
    }
  }
  std::string joined;
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    if (!index_.emplace(vocabulary_[i], static_cast<int>(i)).second) {
      throw Error(ErrorCode::InvalidConfig, "duplicate vocabulary entry '" + vocabulary_[i] + "'");
    }
    joined += vocabulary_[i];
    joined.push_back('\n');
  }
  fingerprint_ = "wordpiece-" + short_hash(joined);
}

WordPieceTokenizer WordPieceTokenizer::train(std::span<const std::string> texts,
                                             std::size_t max_vocab,
                                             std::span<const std::string> reserved) {
  std::map<std::string, std::size_t> word_counts;
  std::set<std::string> characters;
  auto add_chars = [&](std::string_view word) {
    for (std::size_t i = 0; i < word.size();) {
      const std::size_t n = std::min(utf8_length(static_cast<unsigned char>(word[i])), word.size() - i);
      characters.emplace(word.substr(i, n));
      i += n;
    }
  };
  for (const auto& text : texts) {
    for (const Piece& piece : pretokenize(text)) {
      std::string_view word(text.data() + piece.begin, piece.end - piece.begin);
      add_chars(word);
      ++word_counts[std::string(word)];
    }
  }

  std::vector<std::string> vocabulary(std::begin(kSpecialTokens), std::end(kSpecialTokens));
  std::set<std::string> taken(vocabulary.begin(), vocabulary.end());
  auto push = [&](const std::string& piece) {
    if (taken.insert(piece).second) vocabulary.push_back(piece);
  };
  for (const auto& text : reserved) {
    for (const Piece& piece : pretokenize(text)) {
      std::string_view word(text.data() + piece.begin, piece.end - piece.begin);
      add_chars(word);
      push(std::string(word));
    }
  }
  for (const auto& c : characters) push(c);
  for (const auto& c : characters) push("##" + c);

  std::vector<std::pair<std::string, std::size_t>> ranked(word_counts.begin(), word_counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [word, count] : ranked) {
    if (vocabulary.size() >= max_vocab) break;
    push(word);
  }
  return WordPieceTokenizer(std::move(vocabulary));
}

WordPieceTokenizer WordPieceTokenizer::load(const std::filesystem::path& vocab_file) {
  std::ifstream in(vocab_file);
  if (!in) throw Error(ErrorCode::Io, "cannot open vocabulary " + vocab_file.string());
  std::vector<std::string> vocabulary;
  std::string line;
  while (std::getline(in, line)) vocabulary.push_back(line);
  return WordPieceTokenizer(std::move(vocabulary));
}

void WordPieceTokenizer::save(const std::filesystem::path& vocab_file) const {
  if (vocab_file.has_parent_path()) std::filesystem::create_directories(vocab_file.parent_path());
  std::ofstream out(vocab_file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write vocabulary " + vocab_file.string());
  for (const auto& piece : vocabulary_) out << piece << '\n';
}

std::optional<int> WordPieceTokenizer::find(std::string_view piece) const {
  auto it = index_.find(std::string(piece));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void WordPieceTokenizer::encode_word(std::string_view text, std::size_t begin, std::size_t end,
                                     std::vector<Token>& out) const {
  if (end - begin > kMaxWordBytes) {
    out.push_back({kUnk, begin, end});
    return;
  }
  const std::size_t mark = out.size();
  std::size_t start = begin;
  std::string candidate;
  while (start < end) {
    std::size_t stop = end;
    std::optional<int> match;
    while (stop > start) {
      candidate.assign(start == begin ? "" : "##");
      candidate.append(text.substr(start, stop - start));
      if (auto it = index_.find(candidate); it != index_.end()) {
        match = it->second;
        break;
      }
      // step back one whole UTF-8 character
      --stop;
      while (stop > start && (static_cast<unsigned char>(text[stop]) & 0xC0) == 0x80) --stop;
    }
    if (!match) {
      out.resize(mark);
      out.push_back({kUnk, begin, end});
      return;
    }
    out.push_back({*match, start, stop});
    start = stop;
  }
}

std::vector<Token> WordPieceTokenizer::encode(std::string_view text) const {
  std::vector<Token> tokens;
  for (const Piece& piece : pretokenize(text)) encode_word(text, piece.begin, piece.end, tokens);
  return tokens;
}

std::vector<int> WordPieceTokenizer::ids(std::string_view text) const {
  std::vector<int> out;
  for (const Token& token : encode(text)) out.push_back(token.id);
  return out;
}

std::size_t WordPieceTokenizer::count(std::string_view text) const { return encode(text).size(); }

std::string WordPieceTokenizer::truncate(std::string_view text, std::size_t max_tokens) const {
  const std::vector<Token> tokens = encode(text);
  if (tokens.size() <= max_tokens) return std::string(text);
  if (max_tokens == 0) return {};
  return std::string(text.substr(0, tokens[max_tokens - 1].end));
}

std::string WordPieceTokenizer::decode(std::span<const int> ids) const {
  std::string out;
  for (int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= vocabulary_.size()) continue;
    if (id != kUnk && static_cast<std::size_t>(id) < kNumSpecial) continue;
    const std::string& piece = vocabulary_[static_cast<std::size_t>(id)];
    if (piece.size() > 2 && piece.starts_with("##")) {
      out.append(piece, 2);
    } else {
      if (!out.empty()) out.push_back(' ');
      out += piece;
    }
  }
  return out;
}

}  // namespace ctrnli
