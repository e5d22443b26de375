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

#ifndef CTRNLI_ROUGE_HPP_
#define CTRNLI_ROUGE_HPP_

#include <string_view>

namespace ctrnli {

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// ROUGE-1 over lowercased letter/digit tokens with clipped unigram counts.
// Precision is relative to the candidate, recall to the reference; every
// score is 0 when its denominator is empty.
RougeScore rouge1(std::string_view candidate, std::string_view reference);

}  // namespace ctrnli

#endif  // CTRNLI_ROUGE_HPP_
