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

#ifndef CTRNLI_SRC_MODELS_TORCH_COMMON_HPP_
#define CTRNLI_SRC_MODELS_TORCH_COMMON_HPP_

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <torch/torch.h>

#include "ctrnli/error.hpp"
#include "ctrnli/hash.hpp"

namespace ctrnli::models {

// Fixed sinusoidal position table, [max_len, d_model].
inline std::string fixed4(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.4f", value);
  return buffer;
}

inline torch::Tensor sinusoidal_positions(int64_t max_len, int64_t d_model) {
  auto position = torch::arange(max_len, torch::kFloat32).unsqueeze(1);
  auto div = torch::exp(torch::arange(0, d_model, 2, torch::kFloat32) *
                        (-std::log(10000.0) / static_cast<double>(d_model)));
  auto table = torch::zeros({max_len, d_model});
  table.index_put_({torch::indexing::Slice(), torch::indexing::Slice(0, torch::indexing::None, 2)},
                   torch::sin(position * div));
  table.index_put_({torch::indexing::Slice(), torch::indexing::Slice(1, torch::indexing::None, 2)},
                   torch::cos(position * div));
  return table;
}

// Digest of every parameter's bytes, in registration order.
inline std::string weights_digest(const torch::nn::Module& module) {
  std::string bytes;
  for (const auto& item : module.named_parameters()) {
    auto t = item.value().detach().contiguous().to(torch::kCPU);
    bytes += item.key();
    bytes.append(static_cast<const char*>(t.data_ptr()), t.numel() * t.element_size());
  }
  return short_hash(bytes);
}

// Pads integer sequences into a [max_len, batch] tensor (sequence-first).
inline torch::Tensor pad_sequences(const std::vector<std::vector<int64_t>>& rows, int64_t pad) {
  std::size_t longest = 1;
  for (const auto& r : rows) longest = std::max(longest, r.size());
  auto out = torch::full({static_cast<int64_t>(longest), static_cast<int64_t>(rows.size())}, pad,
                         torch::kLong);
  auto acc = out.accessor<int64_t, 2>();
  for (std::size_t b = 0; b < rows.size(); ++b) {
    for (std::size_t t = 0; t < rows[b].size(); ++t) {
      acc[static_cast<int64_t>(t)][static_cast<int64_t>(b)] = rows[b][t];
    }
  }
  return out;
}

// Splits "scratch:<family>-<size>" into the size, or returns "" when the
// identifier is not a scratch spec.
inline std::string scratch_size(std::string_view identifier, std::string_view family) {
  const std::string prefix = "scratch:" + std::string(family) + "-";
  if (!identifier.starts_with(prefix)) return {};
  return std::string(identifier.substr(prefix.size()));
}

}  // namespace ctrnli::models

#endif  // CTRNLI_SRC_MODELS_TORCH_COMMON_HPP_
