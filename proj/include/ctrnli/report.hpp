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

#ifndef CTRNLI_REPORT_HPP_
#define CTRNLI_REPORT_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctrnli/metrics.hpp"
#include "json.hpp"

namespace ctrnli {

struct MetricsReport {
  std::string model_tag;
  std::string split;
  std::size_t num_instances = 0;
  ClassificationScores scores;
  std::optional<double> faithfulness;
  std::optional<double> consistency;
  ContrastCounts contrast;
  std::vector<BreakdownRow> by_section;
  std::vector<BreakdownRow> by_type;
};

// Headline columns, in order.
inline constexpr const char* kTableColumns[] = {"Macro F1", "Precision", "Recall",
                                                "Faithfulness", "Consistency"};
// Breakdown columns, in order.
inline constexpr const char* kBreakdownColumns[] = {"Macro F1", "Avg Premise Len",
                                                    "Avg Premise - Ent", "Avg Premise - Con",
                                                    "Avg Statement Len"};

nlohmann::ordered_json report_to_json(const MetricsReport& report);
nlohmann::ordered_json agreement_to_json(const AgreementMatrix& agreement);

// "Method" followed by kTableColumns; undefined values are written as "undefined".
std::string table_csv(std::span<const MetricsReport> reports);
// "Slice" followed by kBreakdownColumns.
std::string breakdown_csv(std::span<const BreakdownRow> rows);
std::string agreement_csv(const AgreementMatrix& agreement);
// Static SVG heatmap: one labeled cell per model pair, white (0) to blue (1).
std::string agreement_svg(const AgreementMatrix& agreement);

// GitHub-flavoured markdown rendering of the headline table.
std::string table_markdown(std::span<const MetricsReport> reports);

void write_text_file(const std::filesystem::path& file, std::string_view contents);

}  // namespace ctrnli

#endif  // CTRNLI_REPORT_HPP_
