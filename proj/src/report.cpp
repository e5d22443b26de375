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

#include "ctrnli/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "ctrnli/error.hpp"

namespace ctrnli {
namespace {

nlohmann::ordered_json optional_number(const std::optional<double>& value) {
  return value ? nlohmann::ordered_json(*value) : nlohmann::ordered_json("undefined");
}

std::string cell(double value) { return fmt::format("{:.4f}", value); }
std::string cell(const std::optional<double>& value) {
  return value ? cell(*value) : std::string("undefined");
}

// Quote a CSV field when needed.
std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

nlohmann::ordered_json lengths_json(const LengthStats& s) {
  nlohmann::ordered_json out;
  out["avg_premise_tokens"] = s.premise;
  out["avg_premise_tokens_entailment"] = s.premise_entailment;
  out["avg_premise_tokens_contradiction"] = s.premise_contradiction;
  return out;
}

nlohmann::ordered_json rows_json(std::span<const BreakdownRow> rows) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json r;
    r["slice"] = row.slice;
    r["count"] = row.count;
    r["macro_f1"] = row.macro_f1;
    r["avg_premise_tokens"] = row.premise.premise;
    r["avg_premise_tokens_entailment"] = row.premise.premise_entailment;
    r["avg_premise_tokens_contradiction"] = row.premise.premise_contradiction;
    r["avg_statement_tokens"] = row.avg_statement_tokens;
    r["original_premise"] = lengths_json(row.original_premise);
    r["shortened_premise"] = row.shortened_premise ? lengths_json(*row.shortened_premise)
                                                   : nlohmann::ordered_json(nullptr);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

nlohmann::ordered_json report_to_json(const MetricsReport& report) {
  nlohmann::ordered_json out;
  out["model_tag"] = report.model_tag;
  out["split"] = report.split;
  out["num_instances"] = report.num_instances;
  out["macro_f1"] = report.scores.macro_f1;
  out["precision"] = report.scores.precision;
  out["recall"] = report.scores.recall;
  out["faithfulness"] = optional_number(report.faithfulness);
  out["consistency"] = optional_number(report.consistency);
  out["counts"] = {{"instances", report.num_instances},
                   {"altering_pairs", report.contrast.altering},
                   {"altering_eligible", report.contrast.altering_eligible},
                   {"preserving_pairs", report.contrast.preserving}};
  out["breakdown_by_section"] = rows_json(report.by_section);
  out["breakdown_by_type"] = rows_json(report.by_type);
  return out;
}

nlohmann::ordered_json agreement_to_json(const AgreementMatrix& agreement) {
  nlohmann::ordered_json out;
  out["model_tags"] = agreement.model_tags;
  out["matrix"] = agreement.matrix;
  out["common_ids"] = agreement.common_ids;
  return out;
}

std::string table_csv(std::span<const MetricsReport> reports) {
  std::string out = "Method";
  for (const char* column : kTableColumns) out += std::string(",") + column;
  out += '\n';
  for (const auto& r : reports) {
    out += csv_field(r.model_tag);
    out += "," + cell(r.scores.macro_f1) + "," + cell(r.scores.precision) + "," +
           cell(r.scores.recall) + "," + cell(r.faithfulness) + "," + cell(r.consistency) + '\n';
  }
  return out;
}

std::string breakdown_csv(std::span<const BreakdownRow> rows) {
  std::string out = "Slice";
  for (const char* column : kBreakdownColumns) out += std::string(",") + column;
  out += '\n';
  for (const auto& row : rows) {
    out += csv_field(row.slice);
    out += "," + cell(row.macro_f1) + "," + cell(row.premise.premise) + "," +
           cell(row.premise.premise_entailment) + "," + cell(row.premise.premise_contradiction) +
           "," + cell(row.avg_statement_tokens) + '\n';
  }
  return out;
}

std::string agreement_csv(const AgreementMatrix& agreement) {
  std::string out = "model";
  for (const auto& tag : agreement.model_tags) out += "," + csv_field(tag);
  out += '\n';
  for (std::size_t i = 0; i < agreement.model_tags.size(); ++i) {
    out += csv_field(agreement.model_tags[i]);
    for (double v : agreement.matrix[i]) out += "," + cell(v);
    out += '\n';
  }
  return out;
}

std::string agreement_svg(const AgreementMatrix& agreement) {
  const std::size_t n = agreement.model_tags.size();
  std::size_t longest = 0;
  for (const auto& tag : agreement.model_tags) longest = std::max(longest, tag.size());
  const int cell_size = 64;
  const int margin = 20 + static_cast<int>(longest) * 7;
  const int side = margin + static_cast<int>(n) * cell_size + 20;

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n"
      "<rect width=\"{0}\" height=\"{0}\" fill=\"white\"/>\n",
      side);
  for (std::size_t i = 0; i < n; ++i) {
    const int offset = margin + static_cast<int>(i) * cell_size + cell_size / 2;
    const std::string tag = xml_escape(agreement.model_tags[i]);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\" dominant-baseline=\"middle\">{}</text>\n",
                       margin - 6, offset, tag);
    svg += fmt::format("<text x=\"{0}\" y=\"{1}\" text-anchor=\"start\" "
                       "transform=\"rotate(-90 {0} {1})\">{2}</text>\n",
                       offset, margin - 6, tag);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = std::clamp(agreement.matrix[i][j], 0.0, 1.0);
      const int red = static_cast<int>(std::lround(255.0 - 222.0 * v));
      const int green = static_cast<int>(std::lround(255.0 - 153.0 * v));
      const int x = margin + static_cast<int>(j) * cell_size;
      const int y = margin + static_cast<int>(i) * cell_size;
      svg += fmt::format(
          "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"rgb({},{},255)\" "
          "stroke=\"#888\"/>\n",
          x, y, cell_size, cell_size, red, green);
      svg += fmt::format(
          "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" dominant-baseline=\"middle\" "
          "fill=\"{}\">{:.2f}</text>\n",
          x + cell_size / 2, y + cell_size / 2, v > 0.6 ? "white" : "black", v);
    }
  }
  svg += "</svg>\n";
  return svg;
}

std::string table_markdown(std::span<const MetricsReport> reports) {
  std::string out = "| Method |";
  std::string rule = "|---|";
  for (const char* column : kTableColumns) {
    out += fmt::format(" {} |", column);
    rule += "---|";
  }
  out += "\n" + rule + "\n";
  for (const auto& r : reports) {
    out += fmt::format("| {} | {} | {} | {} | {} | {} |\n", r.model_tag, cell(r.scores.macro_f1),
                       cell(r.scores.precision), cell(r.scores.recall), cell(r.faithfulness),
                       cell(r.consistency));
  }
  return out;
}

void write_text_file(const std::filesystem::path& file, std::string_view contents) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + file.string());
  out << contents;
}

}  // namespace ctrnli
