#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "focuseval/metrics.hpp"

namespace focuseval {

// --- scores file -------------------------------------------------------------

inline nlohmann::ordered_json scores_to_json(const std::vector<LabeledScore>& items) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& s : items)
    out.push_back({{"source", s.source},
                   {"question_id", s.question_id},
                   {"kind", to_string(s.category.kind)},
                   {"relation_arity", s.category.relation_arity},
                   {"object_id", s.object_id},
                   {"score", s.score},
                   {"is_focused", s.is_focused}});
  return out;
}

inline std::vector<LabeledScore> scores_from_json(const nlohmann::json& j) {
  try {
    std::vector<LabeledScore> out;
    for (const auto& r : j) {
      LabeledScore s;
      s.source = r.value("source", std::string("default"));
      s.question_id = r.at("question_id").get<std::uint32_t>();
      s.category.kind = parse_kind(r.at("kind").get<std::string>());
      s.category.relation_arity = r.at("relation_arity").get<int>();
      s.object_id = r.at("object_id").get<ObjectId>();
      s.score = r.at("score").get<double>();
      s.is_focused = r.at("is_focused").get<bool>();
      if (!std::isfinite(s.score)) throw ValueError("score must be finite");
      if (s.category.relation_arity != 0 && s.category.relation_arity != 1)
        throw FormatError("relation_arity must be 0 or 1");
      out.push_back(std::move(s));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed scores file: ") + e.what());
  }
}

// --- report table ------------------------------------------------------------

struct SourceReport {
  std::string source;
  std::vector<AucReport> columns;  // kCategories order
};

/// One row per source, in order of first appearance.
inline std::vector<SourceReport> build_report(const std::vector<LabeledScore>& items, Aggregation mode) {
  std::vector<std::string> order;
  for (const auto& s : items)
    if (std::find(order.begin(), order.end(), s.source) == order.end()) order.push_back(s.source);
  std::vector<SourceReport> rows;
  for (const auto& src : order) {
    std::vector<LabeledScore> subset;
    for (const auto& s : items)
      if (s.source == src) subset.push_back(s);
    rows.push_back({src, aggregate(subset, mode)});
  }
  return rows;
}

inline bool all_undefined(const std::vector<SourceReport>& rows) {
  for (const auto& r : rows)
    for (const auto& c : r.columns)
      if (c.auc) return false;
  return true;
}

namespace detail {

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace detail

inline std::string render_csv(const std::vector<SourceReport>& rows) {
  std::string out = "source,category,aggregation,auc,n_pos,n_neg,n_questions_used,n_questions_skipped\n";
  for (const auto& row : rows)
    for (const auto& c : row.columns) {
      out += detail::csv_field(row.source) + ',' + category_label(c.category) + ',' +
             std::string(to_string(c.aggregation)) + ',' + (c.auc ? detail::fixed(*c.auc, 6) : "n/a") + ',' +
             std::to_string(c.n_pos) + ',' + std::to_string(c.n_neg) + ',' + std::to_string(c.n_questions_used) +
             ',' + std::to_string(c.n_questions_skipped) + '\n';
    }
  return out;
}

/// Pipe table: rows are sources, columns the four question categories.
inline std::string render_markdown(const std::vector<SourceReport>& rows) {
  std::string out = "| Models |";
  for (const auto& c : kCategories) out += ' ' + category_label(c) + " |";
  out += "\n|---|";
  for (std::size_t i = 0; i < kCategories.size(); ++i) out += "---|";
  out += '\n';
  for (const auto& row : rows) {
    out += "| " + row.source + " |";
    for (const auto& c : row.columns) out += ' ' + (c.auc ? detail::fixed(*c.auc, 3) : std::string("n/a")) + " |";
    out += '\n';
  }
  return out;
}

}  // namespace focuseval
