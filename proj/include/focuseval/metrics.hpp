#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "focuseval/errors.hpp"
#include "focuseval/questions.hpp"

namespace focuseval {

/// Question template: exist/count with zero or one relation.
struct Category {
  QuestionKind kind = QuestionKind::Exist;
  int relation_arity = 0;

  friend auto operator<=>(const Category&, const Category&) = default;
};

/// Column order of the report table.
inline constexpr std::array<Category, 4> kCategories{{{QuestionKind::Exist, 0},
                                                      {QuestionKind::Count, 0},
                                                      {QuestionKind::Exist, 1},
                                                      {QuestionKind::Count, 1}}};

/// "exist(0 relation)" etc.
inline std::string category_label(const Category& c) {
  return std::string(to_string(c.kind)) + "(" + std::to_string(c.relation_arity) + " relation)";
}

struct LabeledScore {
  std::string source;  // which focus-map source produced the score
  std::uint32_t question_id = 0;
  Category category;
  ObjectId object_id = 0;
  double score = 0.0;
  bool is_focused = false;

  friend bool operator==(const LabeledScore&, const LabeledScore&) = default;
};

/// Mann-Whitney AUC: the fraction of (positive, negative) pairs where the
/// positive scores higher, ties counting one half. Computed from midranks.
inline double auc(std::span<const LabeledScore> items) {
  std::vector<std::pair<double, bool>> v;
  v.reserve(items.size());
  for (const auto& it : items) v.emplace_back(it.score, it.is_focused);
  std::sort(v.begin(), v.end());

  double pos_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j].first == v[i].first) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k)
      if (v[k].second) pos_rank_sum += midrank, ++n_pos;
    i = j;
  }
  const std::size_t n_neg = v.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw UndefinedAuc("AUC needs at least one positive and one negative");
  const double p = static_cast<double>(n_pos), n = static_cast<double>(n_neg);
  return (pos_rank_sum - p * (p + 1.0) / 2.0) / (p * n);
}

enum class Aggregation { Pooled, PerQuestionMean };

inline std::string_view to_string(Aggregation a) { return a == Aggregation::Pooled ? "pooled" : "mean"; }

struct AucReport {
  Category category;
  Aggregation aggregation = Aggregation::Pooled;
  std::optional<double> auc;  // set only when both classes are present
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  std::size_t n_questions_used = 0;
  std::size_t n_questions_skipped = 0;
};

/// AUC for one category's scores.
///   pooled : one AUC over every (score, label) pair
///   mean   : average of per-question AUCs; single-class questions are skipped
inline AucReport aggregate_category(const Category& category, std::span<const LabeledScore> items, Aggregation mode) {
  AucReport rep{category, mode, std::nullopt, 0, 0, 0, 0};
  std::map<std::uint32_t, std::vector<LabeledScore>> by_question;
  for (const auto& it : items) by_question[it.question_id].push_back(it);

  if (mode == Aggregation::Pooled) {
    for (const auto& it : items) (it.is_focused ? rep.n_pos : rep.n_neg)++;
    rep.n_questions_used = by_question.size();
    if (rep.n_pos > 0 && rep.n_neg > 0) rep.auc = auc(items);
    return rep;
  }

  double total = 0.0;
  for (const auto& [qid, group] : by_question) {
    const auto pos = static_cast<std::size_t>(std::count_if(group.begin(), group.end(), [](const auto& g) { return g.is_focused; }));
    if (pos == 0 || pos == group.size()) {
      ++rep.n_questions_skipped;
      continue;
    }
    rep.n_pos += pos;
    rep.n_neg += group.size() - pos;
    ++rep.n_questions_used;
    total += auc(group);
  }
  if (rep.n_questions_used > 0) rep.auc = total / static_cast<double>(rep.n_questions_used);
  return rep;
}

/// Like aggregate_category but throws UndefinedAuc when no AUC can be formed.
inline double category_auc(const Category& category, std::span<const LabeledScore> items, Aggregation mode) {
  const auto rep = aggregate_category(category, items, mode);
  if (!rep.auc) throw UndefinedAuc("category " + category_label(category) + " has no usable data");
  return *rep.auc;
}

/// One report per table column for a single focus-map source.
inline std::vector<AucReport> aggregate(std::span<const LabeledScore> items, Aggregation mode) {
  std::vector<AucReport> out;
  for (const auto& cat : kCategories) {
    std::vector<LabeledScore> subset;
    for (const auto& it : items)
      if (it.category == cat) subset.push_back(it);
    out.push_back(aggregate_category(cat, subset, mode));
  }
  return out;
}

}  // namespace focuseval
