#pragma once

#include <string>
#include <utility>

#include <json.hpp>

#include "focuseval/questions.hpp"

namespace focuseval {

inline nlohmann::ordered_json step_to_json(const Step& s) {
  using J = nlohmann::ordered_json;
  return std::visit(
      [](const auto& st) -> J {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, step::Filter>) {
          J j{{"op", "filter"}};
          if (st.attrs.size) j["size"] = to_string(*st.attrs.size);
          if (st.attrs.color) j["color"] = to_string(*st.attrs.color);
          if (st.attrs.material) j["material"] = to_string(*st.attrs.material);
          if (st.attrs.shape) j["shape"] = to_string(*st.attrs.shape);
          return j;
        } else if constexpr (std::is_same_v<T, step::Unique>) {
          return J{{"op", "unique"}};
        } else if constexpr (std::is_same_v<T, step::Relate>) {
          return J{{"op", "relate"}, {"relation", to_string(st.relation)}};
        } else if constexpr (std::is_same_v<T, step::Exist>) {
          return J{{"op", "exist"}};
        } else {
          return J{{"op", "count"}};
        }
      },
      s);
}

inline Step step_from_json(const nlohmann::json& j) {
  const auto op = j.at("op").get<std::string>();
  if (op == "filter") {
    AttrFilter f;
    if (j.contains("size")) f.size = parse_size(j["size"].get<std::string>());
    if (j.contains("color")) f.color = parse_color(j["color"].get<std::string>());
    if (j.contains("material")) f.material = parse_material(j["material"].get<std::string>());
    if (j.contains("shape")) f.shape = parse_shape(j["shape"].get<std::string>());
    return step::Filter{f};
  }
  if (op == "unique") return step::Unique{};
  if (op == "relate") return step::Relate{parse_relation(j.at("relation").get<std::string>())};
  if (op == "exist") return step::Exist{};
  if (op == "count") return step::Count{};
  throw FormatError("unknown program op '" + op + "'");
}

/// A question together with its executed ground truth.
struct QuestionRecord {
  Question question;
  GroundTruth truth;

  friend bool operator==(const QuestionRecord&, const QuestionRecord&) = default;
};

inline nlohmann::ordered_json question_to_json(const QuestionRecord& rec) {
  using J = nlohmann::ordered_json;
  const auto& q = rec.question;
  J program = J::array();
  for (const auto& s : q.program.steps) program.push_back(step_to_json(s));
  J j{{"id", q.id},
      {"scene_id", q.scene_id},
      {"kind", to_string(q.kind)},
      {"relation_arity", q.relation_arity},
      {"text", q.text},
      {"program", std::move(program)}};
  if (const auto* b = std::get_if<bool>(&rec.truth.answer))
    j["answer"] = *b;
  else
    j["answer"] = std::get<std::uint32_t>(rec.truth.answer);
  j["focused"] = rec.truth.focused;
  j["anchor"] = rec.truth.anchor ? J(*rec.truth.anchor) : J(nullptr);
  return j;
}

inline QuestionRecord question_from_json(const nlohmann::json& j) {
  try {
    QuestionRecord rec;
    auto& q = rec.question;
    q.id = j.at("id").get<std::uint32_t>();
    q.scene_id = j.at("scene_id").get<std::uint32_t>();
    q.kind = parse_kind(j.at("kind").get<std::string>());
    q.relation_arity = j.at("relation_arity").get<int>();
    q.text = j.at("text").get<std::string>();
    for (const auto& s : j.at("program")) q.program.steps.push_back(step_from_json(s));
    q.program.validate();
    const auto& ans = j.at("answer");
    if (ans.is_boolean())
      rec.truth.answer = ans.get<bool>();
    else
      rec.truth.answer = ans.get<std::uint32_t>();
    rec.truth.focused = j.at("focused").get<std::vector<ObjectId>>();
    if (!j.at("anchor").is_null()) rec.truth.anchor = j["anchor"].get<ObjectId>();
    return rec;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed question: ") + e.what());
  }
}

}  // namespace focuseval
