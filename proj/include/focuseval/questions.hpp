#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "focuseval/errors.hpp"
#include "focuseval/random.hpp"
#include "focuseval/scene.hpp"
#include "focuseval/text.hpp"

namespace focuseval {

/// Attribute constraint; an absent slot matches anything.
struct AttrFilter {
  std::optional<Size> size = std::nullopt;
  std::optional<Color> color = std::nullopt;
  std::optional<Material> material = std::nullopt;
  std::optional<Shape> shape = std::nullopt;

  bool empty() const { return !size && !color && !material && !shape; }

  bool matches(const ObjectSpec& o) const {
    return (!size || *size == o.size) && (!color || *color == o.color) && (!material || *material == o.material) &&
           (!shape || *shape == o.shape);
  }

  friend bool operator==(const AttrFilter&, const AttrFilter&) = default;
};

enum class Relation : std::uint8_t { Left, Right, Front, Behind };

inline constexpr std::array<std::string_view, 4> kRelationNames{"left", "right", "front", "behind"};

inline std::string_view to_string(Relation r) { return kRelationNames[static_cast<std::size_t>(r)]; }
inline Relation parse_relation(std::string_view s) {
  return detail::parse_or_throw<Relation>(kRelationNames, s, "relation");
}

/// True when `subject` stands in relation `r` to `reference` on the canvas:
/// left/right compare center x, behind/front compare center y (smaller y is
/// further back). Equal coordinates relate in neither direction.
inline bool related(const ObjectSpec& subject, Relation r, const ObjectSpec& reference) {
  switch (r) {
    case Relation::Left:
      return subject.cx < reference.cx;
    case Relation::Right:
      return subject.cx > reference.cx;
    case Relation::Behind:
      return subject.cy < reference.cy;
    case Relation::Front:
      return subject.cy > reference.cy;
  }
  return false;
}

enum class QuestionKind : std::uint8_t { Exist, Count };

inline std::string_view to_string(QuestionKind k) { return k == QuestionKind::Exist ? "exist" : "count"; }
inline QuestionKind parse_kind(std::string_view s) {
  if (s == "exist") return QuestionKind::Exist;
  if (s == "count") return QuestionKind::Count;
  throw FormatError("unknown question kind '" + std::string(s) + "'");
}

namespace step {
struct Filter {
  AttrFilter attrs;
  friend bool operator==(const Filter&, const Filter&) = default;
};
struct Unique {
  friend bool operator==(const Unique&, const Unique&) = default;
};
struct Relate {
  Relation relation;
  friend bool operator==(const Relate&, const Relate&) = default;
};
struct Exist {
  friend bool operator==(const Exist&, const Exist&) = default;
};
struct Count {
  friend bool operator==(const Count&, const Count&) = default;
};
}  // namespace step

using Step = std::variant<step::Filter, step::Unique, step::Relate, step::Exist, step::Count>;

/// Shape of a well-formed program:
///   Filter+ [Unique Relate Filter+] (Exist | Count)
/// The filters before Unique select the anchor; the filters after Relate
/// select among the anchor's related objects.
struct Program {
  std::vector<Step> steps;

  friend bool operator==(const Program&, const Program&) = default;

  /// Throws InvalidProgram when the step sequence is malformed.
  void validate() const {
    const auto n = steps.size();
    std::size_t i = 0;
    auto filters = [&] {
      std::size_t start = i;
      while (i < n && std::holds_alternative<step::Filter>(steps[i])) {
        if (std::get<step::Filter>(steps[i]).attrs.empty()) throw InvalidProgram("filter with no attribute");
        ++i;
      }
      if (i == start) throw InvalidProgram("expected at least one filter at step " + std::to_string(start));
    };
    filters();
    if (i < n && std::holds_alternative<step::Unique>(steps[i])) {
      ++i;
      if (i >= n || !std::holds_alternative<step::Relate>(steps[i]))
        throw InvalidProgram("unique must be followed by relate");
      ++i;
      filters();
    }
    if (i + 1 != n || !(std::holds_alternative<step::Exist>(steps[i]) || std::holds_alternative<step::Count>(steps[i])))
      throw InvalidProgram("program must end with exactly one exist/count classifier");
  }

  QuestionKind kind() const {
    return std::holds_alternative<step::Count>(steps.back()) ? QuestionKind::Count : QuestionKind::Exist;
  }

  int relation_arity() const {
    return std::any_of(steps.begin(), steps.end(), [](const Step& s) { return std::holds_alternative<step::Relate>(s); })
               ? 1
               : 0;
  }
};

/// One filter step per specified slot, in (size, color, material, shape) order.
inline void append_filters(std::vector<Step>& steps, const AttrFilter& f) {
  if (f.size) steps.push_back(step::Filter{{.size = f.size}});
  if (f.color) steps.push_back(step::Filter{{.color = f.color}});
  if (f.material) steps.push_back(step::Filter{{.material = f.material}});
  if (f.shape) steps.push_back(step::Filter{{.shape = f.shape}});
}

inline Step terminal(QuestionKind kind) {
  return kind == QuestionKind::Exist ? Step{step::Exist{}} : Step{step::Count{}};
}

inline Program make_program(QuestionKind kind, const AttrFilter& target) {
  Program p;
  append_filters(p.steps, target);
  p.steps.push_back(terminal(kind));
  return p;
}

inline Program make_program(QuestionKind kind, const AttrFilter& target, Relation relation, const AttrFilter& anchor) {
  Program p;
  append_filters(p.steps, anchor);
  p.steps.push_back(step::Unique{});
  p.steps.push_back(step::Relate{relation});
  append_filters(p.steps, target);
  p.steps.push_back(terminal(kind));
  return p;
}

struct GroundTruth {
  std::variant<bool, std::uint32_t> answer;
  std::vector<ObjectId> focused;  // ascending
  std::optional<ObjectId> anchor;

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

/// Runs the program over the scene metadata. The focused set is the final
/// filtered set; the anchor of a relation question is reported separately.
inline GroundTruth execute(const Program& program, const Scene& scene) {
  program.validate();
  std::vector<const ObjectSpec*> current;
  for (const auto& o : scene.objects) current.push_back(&o);
  const ObjectSpec* anchor = nullptr;
  GroundTruth truth;

  for (const auto& s : program.steps) {
    if (const auto* f = std::get_if<step::Filter>(&s)) {
      std::erase_if(current, [&](const ObjectSpec* o) { return !f->attrs.matches(*o); });
    } else if (std::holds_alternative<step::Unique>(s)) {
      if (current.size() != 1)
        throw NonUniqueAnchor("unique expected 1 object, found " + std::to_string(current.size()));
      anchor = current.front();
      truth.anchor = anchor->id;
    } else if (const auto* r = std::get_if<step::Relate>(&s)) {
      current.clear();
      for (const auto& o : scene.objects)
        if (o.id != anchor->id && related(o, r->relation, *anchor)) current.push_back(&o);
    }
  }

  for (const auto* o : current) truth.focused.push_back(o->id);
  std::sort(truth.focused.begin(), truth.focused.end());
  if (program.kind() == QuestionKind::Exist)
    truth.answer = !truth.focused.empty();
  else
    truth.answer = static_cast<std::uint32_t>(truth.focused.size());
  return truth;
}

// ---------------------------------------------------------------------------
// Text rendering and parsing

namespace detail {

inline bool merge_into(AttrFilter& acc, const AttrFilter& f) {
  auto merge = [](auto& slot, const auto& v) {
    if (!v) return true;
    if (slot && *slot != *v) return false;
    slot = v;
    return true;
  };
  return merge(acc.size, f.size) && merge(acc.color, f.color) && merge(acc.material, f.material) &&
         merge(acc.shape, f.shape);
}

inline std::string noun_phrase(const AttrFilter& f, bool plural) {
  std::string out;
  auto word = [&](std::string_view w) {
    if (!out.empty()) out += ' ';
    out += w;
  };
  if (f.size) word(to_string(*f.size));
  if (f.color) word(to_string(*f.color));
  if (f.material) word(to_string(*f.material));
  word(f.shape ? to_string(*f.shape) : std::string_view("object"));
  if (plural) out += 's';
  return out;
}

inline std::string_view relation_phrase(Relation r) {
  switch (r) {
    case Relation::Left:
      return "left of";
    case Relation::Right:
      return "right of";
    case Relation::Front:
      return "in front of";
    case Relation::Behind:
      return "behind";
  }
  return "";
}

/// Collapsed view of a valid program: target filter, optional relation clause.
struct ProgramParts {
  QuestionKind kind;
  AttrFilter target;
  std::optional<Relation> relation;
  AttrFilter anchor;
};

inline ProgramParts decompose(const Program& program) {
  program.validate();
  ProgramParts parts{program.kind(), {}, std::nullopt, {}};
  AttrFilter current;
  for (const auto& s : program.steps) {
    if (const auto* f = std::get_if<step::Filter>(&s)) {
      if (!merge_into(current, f->attrs))
        throw InvalidProgram("conflicting filters on the same attribute cannot be rendered");
    } else if (std::holds_alternative<step::Unique>(s)) {
      parts.anchor = current;
      current = {};
    } else if (const auto* r = std::get_if<step::Relate>(&s)) {
      parts.relation = r->relation;
    }
  }
  parts.target = current;
  return parts;
}

}  // namespace detail

/// English rendering of a program:
///   Is there a <target>?
///   How many <targets> are there?
///   Is there a <target> that is <relation> the <anchor>?
///   How many <targets> are <relation> the <anchor>?
/// Unspecified attribute slots are dropped; an unspecified shape reads "object".
inline std::string render_text(const Program& program) {
  const auto parts = detail::decompose(program);
  const bool exist = parts.kind == QuestionKind::Exist;
  std::string text = exist ? "Is there a " + detail::noun_phrase(parts.target, false)
                           : "How many " + detail::noun_phrase(parts.target, true);
  if (parts.relation) {
    text += exist ? " that is " : " are ";
    text += detail::relation_phrase(*parts.relation);
    text += " the ";
    text += detail::noun_phrase(parts.anchor, false);
  } else if (!exist) {
    text += " are there";
  }
  return text + "?";
}

namespace detail {

struct TokenCursor {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;

  bool done() const { return pos >= tokens.size(); }
  std::string_view peek() const { return done() ? std::string_view{} : tokens[pos]; }
  bool accept(std::string_view w) {
    if (peek() != w || done()) return false;
    ++pos;
    return true;
  }
  void expect(std::string_view w) {
    if (!accept(w)) throw FormatError("expected '" + std::string(w) + "' near '" + std::string(peek()) + "'");
  }
};

inline AttrFilter parse_noun_phrase(TokenCursor& cur, bool plural) {
  AttrFilter f;
  if (auto v = lookup<Size>(Vocab::sizes, cur.peek())) f.size = v, ++cur.pos;
  if (auto v = lookup<Color>(Vocab::colors, cur.peek())) f.color = v, ++cur.pos;
  if (auto v = lookup<Material>(Vocab::materials, cur.peek())) f.material = v, ++cur.pos;
  std::string_view noun = cur.peek();
  if (cur.done()) throw FormatError("missing noun");
  ++cur.pos;
  if (plural) {
    if (noun.empty() || noun.back() != 's') throw FormatError("expected plural noun, got '" + std::string(noun) + "'");
    noun.remove_suffix(1);
  }
  if (noun != "object") {
    auto shape = lookup<Shape>(Vocab::shapes, noun);
    if (!shape) throw FormatError("unknown noun '" + std::string(noun) + "'");
    f.shape = shape;
  }
  if (f.empty()) throw FormatError("noun phrase specifies no attribute");
  return f;
}

inline std::optional<Relation> parse_relation_phrase(TokenCursor& cur) {
  if (cur.accept("left")) return cur.expect("of"), Relation::Left;
  if (cur.accept("right")) return cur.expect("of"), Relation::Right;
  if (cur.accept("in")) return cur.expect("front"), cur.expect("of"), Relation::Front;
  if (cur.accept("behind")) return Relation::Behind;
  return std::nullopt;
}

}  // namespace detail

/// Inverse of render_text. Returns the program with one filter step per
/// specified slot. Throws FormatError on text outside the four templates.
inline Program parse_question_text(std::string_view text) {
  if (text.empty() || text.back() != '?') throw FormatError("question must end with '?'");
  text.remove_suffix(1);
  detail::TokenCursor cur{detail::split_words(text)};

  QuestionKind kind;
  AttrFilter target;
  std::optional<Relation> relation;
  AttrFilter anchor;
  if (cur.accept("Is")) {
    kind = QuestionKind::Exist;
    cur.expect("there");
    cur.expect("a");
    target = detail::parse_noun_phrase(cur, false);
    if (cur.accept("that")) {
      cur.expect("is");
      relation = detail::parse_relation_phrase(cur);
      if (!relation) throw FormatError("expected relation after 'that is'");
    }
  } else if (cur.accept("How")) {
    kind = QuestionKind::Count;
    cur.expect("many");
    target = detail::parse_noun_phrase(cur, true);
    cur.expect("are");
    if (!cur.accept("there")) {
      relation = detail::parse_relation_phrase(cur);
      if (!relation) throw FormatError("expected 'there' or a relation after 'are'");
    }
  } else {
    throw FormatError("question must start with 'Is there' or 'How many'");
  }
  if (relation) {
    cur.expect("the");
    anchor = detail::parse_noun_phrase(cur, false);
  }
  if (!cur.done()) throw FormatError("unexpected trailing words in question");
  return relation ? make_program(kind, target, *relation, anchor) : make_program(kind, target);
}

// ---------------------------------------------------------------------------
// Template instantiation

struct Question {
  std::uint32_t id = 0;
  std::uint32_t scene_id = 0;
  QuestionKind kind = QuestionKind::Exist;
  int relation_arity = 0;
  std::string text;
  Program program;

  friend bool operator==(const Question&, const Question&) = default;
};

inline constexpr int kAnchorRetries = 1'000;

namespace detail {

inline AttrFilter project(const ObjectSpec& o, unsigned mask) {
  AttrFilter f;
  if (mask & 1u) f.size = o.size;
  if (mask & 2u) f.color = o.color;
  if (mask & 4u) f.material = o.material;
  if (mask & 8u) f.shape = o.shape;
  return f;
}

/// Nonempty random slot subset. Values come from a random scene object half
/// of the time (so the filter matches something) and uniformly from the
/// vocabulary otherwise.
inline AttrFilter sample_target(const Scene& scene, Rng& rng) {
  const auto mask = static_cast<unsigned>(rng.between(1, 15));
  if (rng.coin()) return project(scene.objects[rng.below(scene.objects.size())], mask);
  ObjectSpec random_obj;
  random_obj.size = static_cast<Size>(rng.below(Vocab::sizes.size()));
  random_obj.color = static_cast<Color>(rng.below(Vocab::colors.size()));
  random_obj.material = static_cast<Material>(rng.below(Vocab::materials.size()));
  random_obj.shape = static_cast<Shape>(rng.below(Vocab::shapes.size()));
  return project(random_obj, mask);
}

}  // namespace detail

/// Samples one question of the given template against `scene`. For
/// relation questions the anchor description matches exactly one object.
inline Question instantiate(const Scene& scene, QuestionKind kind, int relation_arity, Rng& rng) {
  if (relation_arity != 0 && relation_arity != 1) throw InvalidArgument("relation arity must be 0 or 1");
  if (scene.objects.empty()) throw InvalidArgument("scene has no objects");
  if (relation_arity == 1 && scene.objects.size() < 2)
    throw InvalidArgument("relation questions need at least 2 objects");

  Question q;
  q.kind = kind;
  q.relation_arity = relation_arity;
  if (relation_arity == 0) {
    q.program = make_program(kind, detail::sample_target(scene, rng));
  } else {
    std::optional<AttrFilter> anchor;
    for (int attempt = 0; attempt < kAnchorRetries && !anchor; ++attempt) {
      const auto& candidate = scene.objects[rng.below(scene.objects.size())];
      const auto f = detail::project(candidate, static_cast<unsigned>(rng.between(1, 15)));
      const auto hits = std::count_if(scene.objects.begin(), scene.objects.end(),
                                      [&](const ObjectSpec& o) { return f.matches(o); });
      if (hits == 1) anchor = f;
    }
    if (!anchor)
      throw InstantiationExhausted("no uniquely described anchor found in " + std::to_string(kAnchorRetries) +
                                   " tries");
    const auto relation = static_cast<Relation>(rng.below(kRelationNames.size()));
    q.program = make_program(kind, detail::sample_target(scene, rng), relation, *anchor);
  }
  q.text = render_text(q.program);
  return q;
}

}  // namespace focuseval
