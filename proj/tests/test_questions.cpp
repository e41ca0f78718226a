#include <gtest/gtest.h>

#include "focuseval/questions.hpp"
#include "focuseval/questions_io.hpp"
#include "support/reference.hpp"

using namespace focuseval;

namespace {

ObjectSpec obj(ObjectId id, Color c, Shape s, int cx, int cy = 50) {
  ObjectSpec o;
  o.id = id;
  o.color = c;
  o.shape = s;
  o.cx = cx;
  o.cy = cy;
  o.extent = 6;
  return o;
}

Program prog(std::vector<Step> steps) { return Program{std::move(steps)}; }

}  // namespace

TEST(Execute, GreenSphereExists) {
  const Scene scene{100, 100, 0, {obj(1, Color::Green, Shape::Sphere, 20)}};
  const auto p = prog({step::Filter{{.color = Color::Green}}, step::Filter{{.shape = Shape::Sphere}}, step::Exist{}});
  const auto t = execute(p, scene);
  EXPECT_EQ(t.answer, (std::variant<bool, std::uint32_t>(true)));
  EXPECT_EQ(t.focused, std::vector<ObjectId>{1});
  EXPECT_FALSE(t.anchor);
}

TEST(Execute, EmptyMatch) {
  const Scene scene{100, 100, 0, {obj(1, Color::Red, Shape::Cube, 20)}};
  const auto t = execute(prog({step::Filter{{.color = Color::Blue}}, step::Exist{}}), scene);
  EXPECT_EQ(t.answer, (std::variant<bool, std::uint32_t>(false)));
  EXPECT_TRUE(t.focused.empty());
}

TEST(Execute, RelationLeftOf) {
  const Scene scene{100, 100, 0, {obj(1, Color::Red, Shape::Cube, 10), obj(2, Color::Red, Shape::Sphere, 50)}};
  const auto p = prog({step::Filter{{.shape = Shape::Sphere}}, step::Unique{}, step::Relate{Relation::Left},
                       step::Filter{{.shape = Shape::Cube}}, step::Exist{}});
  const auto t = execute(p, scene);
  const auto naive = reference::naive_answer(p, scene);
  EXPECT_EQ(std::set<ObjectId>(t.focused.begin(), t.focused.end()), naive.focused);
  EXPECT_EQ(t.focused, std::vector<ObjectId>{1});
  EXPECT_EQ(t.answer, (std::variant<bool, std::uint32_t>(true)));
  EXPECT_EQ(t.anchor, std::optional<ObjectId>(2));
}

TEST(Execute, CountAndTies) {
  const Scene scene{100, 100, 0,
                    {obj(1, Color::Red, Shape::Cube, 10), obj(2, Color::Red, Shape::Cube, 30),
                     obj(3, Color::Blue, Shape::Sphere, 30)}};
  // object 2 shares x with the anchor, so it is neither left nor right
  const auto p = prog({step::Filter{{.color = Color::Blue}}, step::Unique{}, step::Relate{Relation::Left},
                       step::Filter{{.color = Color::Red}}, step::Count{}});
  const auto t = execute(p, scene);
  EXPECT_EQ(t.answer, (std::variant<bool, std::uint32_t>(1u)));
  EXPECT_EQ(t.focused, std::vector<ObjectId>{1});
}

TEST(Execute, NonUniqueAnchorThrows) {
  const Scene scene{100, 100, 0, {obj(1, Color::Red, Shape::Cube, 10), obj(2, Color::Red, Shape::Cube, 60)}};
  const auto p = prog({step::Filter{{.color = Color::Red}}, step::Unique{}, step::Relate{Relation::Left},
                       step::Filter{{.shape = Shape::Cube}}, step::Exist{}});
  EXPECT_THROW(execute(p, scene), NonUniqueAnchor);
}

TEST(Program, ValidationRejectsMalformed) {
  EXPECT_THROW(prog({step::Exist{}}).validate(), InvalidProgram);
  EXPECT_THROW(prog({step::Filter{{.color = Color::Red}}}).validate(), InvalidProgram);
  EXPECT_THROW(prog({step::Filter{{}}, step::Exist{}}).validate(), InvalidProgram);
  EXPECT_THROW(prog({step::Filter{{.color = Color::Red}}, step::Relate{Relation::Left},
                     step::Filter{{.color = Color::Red}}, step::Exist{}})
                   .validate(),
               InvalidProgram);
  EXPECT_THROW(prog({step::Filter{{.color = Color::Red}}, step::Exist{}, step::Count{}}).validate(), InvalidProgram);
  EXPECT_THROW(prog({step::Filter{{.color = Color::Red}}, step::Unique{}, step::Relate{Relation::Left},
                     step::Filter{{.color = Color::Red}}, step::Unique{}, step::Relate{Relation::Left},
                     step::Filter{{.color = Color::Red}}, step::Exist{}})
                   .validate(),
               InvalidProgram);
}

TEST(RenderText, TemplateExamples) {
  EXPECT_EQ(render_text(prog({step::Filter{{.color = Color::Blue}}, step::Exist{}})), "Is there a blue object?");
  EXPECT_EQ(render_text(prog({step::Filter{{.color = Color::Green, .shape = Shape::Sphere}}, step::Exist{}})),
            "Is there a green sphere?");
  EXPECT_EQ(render_text(prog({step::Filter{{.color = Color::Red}}, step::Count{}})), "How many red objects are there?");
  EXPECT_EQ(render_text(make_program(QuestionKind::Exist, {.size = Size::Large, .material = Material::Metal},
                                     Relation::Front, {.color = Color::Cyan, .shape = Shape::Cylinder})),
            "Is there a large metal object that is in front of the cyan cylinder?");
  EXPECT_EQ(render_text(make_program(QuestionKind::Count, {.shape = Shape::Cube}, Relation::Behind,
                                     {.size = Size::Small, .color = Color::Gray, .material = Material::Rubber,
                                      .shape = Shape::Sphere})),
            "How many cubes are behind the small gray rubber sphere?");
}

TEST(RenderText, ConflictingFiltersAreUnrenderable) {
  EXPECT_THROW(render_text(prog({step::Filter{{.color = Color::Red}}, step::Filter{{.color = Color::Blue}},
                                 step::Exist{}})),
               InvalidProgram);
}

TEST(ParseText, InvertsRendering) {
  for (const char* text : {"Is there a blue object?", "How many large red metal cubes are there?",
                           "Is there a sphere that is left of the small yellow object?",
                           "How many rubber objects are right of the brown cylinder?"}) {
    EXPECT_EQ(render_text(parse_question_text(text)), text);
  }
  EXPECT_THROW(parse_question_text("Is there a blue object"), FormatError);
  EXPECT_THROW(parse_question_text("Is there a object?"), FormatError);
  EXPECT_THROW(parse_question_text("Is there a orange cube?"), FormatError);
  EXPECT_THROW(parse_question_text("Are there more red objects than blue objects?"), FormatError);
}

TEST(Instantiate, GreenSphereQuestion) {
  const Scene scene{100, 100, 0, {obj(1, Color::Green, Shape::Sphere, 50)}};
  const AttrFilter color_and_shape{.color = Color::Green, .shape = Shape::Sphere};
  bool found = false;
  for (std::uint64_t seed = 0; seed < 500 && !found; ++seed) {
    Rng rng(seed);
    const auto q = instantiate(scene, QuestionKind::Exist, 0, rng);
    if (q.program == make_program(QuestionKind::Exist, color_and_shape)) {
      EXPECT_EQ(q.text, "Is there a green sphere?");
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Instantiate, TemplatesAndAnchors) {
  const Scene scene{100, 100, 0, {obj(1, Color::Green, Shape::Sphere, 20), obj(2, Color::Red, Shape::Cube, 70)}};
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto count = instantiate(scene, QuestionKind::Count, 0, rng);
    EXPECT_EQ(count.text.rfind("How many", 0), 0u);
    EXPECT_EQ(count.relation_arity, 0);

    const auto rel = instantiate(scene, QuestionKind::Exist, 1, rng);
    EXPECT_EQ(rel.program.relation_arity(), 1);
    int relates = 0;
    for (const auto& s : rel.program.steps) relates += std::holds_alternative<step::Relate>(s);
    EXPECT_EQ(relates, 1);
    const auto naive = reference::naive_answer(rel.program, scene);
    EXPECT_FALSE(naive.ambiguous_anchor);
    EXPECT_NO_THROW(execute(rel.program, scene));
    EXPECT_EQ(render_text(parse_question_text(rel.text)), rel.text);
  }
}

TEST(Instantiate, Preconditions) {
  const Scene one{100, 100, 0, {obj(1, Color::Green, Shape::Sphere, 20)}};
  Rng rng(1);
  EXPECT_THROW(instantiate(one, QuestionKind::Exist, 1, rng), InvalidArgument);
  EXPECT_THROW(instantiate(one, QuestionKind::Exist, 2, rng), InvalidArgument);
  // identical twins: no description picks out exactly one object
  const Scene twins{100, 100, 0, {obj(1, Color::Red, Shape::Cube, 20), obj(2, Color::Red, Shape::Cube, 60)}};
  EXPECT_THROW(instantiate(twins, QuestionKind::Count, 1, rng), InstantiationExhausted);
}

TEST(Properties, RelationAntisymmetry) {
  Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    auto a = obj(1, Color::Red, Shape::Cube, static_cast<int>(rng.between(0, 9)), static_cast<int>(rng.between(0, 9)));
    auto b = obj(2, Color::Red, Shape::Cube, static_cast<int>(rng.between(0, 9)), static_cast<int>(rng.between(0, 9)));
    EXPECT_EQ(related(b, Relation::Left, a), related(a, Relation::Right, b));
    EXPECT_EQ(related(b, Relation::Front, a), related(a, Relation::Behind, b));
  }
}

TEST(Properties, ExistCountConsistency) {
  SceneConfig cfg;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto scene = generate_scene(cfg, seed);
    Rng rng(seed);
    for (int arity : {0, 1}) {
      const auto q = instantiate(scene, QuestionKind::Count, arity, rng);
      auto exist_prog = q.program;
      exist_prog.steps.back() = step::Exist{};
      const auto c = execute(q.program, scene);
      const auto e = execute(exist_prog, scene);
      EXPECT_EQ(std::get<bool>(e.answer), std::get<std::uint32_t>(c.answer) > 0);
      EXPECT_EQ(e.focused, c.focused);
      EXPECT_EQ(e.anchor, c.anchor);
      if (c.anchor) {
        EXPECT_FALSE(std::binary_search(c.focused.begin(), c.focused.end(), *c.anchor));
      }
    }
  }
}

TEST(QuestionIo, JsonRoundTrip) {
  const auto scene = generate_scene(SceneConfig{}, 8);
  Rng rng(8);
  for (int arity : {0, 1})
    for (auto kind : {QuestionKind::Exist, QuestionKind::Count}) {
      QuestionRecord rec;
      rec.question = instantiate(scene, kind, arity, rng);
      rec.question.id = 12;
      rec.question.scene_id = 3;
      rec.truth = execute(rec.question.program, scene);
      const auto j = nlohmann::json::parse(question_to_json(rec).dump());
      EXPECT_EQ(question_from_json(j), rec);
      EXPECT_EQ(j["anchor"].is_null(), arity == 0);
      EXPECT_EQ(j["answer"].is_boolean(), kind == QuestionKind::Exist);
    }
}
