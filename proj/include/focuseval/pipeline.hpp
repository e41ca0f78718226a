#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "focuseval/focus.hpp"
#include "focuseval/metrics.hpp"
#include "focuseval/oracles.hpp"
#include "focuseval/parallel.hpp"
#include "focuseval/questions.hpp"
#include "focuseval/questions_io.hpp"
#include "focuseval/report.hpp"
#include "focuseval/scene.hpp"
#include "focuseval/scene_io.hpp"

// On-disk dataset layout written by `gen`:
//   dataset.json              generation parameters
//   scenes.json               list of scenes, each with its "id"
//   segmentation/<id>.smap    one SMAP per scene
//   questions.json            questions with ground truth

namespace focuseval {

namespace fs = std::filesystem;

struct GenConfig {
  std::uint64_t seed = 0;
  int num_scenes = 250;
  int questions_per_template = 2;
  SceneConfig scene;
  int scene_retries = 10;  // fresh scene draws when placement or anchoring fails

  void validate() const {
    if (num_scenes < 1) throw InvalidArgument("number of scenes must be positive");
    if (questions_per_template < 1) throw InvalidArgument("questions per template must be positive");
    if (scene_retries < 1) throw InvalidArgument("scene retries must be positive");
    scene.validate();
  }
};

struct Dataset {
  GenConfig config;
  std::vector<Scene> scenes;              // index = scene id
  std::vector<SegmentationMap> segments;  // index = scene id
  std::vector<QuestionRecord> questions;  // ascending id
};

/// Scenes are drawn from per-scene seeds derived from (seed, scene index,
/// attempt). Each (scene, template) pair gets its own question stream.
/// Question ids run scene by scene, then template column order.
inline Dataset generate_dataset(const GenConfig& cfg, unsigned threads = 1) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.num_scenes);
  Dataset ds;
  ds.config = cfg;
  ds.scenes.resize(n);
  ds.segments.resize(n);
  std::vector<std::vector<QuestionRecord>> per_scene(n);

  parallel_for(n, threads, [&](std::size_t s) {
    for (int attempt = 0;; ++attempt) {
      try {
        Scene scene = generate_scene(cfg.scene, derive_seed(cfg.seed, {s, static_cast<std::uint64_t>(attempt)}));
        std::vector<QuestionRecord> qs;
        for (std::size_t t = 0; t < kCategories.size(); ++t) {
          Rng rng(derive_seed(scene.seed, {t}));
          for (int k = 0; k < cfg.questions_per_template; ++k) {
            QuestionRecord rec;
            rec.question = instantiate(scene, kCategories[t].kind, kCategories[t].relation_arity, rng);
            rec.question.scene_id = static_cast<std::uint32_t>(s);
            rec.truth = execute(rec.question.program, scene);
            qs.push_back(std::move(rec));
          }
        }
        ds.segments[s] = rasterize_segmentation(scene);
        ds.scenes[s] = std::move(scene);
        per_scene[s] = std::move(qs);
        return;
      } catch (const PlacementExhausted&) {
        if (attempt + 1 >= cfg.scene_retries) throw;
      } catch (const InstantiationExhausted&) {
        if (attempt + 1 >= cfg.scene_retries) throw;
      } catch (const InvalidArgument&) {
        // scene too small for a relation question
        if (attempt + 1 >= cfg.scene_retries)
          throw InstantiationExhausted("scene " + std::to_string(s) + " never had enough objects for relation questions");
      }
    }
  });

  std::uint32_t next_id = 0;
  for (auto& qs : per_scene)
    for (auto& rec : qs) {
      rec.question.id = next_id++;
      ds.questions.push_back(std::move(rec));
    }
  return ds;
}

// --- file helpers -------------------------------------------------------------

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
inline void write_file_atomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw IoError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json read_json_file(const fs::path& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

inline std::string dump_json(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

inline fs::path smap_path(const fs::path& dir, std::size_t scene_id) {
  return dir / "segmentation" / (std::to_string(scene_id) + ".smap");
}

inline fs::path fmap_path(const fs::path& dir, std::uint32_t question_id) {
  return dir / (std::to_string(question_id) + ".fmap");
}

inline nlohmann::ordered_json gen_config_to_json(const GenConfig& c) {
  return {{"seed", c.seed},
          {"num_scenes", c.num_scenes},
          {"questions_per_template", c.questions_per_template},
          {"scene",
           {{"width", c.scene.width},
            {"height", c.scene.height},
            {"min_objects", c.scene.min_objects},
            {"max_objects", c.scene.max_objects},
            {"small_radius", c.scene.small_radius},
            {"large_radius", c.scene.large_radius},
            {"min_gap", c.scene.min_gap},
            {"placement_attempts", c.scene.placement_attempts}}},
          {"scene_retries", c.scene_retries}};
}

inline GenConfig gen_config_from_json(const nlohmann::json& j) {
  GenConfig c;
  c.seed = j.at("seed").get<std::uint64_t>();
  c.num_scenes = j.at("num_scenes").get<int>();
  c.questions_per_template = j.at("questions_per_template").get<int>();
  const auto& s = j.at("scene");
  c.scene.width = s.at("width").get<int>();
  c.scene.height = s.at("height").get<int>();
  c.scene.min_objects = s.at("min_objects").get<int>();
  c.scene.max_objects = s.at("max_objects").get<int>();
  c.scene.small_radius = s.at("small_radius").get<int>();
  c.scene.large_radius = s.at("large_radius").get<int>();
  c.scene.min_gap = s.at("min_gap").get<int>();
  c.scene.placement_attempts = s.at("placement_attempts").get<int>();
  c.scene_retries = j.value("scene_retries", 10);
  return c;
}

inline void write_dataset(const Dataset& ds, const fs::path& dir) {
  fs::create_directories(dir / "segmentation");
  write_file_atomic(dir / "dataset.json", dump_json(gen_config_to_json(ds.config)));

  auto scenes = nlohmann::ordered_json::array();
  for (std::size_t s = 0; s < ds.scenes.size(); ++s) {
    nlohmann::ordered_json j{{"id", s}};
    const auto body = scene_to_json(ds.scenes[s]);
    for (const auto& [k, v] : body.items()) j[k] = v;
    scenes.push_back(std::move(j));
  }
  write_file_atomic(dir / "scenes.json", dump_json(scenes));

  for (std::size_t s = 0; s < ds.segments.size(); ++s) {
    std::ostringstream out;
    write_smap(out, ds.segments[s]);
    write_file_atomic(smap_path(dir, s), out.str());
  }

  auto questions = nlohmann::ordered_json::array();
  for (const auto& rec : ds.questions) questions.push_back(question_to_json(rec));
  write_file_atomic(dir / "questions.json", dump_json(questions));
}

inline Dataset load_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("dataset directory not found: " + dir.string());
  Dataset ds;
  try {
    ds.config = gen_config_from_json(read_json_file(dir / "dataset.json"));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed dataset.json: ") + e.what());
  }
  const auto scenes = read_json_file(dir / "scenes.json");
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    if (scenes[s].value("id", s) != s) throw FormatError("scenes.json must list scene ids 0..N-1 in order");
    ds.scenes.push_back(scene_from_json(scenes[s]));
    std::istringstream in(read_file(smap_path(dir, s)));
    auto seg = read_smap(in);
    if (seg.width() != static_cast<std::size_t>(ds.scenes.back().width) ||
        seg.height() != static_cast<std::size_t>(ds.scenes.back().height))
      throw DimensionMismatch("segmentation " + std::to_string(s) + " does not match its scene canvas");
    ds.segments.push_back(std::move(seg));
  }
  for (const auto& j : read_json_file(dir / "questions.json")) {
    auto rec = question_from_json(j);
    if (rec.question.scene_id >= ds.scenes.size())
      throw FormatError("question " + std::to_string(rec.question.id) + " refers to an unknown scene");
    ds.questions.push_back(std::move(rec));
  }
  return ds;
}

// --- oracle maps ----------------------------------------------------------------

enum class EmptyTruthPolicy { Skip, Uniform };

struct OracleSummary {
  std::size_t written = 0;
  std::size_t skipped_empty_truth = 0;
};

/// Writes `<question_id>.fmap` per question. Perfect and Edge maps for a
/// question with an empty focused set are skipped or replaced by a uniform
/// map, per `policy`.
inline OracleSummary write_oracle_maps(const Dataset& ds, const OracleKind& kind, const fs::path& out_dir,
                                       EmptyTruthPolicy policy = EmptyTruthPolicy::Skip, unsigned threads = 1) {
  fs::create_directories(out_dir);
  std::vector<char> written(ds.questions.size(), 0);
  parallel_for(ds.questions.size(), threads, [&](std::size_t i) {
    const auto& rec = ds.questions[i];
    const auto& scene = ds.scenes[rec.question.scene_id];
    const auto& seg = ds.segments[rec.question.scene_id];
    FocusMap fm;
    try {
      fm = synthesize(scene, seg, rec.truth, rec.question.id, kind);
    } catch (const EmptyTruth&) {
      if (policy == EmptyTruthPolicy::Skip) return;
      fm = synthesize(scene, seg, rec.truth, rec.question.id, oracle::Uniform{});
    }
    std::ostringstream out;
    write_focus_map(out, fm);
    write_file_atomic(fmap_path(out_dir, rec.question.id), out.str());
    written[i] = 1;
  });
  OracleSummary sum;
  for (char w : written) (w ? sum.written : sum.skipped_empty_truth)++;
  return sum;
}

// --- scoring ------------------------------------------------------------------

enum class ScoreMethod { Plain, Blur };

inline std::string_view to_string(ScoreMethod m) { return m == ScoreMethod::Plain ? "plain" : "blur"; }

struct ScoreOptions {
  ScoreMethod method = ScoreMethod::Blur;
  BlurConfig blur;
  bool include_anchor = false;  // label the relation anchor as focused too
  std::string source = "default";
};

struct ScoreRun {
  std::vector<LabeledScore> scores;  // sorted by (question id, object id)
  std::size_t questions_scored = 0;
  std::size_t missing_maps = 0;
  std::size_t no_signal = 0;
};

/// Scores every question that has a focus map in `focus_dir`. Maps are
/// normalized per question; missing and all-zero maps are counted and
/// skipped. A map whose size differs from its scene throws DimensionMismatch.
inline ScoreRun score_dataset(const Dataset& ds, const fs::path& focus_dir, const ScoreOptions& opts,
                              unsigned threads = 1) {
  if (!fs::is_directory(focus_dir)) throw IoError("focus map directory not found: " + focus_dir.string());
  opts.blur.validate();

  std::vector<std::vector<std::size_t>> by_scene(ds.scenes.size());
  for (std::size_t i = 0; i < ds.questions.size(); ++i) by_scene[ds.questions[i].question.scene_id].push_back(i);

  struct Slot {
    std::vector<LabeledScore> scores;
    std::size_t scored = 0, missing = 0, no_signal = 0;
  };
  std::vector<Slot> slots(ds.scenes.size());

  parallel_for(ds.scenes.size(), threads, [&](std::size_t s) {
    if (by_scene[s].empty()) return;
    const auto& seg = ds.segments[s];
    const DecayMaskSet masks = build_decay_masks(seg, opts.blur);
    auto& slot = slots[s];
    for (std::size_t qi : by_scene[s]) {
      const auto& rec = ds.questions[qi];
      const auto path = fmap_path(focus_dir, rec.question.id);
      if (!fs::exists(path)) {
        ++slot.missing;
        continue;
      }
      std::istringstream in(read_file(path));
      FocusMap fm = load_focus_map(in);
      if (!fm.values.same_shape(seg.labels))
        throw DimensionMismatch("focus map " + path.string() + " is " + std::to_string(fm.width()) + "x" +
                                std::to_string(fm.height()) + ", scene is " + std::to_string(seg.width()) + "x" +
                                std::to_string(seg.height()));
      try {
        fm = normalize(fm);
      } catch (const NoSignal&) {
        ++slot.no_signal;
        continue;
      }
      ++slot.scored;
      const auto& focused = rec.truth.focused;
      for (const auto& os : score_objects(fm, seg, masks)) {
        const bool positive = std::binary_search(focused.begin(), focused.end(), os.object_id) ||
                              (opts.include_anchor && rec.truth.anchor == os.object_id);
        slot.scores.push_back({opts.source, rec.question.id, {rec.question.kind, rec.question.relation_arity},
                               os.object_id, opts.method == ScoreMethod::Plain ? os.plain : os.blurred, positive});
      }
    }
  });

  ScoreRun run;
  for (auto& slot : slots) {
    run.scores.insert(run.scores.end(), slot.scores.begin(), slot.scores.end());
    run.questions_scored += slot.scored;
    run.missing_maps += slot.missing;
    run.no_signal += slot.no_signal;
  }
  std::sort(run.scores.begin(), run.scores.end(), [](const LabeledScore& a, const LabeledScore& b) {
    return std::tie(a.question_id, a.object_id) < std::tie(b.question_id, b.object_id);
  });
  return run;
}

}  // namespace focuseval
