// focuseval: generate diagnostic scenes and questions, synthesize oracle
// focus maps, score focus maps per object, and report AUC per category.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "focuseval/focuseval.hpp"

namespace {

using namespace focuseval;

constexpr int kUsage = 1;
constexpr int kFailure = 2;

int run_gen(const GenConfig& cfg, const std::string& out) {
  try {
    const auto ds = generate_dataset(cfg, worker_count());
    write_dataset(ds, out);
    std::cerr << "gen: " << ds.scenes.size() << " scenes, " << ds.questions.size() << " questions -> " << out << "\n";
    return 0;
  } catch (const InvalidArgument& e) {
    std::cerr << "gen: invalid configuration: " << e.what() << "\n";
    return kUsage;
  }
}

int run_oracle(const std::string& kind_name, std::uint64_t seed, int edge_offset, int edge_width,
               const std::string& empty_truth, const std::string& dataset, const std::string& out) {
  OracleKind kind;
  if (kind_name == "perfect") kind = oracle::Perfect{};
  else if (kind_name == "edge") kind = oracle::Edge{edge_offset, edge_width};
  else if (kind_name == "random") kind = oracle::Random{seed};
  else if (kind_name == "all-objects") kind = oracle::AllObjects{};
  else kind = oracle::Uniform{};
  const auto ds = load_dataset(dataset);
  const auto policy = empty_truth == "uniform" ? EmptyTruthPolicy::Uniform : EmptyTruthPolicy::Skip;
  const auto sum = write_oracle_maps(ds, kind, out, policy, worker_count());
  std::cerr << "oracle " << kind_name << ": wrote " << sum.written << " maps";
  if (sum.skipped_empty_truth) std::cerr << ", skipped " << sum.skipped_empty_truth << " questions with empty truth";
  std::cerr << " -> " << out << "\n";
  return 0;
}

int run_score(const std::string& dataset, const std::string& focus, const std::string& out, ScoreOptions opts) {
  const auto ds = load_dataset(dataset);
  const auto run = score_dataset(ds, focus, opts, worker_count());
  write_file_atomic(out, dump_json(scores_to_json(run.scores)));
  std::cerr << "score: " << run.questions_scored << " questions scored";
  if (run.missing_maps) std::cerr << ", " << run.missing_maps << " skipped (missing map)";
  if (run.no_signal) std::cerr << ", " << run.no_signal << " skipped (all-zero map)";
  std::cerr << " -> " << out << "\n";
  return 0;
}

int run_report(const std::vector<std::string>& inputs, const std::string& format, const std::string& aggregation,
               const std::string& out) {
  std::vector<LabeledScore> all;
  for (const auto& path : inputs) {
    auto part = scores_from_json(read_json_file(path));
    all.insert(all.end(), part.begin(), part.end());
  }
  const auto mode = aggregation == "mean" ? Aggregation::PerQuestionMean : Aggregation::Pooled;
  const auto rows = build_report(all, mode);
  const auto text = format == "md" ? render_markdown(rows) : render_csv(rows);
  if (out.empty())
    std::cout << text;
  else
    write_file_atomic(out, text);
  if (all_undefined(rows)) {
    std::cerr << "report: no category has both focused and unfocused objects\n";
    return kFailure;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Focus-map localization evaluation for visual question answering"};
  app.require_subcommand(1);

  GenConfig gen;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "Generate scenes, segmentations and questions");
  gen_cmd->add_option("--seed", gen.seed, "Base random seed")->capture_default_str();
  gen_cmd->add_option("--scenes", gen.num_scenes, "Number of scenes")->capture_default_str();
  gen_cmd->add_option("--questions-per-template", gen.questions_per_template, "Questions per template and scene")
      ->capture_default_str();
  gen_cmd->add_option("--width", gen.scene.width, "Canvas width in pixels")->capture_default_str();
  gen_cmd->add_option("--height", gen.scene.height, "Canvas height in pixels")->capture_default_str();
  gen_cmd->add_option("--min-objects", gen.scene.min_objects)->capture_default_str();
  gen_cmd->add_option("--max-objects", gen.scene.max_objects)->capture_default_str();
  gen_cmd->add_option("--small-radius", gen.scene.small_radius)->capture_default_str();
  gen_cmd->add_option("--large-radius", gen.scene.large_radius)->capture_default_str();
  gen_cmd->add_option("--min-gap", gen.scene.min_gap)->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "Output dataset directory")->required();

  std::string kind, oracle_dataset, oracle_out, empty_truth = "skip";
  std::uint64_t oracle_seed = 0;
  int edge_offset = 2, edge_width = 2;
  auto* oracle_cmd = app.add_subcommand("oracle", "Write synthetic focus maps for every question");
  oracle_cmd->add_option("--kind", kind, "Oracle variant")
      ->required()
      ->check(CLI::IsMember({"perfect", "edge", "random", "all-objects", "uniform"}));
  oracle_cmd->add_option("--seed", oracle_seed, "Seed for the random oracle")->capture_default_str();
  oracle_cmd->add_option("--edge-offset", edge_offset, "Edge ring distance from the object")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  oracle_cmd->add_option("--edge-width", edge_width, "Edge ring width")->check(CLI::PositiveNumber)->capture_default_str();
  oracle_cmd->add_option("--empty-truth", empty_truth, "Perfect/edge maps for questions with no focused object")
      ->check(CLI::IsMember({"skip", "uniform"}))
      ->capture_default_str();
  oracle_cmd->add_option("--dataset", oracle_dataset, "Dataset directory")->required();
  oracle_cmd->add_option("--out", oracle_out, "Output directory for FMAP files")->required();

  std::string score_dataset_dir, focus_dir, score_out, method = "blur";
  ScoreOptions score_opts;
  std::string source;
  auto* score_cmd = app.add_subcommand("score", "Score focus maps per object");
  score_cmd->add_option("--dataset", score_dataset_dir, "Dataset directory")->required();
  score_cmd->add_option("--focus", focus_dir, "Directory of <question_id>.fmap files")->required();
  score_cmd->add_option("--out", score_out, "Output scores JSON")->required();
  score_cmd->add_option("--sigma", score_opts.blur.sigma, "Decay-mask Gaussian sigma in pixels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  score_cmd->add_option("--method", method, "Object score")->check(CLI::IsMember({"plain", "blur"}))->capture_default_str();
  score_cmd->add_flag("--include-anchor", score_opts.include_anchor, "Label the relation anchor as focused");
  score_cmd->add_option("--source", source, "Row name in reports (default: <focus dir name>/<method>)");

  std::vector<std::string> report_inputs;
  std::string format = "md", aggregation = "pooled", report_out;
  auto* report_cmd = app.add_subcommand("report", "AUC table per focus-map source and question category");
  report_cmd->add_option("--scores", report_inputs, "Scores JSON file(s)")->required();
  report_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "md"}))->capture_default_str();
  report_cmd->add_option("--aggregation", aggregation)->check(CLI::IsMember({"pooled", "mean"}))->capture_default_str();
  report_cmd->add_option("--out", report_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen, gen_out);
    if (*oracle_cmd)
      return run_oracle(kind, oracle_seed, edge_offset, edge_width, empty_truth, oracle_dataset, oracle_out);
    if (*score_cmd) {
      score_opts.method = method == "plain" ? ScoreMethod::Plain : ScoreMethod::Blur;
      if (source.empty()) {
        auto dir = std::filesystem::path(focus_dir).lexically_normal();
        if (!dir.has_filename()) dir = dir.parent_path();
        source = (dir.filename().empty() ? std::string("focus") : dir.filename().string()) + "/" + method;
      }
      score_opts.source = source;
      return run_score(score_dataset_dir, focus_dir, score_out, score_opts);
    }
    if (*report_cmd) return run_report(report_inputs, format, aggregation, report_out);
  } catch (const std::exception& e) {
    std::cerr << app.get_subcommands().front()->get_name() << ": " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
