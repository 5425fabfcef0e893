// Command-line front end: each pipeline stage as a subcommand with
// file-based handoff, plus `run` for the whole chain and `sweep` for grids.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "valvecav/asfe.hpp"
#include "valvecav/dataset.hpp"
#include "valvecav/eval.hpp"
#include "valvecav/features.hpp"
#include "valvecav/gbt.hpp"
#include "valvecav/io.hpp"
#include "valvecav/nosw.hpp"
#include "valvecav/pipeline.hpp"
#include "valvecav/spectrum.hpp"
#include "valvecav/synth.hpp"

namespace fs = std::filesystem;
using namespace valvecav;

namespace {

struct SynthArgs {
  std::string spec;
  std::string out;
  std::size_t per_class = 20;
  std::size_t length = 65536;
  std::uint64_t seed = 0;
};

struct SegmentArgs {
  std::string manifest;
  std::string out;
  std::size_t window_size = 0;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

struct FeaturizeArgs {
  std::string index;
  std::string out;
  std::string dump_spectrum;
};

struct AsfeArgs {
  std::string features;
  std::string out;
  std::string task = "binary";
  int k = 5;
  bool strict = false;
};

struct TrainArgs {
  std::string features;
  std::string out;
  std::string task = "binary";
  std::string params;
  gbt::GbtHyperParams hp;
};

struct PredictArgs {
  std::string model;
  std::string features;
  std::string out;
  std::string partition = "test";
};

struct EvaluateArgs {
  std::string predictions;
  std::string out;
};

struct RunArgs {
  std::string config;
  std::string out;
  std::string manifest;
  std::string task;
  std::size_t window_size = 0;
  std::uint64_t seed = 0;
  int k = 0;
  bool asfe = false;
  bool no_asfe = false;
  bool seed_set = false;
};

int do_synth(const SynthArgs& a) {
  auto spec = a.spec.empty() ? synth::default_spec(a.per_class, a.length, a.seed)
                             : synth::spec_from_json(io::read_text(a.spec));
  const auto data = synth::generate(spec);
  const auto manifest = synth::write_dataset(a.out, data);
  io::write_text(fs::path(a.out) / "synth_spec.json", synth::spec_to_json(spec));
  std::cout << "wrote " << data.records.size() << " signals and " << manifest.string() << '\n';
  return 0;
}

int do_segment(const SegmentArgs& a) {
  const auto manifest = pipeline::stage("load", [&] { return load_manifest(a.manifest); });
  const auto split = pipeline::stage("split", [&] { return split_records(manifest, a.train_fraction, a.seed); });
  const auto records = pipeline::stage("load", [&] { return load_records(manifest); });
  const auto segs = pipeline::stage("segment", [&] { return segment_dataset(records, split, a.window_size); });
  std::vector<Segment> all = segs.train;
  all.insert(all.end(), segs.test.begin(), segs.test.end());
  const auto index = write_segments(a.out, all);
  std::cout << segs.train.size() << " train / " << segs.test.size() << " test segments, index "
            << index.string() << '\n';
  return 0;
}

int do_featurize(const FeaturizeArgs& a) {
  const auto segments = pipeline::stage("load", [&] { return read_segment_index(a.index); });
  if (!a.dump_spectrum.empty()) {
    fs::create_directories(a.dump_spectrum);
    for (const auto& s : segments) {
      write_spectrum_csv(fs::path(a.dump_spectrum) /
                             (s.parent_id + "_w" + std::to_string(s.window_index) + ".csv"),
                         fft_magnitude(s));
    }
  }
  const auto table = pipeline::stage("featurize", [&] { return featurize_segments(segments); });
  write_feature_table(a.out, table);
  std::cout << table.num_rows() << " rows x " << table.num_cols() << " features -> " << a.out << '\n';
  return 0;
}

int do_asfe(const AsfeArgs& a) {
  const Task task = parse_task(a.task);
  const auto table = read_feature_table(a.features);
  asfe::AsfeConfig config;
  config.k = a.k;
  config.strict = a.strict;
  const auto result = pipeline::stage("asfe", [&] {
    return asfe::run_asfe(table.filter(Partition::kTrain), table.filter(Partition::kTest), config, task);
  });
  fs::create_directories(a.out);
  write_feature_table(fs::path(a.out) / "features_train.csv", result.train);
  write_feature_table(fs::path(a.out) / "features_test.csv", result.test);
  io::write_text(fs::path(a.out) / "asfe_report.json", result.report.to_json());
  std::cout << "selected";
  for (const auto& f : result.report.selected) std::cout << ' ' << f;
  std::cout << "; " << result.report.total_columns << " columns\n";
  return 0;
}

int do_train(const TrainArgs& a) {
  const Task task = parse_task(a.task);
  auto hp = a.hp;
  if (!a.params.empty()) hp = pipeline::hyperparams_from_json(io::read_text(a.params), hp);
  const auto table = read_feature_table(a.features).filter(Partition::kTrain);
  const auto model = pipeline::stage("train", [&] { return gbt::train(table, hp, task); });
  gbt::save_model(a.out, model);
  std::cout << "trained " << model.forest.size() << " trees on " << table.num_rows() << " rows -> "
            << a.out << '\n';
  return 0;
}

int do_predict(const PredictArgs& a) {
  const auto model = gbt::load_model(a.model);
  auto table = read_feature_table(a.features);
  if (a.partition != "all") table = table.filter(parse_partition(a.partition));
  const auto probs = pipeline::stage("predict", [&] { return gbt::predict(model, table); });
  const Task task = model.num_classes() == 2 ? Task::kBinary : Task::kFourClass;
  io::write_text(a.out, pipeline::predictions_csv(table, probs, model.class_names.empty()
                                                                     ? class_names(task)
                                                                     : model.class_names,
                                                  task));
  std::cout << table.num_rows() << " predictions -> " << a.out << '\n';
  return 0;
}

int do_evaluate(const EvaluateArgs& a) {
  const auto p = pipeline::read_predictions(a.predictions);
  const std::string task = p.classes.size() == 2 ? "binary" : "four_class";
  const auto report = pipeline::stage("evaluate", [&] {
    return eval::evaluate(p.probabilities, p.actual, p.classes, task);
  });
  eval::write_report(a.out, report);
  std::cout << "accuracy " << report.scores.accuracy << ", auc " << report.roc.auc << " -> "
            << (fs::path(a.out) / "eval.json").string() << '\n';
  return 0;
}

pipeline::PipelineConfig resolve_config(const RunArgs& a) {
  pipeline::PipelineConfig c;
  if (!a.config.empty()) c = pipeline::load_config(a.config);
  if (!a.manifest.empty()) c.manifest = a.manifest;
  if (!a.out.empty()) c.out_dir = a.out;
  if (!a.task.empty()) c.task = parse_task(a.task);
  if (a.window_size > 0) c.window_size = a.window_size;
  if (a.seed_set) {
    c.seed = a.seed;
    c.gbt.seed = a.seed;
    c.asfe.probe.seed = a.seed;
  }
  if (a.k > 0) c.asfe.k = a.k;
  if (a.asfe) c.asfe_enabled = true;
  if (a.no_asfe) c.asfe_enabled = false;
  return c;
}

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--config", a.config, "Pipeline config JSON");
  cmd->add_option("--manifest", a.manifest, "Dataset manifest (overrides config)");
  cmd->add_option("--out", a.out, "Output directory (overrides config)");
  cmd->add_option("--task", a.task, "binary | four_class");
  cmd->add_option("--window-size", a.window_size, "NOSW window size in samples");
  cmd->add_option_function<std::uint64_t>("--seed", [&a](std::uint64_t s) { a.seed = s; a.seed_set = true; },
                                          "Split and model seed");
  cmd->add_option("--k", a.k, "ASFE top-k (5..10)");
  cmd->add_flag("--asfe", a.asfe, "Enable ASFE");
  cmd->add_flag("--no-asfe", a.no_asfe, "Disable ASFE");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"valvecav: acoustic cavitation detection with boosted trees"};
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a labeled synthetic dataset");
  synth_cmd->add_option("--spec", synth_args.spec, "Synthetic spec JSON (default signatures otherwise)");
  synth_cmd->add_option("--out", synth_args.out, "Output directory")->required();
  synth_cmd->add_option("--per-class", synth_args.per_class, "Signals per class (default spec)");
  synth_cmd->add_option("--length", synth_args.length, "Samples per signal (default spec)");
  synth_cmd->add_option("--seed", synth_args.seed, "Seed (default spec)");

  SegmentArgs seg;
  auto* seg_cmd = app.add_subcommand("segment", "Split records and cut non-overlapping windows");
  seg_cmd->add_option("--manifest", seg.manifest, "Dataset manifest")->required();
  seg_cmd->add_option("--window-size", seg.window_size, "Window size in samples")->required();
  seg_cmd->add_option("--out", seg.out, "Output directory")->required();
  seg_cmd->add_option("--train-fraction", seg.train_fraction, "Train fraction");
  seg_cmd->add_option("--seed", seg.seed, "Split seed");

  FeaturizeArgs feat;
  auto* feat_cmd = app.add_subcommand("featurize", "FFT + statistical features for a segment index");
  feat_cmd->add_option("--index", feat.index, "index.csv from `segment`")->required();
  feat_cmd->add_option("--out", feat.out, "Feature CSV")->required();
  feat_cmd->add_option("--dump-spectrum", feat.dump_spectrum, "Write per-segment spectrum CSVs here");

  AsfeArgs asfe_args;
  auto* asfe_cmd = app.add_subcommand("asfe", "Top-k selection, aggregation and cross features");
  asfe_cmd->add_option("--features", asfe_args.features, "Feature CSV with both partitions")->required();
  asfe_cmd->add_option("--out", asfe_args.out, "Output directory")->required();
  asfe_cmd->add_option("--task", asfe_args.task, "binary | four_class");
  asfe_cmd->add_option("--k", asfe_args.k, "Top-k (5..10)");
  asfe_cmd->add_flag("--strict", asfe_args.strict, "Reject group values unseen in training");

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train a boosted-tree model on the train rows");
  train_cmd->add_option("--features", tr.features, "Feature CSV")->required();
  train_cmd->add_option("--out", tr.out, "Model JSON")->required();
  train_cmd->add_option("--task", tr.task, "binary | four_class");
  train_cmd->add_option("--params", tr.params, "Hyperparameter JSON");
  train_cmd->add_option("--rounds", tr.hp.num_rounds, "Boosting rounds");
  train_cmd->add_option("--max-depth", tr.hp.max_depth, "Maximum tree depth");
  train_cmd->add_option("--eta", tr.hp.learning_rate, "Learning rate");
  train_cmd->add_option("--lambda", tr.hp.lambda, "Leaf L2 penalty");
  train_cmd->add_option("--gamma", tr.hp.gamma, "Leaf count penalty");

  PredictArgs pr;
  auto* pred_cmd = app.add_subcommand("predict", "Class probabilities for a feature table");
  pred_cmd->add_option("--model", pr.model, "Model JSON")->required();
  pred_cmd->add_option("--features", pr.features, "Feature CSV")->required();
  pred_cmd->add_option("--out", pr.out, "Predictions CSV")->required();
  pred_cmd->add_option("--partition", pr.partition, "test | train | all");

  EvaluateArgs ev;
  auto* eval_cmd = app.add_subcommand("evaluate", "Metrics, ROC and confusion matrix from predictions");
  eval_cmd->add_option("--predictions", ev.predictions, "Predictions CSV")->required();
  eval_cmd->add_option("--out", ev.out, "Output directory")->required();

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "End-to-end pipeline");
  add_run_options(run_cmd, run);

  RunArgs sweep;
  std::vector<std::size_t> sweep_windows;
  std::vector<int> sweep_ks;
  auto* sweep_cmd = app.add_subcommand("sweep", "Accuracy grid over window sizes and k");
  add_run_options(sweep_cmd, sweep);
  sweep_cmd->add_option("--windows", sweep_windows, "Window sizes")->delimiter(',');
  sweep_cmd->add_option("--ks", sweep_ks, "k values")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::kConfig);
  }

  try {
    if (*synth_cmd) return do_synth(synth_args);
    if (*seg_cmd) return do_segment(seg);
    if (*feat_cmd) return do_featurize(feat);
    if (*asfe_cmd) return do_asfe(asfe_args);
    if (*train_cmd) return do_train(tr);
    if (*pred_cmd) return do_predict(pr);
    if (*eval_cmd) return do_evaluate(ev);
    if (*run_cmd) {
      const auto result = pipeline::cmd_run(resolve_config(run));
      std::cout << "accuracy " << result.run.report.scores.accuracy << ", auc "
                << result.run.report.roc.auc << " -> " << result.out_dir.string() << '\n';
      return 0;
    }
    if (*sweep_cmd) {
      auto c = resolve_config(sweep);
      if (!sweep_windows.empty()) c.sweep_window_sizes = sweep_windows;
      if (!sweep_ks.empty()) c.sweep_ks = sweep_ks;
      const auto rows = pipeline::cmd_sweep(c);
      std::cout << pipeline::sweep_csv(rows);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kData);
  }
  return 0;
}
