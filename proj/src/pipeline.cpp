#include "valvecav/pipeline.hpp"

#include <sstream>

#include <json.hpp>

#include "valvecav/io.hpp"
#include "valvecav/nosw.hpp"

namespace valvecav::pipeline {

using nlohmann::json;

namespace {

gbt::GbtHyperParams params_from(const json& j, gbt::GbtHyperParams p) {
  p.num_rounds = j.value("num_rounds", p.num_rounds);
  p.max_depth = j.value("max_depth", p.max_depth);
  p.learning_rate = j.value("learning_rate", p.learning_rate);
  p.lambda = j.value("lambda", p.lambda);
  p.gamma = j.value("gamma", p.gamma);
  p.min_child_hessian = j.value("min_child_hessian", p.min_child_hessian);
  p.seed = j.value("seed", p.seed);
  return p;
}

json params_to(const gbt::GbtHyperParams& p) {
  return {{"num_rounds", p.num_rounds}, {"max_depth", p.max_depth},
          {"learning_rate", p.learning_rate}, {"lambda", p.lambda},
          {"gamma", p.gamma}, {"min_child_hessian", p.min_child_hessian}, {"seed", p.seed}};
}

}  // namespace

gbt::GbtHyperParams hyperparams_from_json(const std::string& text, gbt::GbtHyperParams defaults) {
  try {
    auto p = params_from(json::parse(text), defaults);
    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("hyperparameters: ") + e.what());
  }
}

void PipelineConfig::validate() const {
  if (manifest.empty()) throw ConfigError("config: manifest path is required");
  if (window_size == 0) throw ConfigError("config: window_size must be positive");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("config: train_fraction must lie in (0, 1)");
  gbt.validate();
  if (asfe_enabled) asfe.validate();
  for (int k : sweep_ks) {
    if (k < 5 || k > 10) throw ConfigError("config: sweep k values must lie in [5, 10]");
  }
}

PipelineConfig config_from_json(const std::string& text, const std::filesystem::path& base_dir) {
  PipelineConfig c;
  try {
    const json j = json::parse(text);
    auto resolve = [&](const std::string& p) {
      std::filesystem::path path(p);
      return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
    };
    if (j.contains("manifest")) c.manifest = resolve(j.at("manifest").get<std::string>());
    if (j.contains("out")) c.out_dir = resolve(j.at("out").get<std::string>());
    c.window_size = j.value("window_size", c.window_size);
    c.train_fraction = j.value("train_fraction", c.train_fraction);
    c.seed = j.value("seed", c.seed);
    if (j.contains("task")) c.task = parse_task(j.at("task").get<std::string>());
    c.asfe_enabled = j.value("asfe_enabled", c.asfe_enabled);
    c.write_engineered_tables = j.value("write_engineered_tables", c.write_engineered_tables);
    if (j.contains("gbt")) c.gbt = params_from(j.at("gbt"), c.gbt);
    c.gbt.seed = j.contains("gbt") && j.at("gbt").contains("seed") ? c.gbt.seed : c.seed;
    c.asfe.probe.seed = c.gbt.seed;
    if (j.contains("asfe")) {
      const auto& a = j.at("asfe");
      c.asfe.k = a.value("k", c.asfe.k);
      c.asfe.strict = a.value("strict", c.asfe.strict);
      if (a.contains("probe")) c.asfe.probe = params_from(a.at("probe"), c.asfe.probe);
    }
    if (j.contains("sweep")) {
      const auto& s = j.at("sweep");
      c.sweep_window_sizes = s.value("window_sizes", c.sweep_window_sizes);
      c.sweep_ks = s.value("ks", c.sweep_ks);
    }
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path)) throw ConfigError("config not found: " + path.string());
  return config_from_json(io::read_text(path), path.parent_path());
}

std::string config_to_json(const PipelineConfig& c) {
  json j;
  j["manifest"] = c.manifest.generic_string();
  j["out"] = c.out_dir.generic_string();
  j["window_size"] = c.window_size;
  j["train_fraction"] = c.train_fraction;
  j["seed"] = c.seed;
  j["task"] = to_string(c.task);
  j["asfe_enabled"] = c.asfe_enabled;
  j["write_engineered_tables"] = c.write_engineered_tables;
  j["gbt"] = params_to(c.gbt);
  j["asfe"] = {{"k", c.asfe.k}, {"strict", c.asfe.strict}, {"probe", params_to(c.asfe.probe)}};
  j["sweep"] = {{"window_sizes", c.sweep_window_sizes}, {"ks", c.sweep_ks}};
  return j.dump(2) + "\n";
}

FeatureSets prepare_features(const std::vector<SignalRecord>& records, const SplitAssignment& split,
                             std::size_t window_size) {
  const auto segmented = stage("segment", [&] { return segment_dataset(records, split, window_size); });
  return stage("featurize", [&] {
    return FeatureSets{featurize_segments(segmented.train), featurize_segments(segmented.test), split};
  });
}

ModelRun fit_and_evaluate(const FeatureTable& train, const FeatureTable& test, Task task,
                          const gbt::GbtHyperParams& params, const asfe::AsfeConfig* asfe_config) {
  ModelRun run;
  if (asfe_config) {
    auto result = stage("asfe", [&] { return asfe::run_asfe(train, test, *asfe_config, task); });
    run.train = std::move(result.train);
    run.test = std::move(result.test);
    run.asfe_report = std::move(result.report);
  } else {
    run.train = train;
    run.test = test;
  }
  run.model = stage("train", [&] { return gbt::train(run.train, params, task); });
  run.test_probabilities = stage("predict", [&] { return gbt::predict(run.model, run.test); });
  run.report = stage("evaluate", [&] {
    const auto labels = gbt::labels_for_task(run.test, task);
    return eval::evaluate(run.test_probabilities, labels, class_names(task), to_string(task));
  });
  return run;
}

std::string predictions_csv(const FeatureTable& table, const std::vector<double>& probabilities,
                            const std::vector<std::string>& classes, Task task) {
  const std::size_t k = classes.size();
  const auto predicted = eval::argmax_rows(probabilities, k);
  std::ostringstream out;
  out << "parent_id,window_index,partition,label,actual,predicted";
  for (const auto& c : classes) out << ",p_" << c;
  out << '\n';
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    const auto& m = table.meta(r);
    out << m.parent_id << ',' << m.window_index << ',' << to_string(m.partition) << ','
        << to_string(m.label) << ',' << class_index(m.label, task) << ',' << predicted[r];
    for (std::size_t c = 0; c < k; ++c) out << ',' << io::format_double(probabilities[r * k + c]);
    out << '\n';
  }
  return out.str();
}

Predictions read_predictions(const std::filesystem::path& path) {
  const auto doc = io::read_csv(path);
  Predictions p;
  std::vector<std::size_t> prob_cols;
  for (std::size_t i = 0; i < doc.header.size(); ++i) {
    if (doc.header[i].rfind("p_", 0) == 0) {
      p.classes.push_back(doc.header[i].substr(2));
      prob_cols.push_back(i);
    }
  }
  if (p.classes.size() < 2) throw DataError(path.string() + ": no probability columns");
  const auto c_actual = doc.column("actual");
  for (const auto& row : doc.rows) {
    p.actual.push_back(static_cast<int>(io::parse_int(row[c_actual], "actual")));
    for (auto c : prob_cols) p.probabilities.push_back(io::parse_double(row[c], doc.header[c]));
  }
  return p;
}

RunResult cmd_run(const PipelineConfig& config) {
  stage("config", [&] { config.validate(); return 0; });
  const auto& out = config.out_dir;
  std::filesystem::create_directories(out);
  std::ostringstream log;
  log << "task " << to_string(config.task) << ", window " << config.window_size << ", seed "
      << config.seed << ", asfe " << (config.asfe_enabled ? "on" : "off") << '\n';

  const auto manifest = stage("load", [&] { return load_manifest(config.manifest); });
  const auto split = stage("split", [&] { return split_records(manifest, config.train_fraction, config.seed); });
  log << "split: " << split.count(Partition::kTrain) << " train / " << split.count(Partition::kTest)
      << " test records\n";
  for (const auto& w : split.warnings) log << "warning: " << w << '\n';
  const auto records = stage("load", [&] { return load_records(manifest); });

  RunResult result;
  result.out_dir = out;
  result.features = prepare_features(records, split, config.window_size);
  log << "segments: " << result.features.train.num_rows() << " train / "
      << result.features.test.num_rows() << " test\n";

  stage("write", [&] {
    write_feature_table(out / "features_train.csv", result.features.train);
    write_feature_table(out / "features_test.csv", result.features.test);
    return 0;
  });

  result.run = fit_and_evaluate(result.features.train, result.features.test, config.task, config.gbt,
                                config.asfe_enabled ? &config.asfe : nullptr);
  const auto& run = result.run;
  if (run.asfe_report) {
    log << "asfe: selected";
    for (const auto& f : run.asfe_report->selected) log << ' ' << f;
    log << "; " << run.asfe_report->total_columns << " columns\n";
    if (!run.asfe_report->discrepancy_note.empty()) log << "asfe: " << run.asfe_report->discrepancy_note << '\n';
  }
  for (const auto& w : run.model.warnings) log << "warning: " << w << '\n';
  log << "accuracy " << io::format_double(run.report.scores.accuracy) << ", auc "
      << io::format_double(run.report.roc.auc) << '\n';

  stage("write", [&] {
    if (run.asfe_report) {
      io::write_text(out / "asfe_report.json", run.asfe_report->to_json());
      if (config.write_engineered_tables) {
        write_feature_table(out / "features_train_asfe.csv", run.train);
        write_feature_table(out / "features_test_asfe.csv", run.test);
      }
    }
    gbt::save_model(out / "model.json", run.model);
    io::write_text(out / "predictions.csv",
                   predictions_csv(run.test, run.test_probabilities, class_names(config.task), config.task));
    eval::write_report(out, run.report);
    io::write_text(out / "config.json", config_to_json(config));
    io::write_text(out / "run.log", log.str());
    return 0;
  });
  return result;
}

std::vector<SweepRow> cmd_sweep(const PipelineConfig& config) {
  stage("config", [&] {
    if (config.sweep_window_sizes.empty()) throw ConfigError("sweep: no window sizes");
    PipelineConfig probe = config;
    probe.window_size = config.sweep_window_sizes.front();
    probe.validate();
    return 0;
  });
  const auto manifest = stage("load", [&] { return load_manifest(config.manifest); });
  const auto split = stage("split", [&] { return split_records(manifest, config.train_fraction, config.seed); });
  const auto records = stage("load", [&] { return load_records(manifest); });

  std::vector<SweepRow> rows;
  for (std::size_t w : config.sweep_window_sizes) {
    const auto features = prepare_features(records, split, w);
    auto record = [&](std::optional<int> k, const ModelRun& run) {
      rows.push_back({w, k, features.train.num_rows(), features.test.num_rows(),
                      run.report.scores.accuracy, run.report.roc.auc});
    };
    record(std::nullopt, fit_and_evaluate(features.train, features.test, config.task, config.gbt, nullptr));
    for (int k : config.sweep_ks) {
      asfe::AsfeConfig a = config.asfe;
      a.k = k;
      record(k, fit_and_evaluate(features.train, features.test, config.task, config.gbt, &a));
    }
  }
  std::filesystem::create_directories(config.out_dir);
  io::write_text(config.out_dir / "sweep.csv", sweep_csv(rows));
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "window_size,k,asfe,train_rows,test_rows,accuracy,auc\n";
  for (const auto& r : rows) {
    out << r.window_size << ',' << (r.k ? std::to_string(*r.k) : std::string("")) << ','
        << (r.k ? 1 : 0) << ',' << r.train_rows << ',' << r.test_rows << ','
        << io::format_double(r.accuracy) << ',' << io::format_double(r.auc) << '\n';
  }
  return out.str();
}

}  // namespace valvecav::pipeline
