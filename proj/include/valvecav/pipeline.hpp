#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "valvecav/asfe.hpp"
#include "valvecav/dataset.hpp"
#include "valvecav/eval.hpp"
#include "valvecav/features.hpp"
#include "valvecav/gbt.hpp"

namespace valvecav::pipeline {

/// Reference window sizes for full-length signals.
inline const std::vector<std::size_t> kPublishedWindowSizes = {
    2334720, 1556480, 1167360, 933888, 778240, 667062, 583680, 518825, 466944};

struct PipelineConfig {
  std::filesystem::path manifest;
  std::size_t window_size = 0;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  Task task = Task::kBinary;
  bool asfe_enabled = true;
  asfe::AsfeConfig asfe;
  gbt::GbtHyperParams gbt;
  std::filesystem::path out_dir = "out";
  bool write_engineered_tables = true;
  std::vector<std::size_t> sweep_window_sizes;
  std::vector<int> sweep_ks = {5, 6, 7, 8, 9, 10};

  void validate() const;
};

/// Relative manifest/out paths resolve against base_dir.
PipelineConfig config_from_json(const std::string& text, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const PipelineConfig& config);

/// Base feature tables of both partitions.
struct FeatureSets {
  FeatureTable train;
  FeatureTable test;
  SplitAssignment split;
};

FeatureSets prepare_features(const std::vector<SignalRecord>& records, const SplitAssignment& split,
                             std::size_t window_size);

struct ModelRun {
  gbt::GbtModel model;
  FeatureTable train;  // tables the model saw (engineered when ASFE ran)
  FeatureTable test;
  std::optional<asfe::AsfeReport> asfe_report;
  std::vector<double> test_probabilities;
  eval::EvalReport report;
};

/// Optional ASFE, then train on train rows and evaluate on test rows.
ModelRun fit_and_evaluate(const FeatureTable& train, const FeatureTable& test, Task task,
                          const gbt::GbtHyperParams& params, const asfe::AsfeConfig* asfe_config);

struct RunResult {
  ModelRun run;
  FeatureSets features;
  std::filesystem::path out_dir;
};

/// split -> segment -> FFT -> features -> (ASFE) -> train -> predict -> evaluate,
/// writing every artifact under config.out_dir.
RunResult cmd_run(const PipelineConfig& config);

struct SweepRow {
  std::size_t window_size = 0;
  std::optional<int> k;  // empty: ASFE disabled
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  double accuracy = 0.0;
  double auc = 0.0;
};

/// Accuracy grid over (window size x k), plus an ASFE-disabled row per window.
std::vector<SweepRow> cmd_sweep(const PipelineConfig& config);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Predictions file: identifying columns, actual/predicted class and one
/// probability column per class.
std::string predictions_csv(const FeatureTable& table, const std::vector<double>& probabilities,
                            const std::vector<std::string>& classes, Task task);

struct Predictions {
  std::vector<std::string> classes;
  std::vector<int> actual;
  std::vector<double> probabilities;
};
Predictions read_predictions(const std::filesystem::path& path);

/// Runs fn and prefixes any library error with the stage name (exit code kept).
template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), "stage '" + name + "': " + e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    throw Error(ExitCode::kData, "stage '" + name + "': " + e.what());
  }
}

gbt::GbtHyperParams hyperparams_from_json(const std::string& text, gbt::GbtHyperParams defaults = {});

}  // namespace valvecav::pipeline
