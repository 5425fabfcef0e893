#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "valvecav/features.hpp"
#include "valvecav/gbt.hpp"

namespace valvecav::asfe {

enum class AggOp { kMedian, kMean, kMax, kMin };
std::string to_string(AggOp op);
double apply_op(AggOp op, std::span<const double> values);

struct AsfeConfig {
  int k = 5;
  std::vector<AggOp> ops = {AggOp::kMedian, AggOp::kMean, AggOp::kMax, AggOp::kMin};
  gbt::GbtHyperParams probe = [] {
    gbt::GbtHyperParams p;
    p.num_rounds = 50;
    return p;
  }();
  /// Declared category sets; when non-empty every level needs training rows.
  std::vector<double> pressure_levels;
  std::vector<double> opening_levels;
  /// Reject group values unseen at fit time instead of using the global aggregate.
  bool strict = false;

  void validate() const;
};

/// Base features ranked by a probe model's gain importance (ties by name),
/// trained on the table's train-partition rows.
std::vector<std::pair<std::string, double>> rank_base_features(
    const FeatureTable& train_table, const gbt::GbtHyperParams& probe_params, Task task);
std::vector<std::string> top_k(std::span<const std::pair<std::string, double>> ranked, int k);

/// Top-k base features by the probe model's gain importance.
std::vector<std::string> select_top_k(const FeatureTable& train_table, int k,
                                      const gbt::GbtHyperParams& probe_params, Task task);

struct GroupLookup {
  std::map<double, double> by_pressure;
  std::map<double, double> by_opening;
  double global = 0.0;

  bool operator==(const GroupLookup&) const = default;
};

struct AggregationPlan {
  std::vector<std::string> selected;
  std::vector<AggOp> ops;
  std::vector<GroupLookup> lookups;  // index: feature * ops.size() + op
  bool strict = false;

  std::vector<std::string> output_columns() const;
  const GroupLookup& lookup(std::size_t feature, std::size_t op) const {
    return lookups[feature * ops.size() + op];
  }
};

std::string aggregate_column_name(AggOp op, const std::string& feature);

/// Per-group aggregates of each selected feature, fitted on the table's
/// train-partition rows only.
AggregationPlan fit_aggregation(const FeatureTable& table, std::span<const std::string> selected,
                                const AsfeConfig& config);

/// Appends ops.size() * k columns; each value is the mean of the row's
/// pressure-group and opening-group aggregates. Returns the number of cells
/// that used the global fallback.
std::size_t apply_aggregation(FeatureTable& table, const AggregationPlan& plan);

struct CrossPlan {
  std::vector<std::string> sources;
  std::vector<std::string> output_columns() const;
};

inline constexpr double kRatioEpsilon = 1e-12;

/// Ratio and difference for every ordered pair of distinct sources. Ratios
/// with |denominator| < kRatioEpsilon are set to 0. Returns the clamp count.
std::size_t build_crosses(FeatureTable& table, const CrossPlan& plan);

std::size_t expected_aggregate_count(int k, std::size_t num_ops = 4);
std::size_t expected_cross_count(int k, std::size_t num_ops = 4);
/// Cross-feature counts as printed in the published table, for k in [5, 10].
std::optional<std::size_t> published_cross_count(int k);

struct AsfeReport {
  int k = 0;
  std::vector<std::string> selected;
  std::vector<std::pair<std::string, double>> importance;
  std::size_t base_columns = 0;
  std::size_t aggregate_columns = 0;
  std::size_t cross_columns = 0;
  std::size_t total_columns = 0;
  std::size_t train_ratio_clamps = 0;
  std::size_t test_ratio_clamps = 0;
  std::size_t train_group_fallbacks = 0;
  std::size_t test_group_fallbacks = 0;
  std::optional<std::size_t> published_cross_columns;
  std::string discrepancy_note;

  std::string to_json() const;
};

struct AsfeResult {
  FeatureTable train;
  FeatureTable test;
  AsfeReport report;
  AggregationPlan aggregation;
};

/// Selection and aggregation fitted on train; the same transforms applied to both.
AsfeResult run_asfe(const FeatureTable& train_table, const FeatureTable& test_table,
                    const AsfeConfig& config, Task task);

}  // namespace valvecav::asfe
