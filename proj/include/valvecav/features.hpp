#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "valvecav/dataset.hpp"
#include "valvecav/nosw.hpp"
#include "valvecav/spectrum.hpp"

namespace valvecav {

inline constexpr std::size_t kNumBaseFeatures = 15;

/// Column names of the statistical features, in table order.
inline constexpr std::array<std::string_view, kNumBaseFeatures> kBaseFeatureNames = {
    "mean", "median", "q1", "q3", "min", "max", "iqr", "std",
    "rms", "sra", "kurtosis", "skewness", "shape_factor", "clearance_factor", "crest_factor"};

/// Provenance and grouping columns carried alongside every feature row.
struct RowMeta {
  std::string parent_id;
  std::size_t window_index = 0;
  Partition partition = Partition::kTrain;
  double upstream_pressure = 0.0;
  double valve_opening = 0.0;
  FlowState label = FlowState::kNoFlow;
  bool degenerate = false;
};

struct FeatureVector {
  // central tendency
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  // dispersion
  double min = 0.0;
  double max = 0.0;
  double iqr = 0.0;
  double std = 0.0;
  double rms = 0.0;
  double sra = 0.0;
  // shape
  double kurtosis = 0.0;
  double skewness = 0.0;
  double shape_factor = 0.0;
  double clearance_factor = 0.0;
  double crest_factor = 0.0;

  /// Set when the input is constant (sigma = 0): kurtosis and skewness are 0
  /// instead of 0/0, and an all-zero input reports unit shape ratios.
  bool degenerate = false;
  RowMeta meta;

  std::array<double, kNumBaseFeatures> values() const;
};

/// Order statistic rule for quartiles on an ascending sequence: if n*p is an
/// integer, the mean of the (np)-th and (np+1)-th values (1-based), otherwise
/// the (floor(np)+1)-th value.
double quantile_sorted(std::span<const double> sorted, double p);

/// Statistics of a magnitude sequence (n >= 4).
FeatureVector extract_features(std::span<const double> values);
FeatureVector extract_features(const Spectrum& spectrum);

/// Rectangular table: numeric feature columns (row-major) plus per-row metadata.
class FeatureTable {
 public:
  FeatureTable() = default;
  explicit FeatureTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t num_rows() const { return meta_.size(); }
  std::size_t num_cols() const { return columns_.size(); }

  const RowMeta& meta(std::size_t row) const { return meta_[row]; }
  const std::vector<RowMeta>& metas() const { return meta_; }

  double at(std::size_t row, std::size_t col) const { return values_[row * columns_.size() + col]; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * columns_.size(), columns_.size()};
  }
  std::vector<double> column(std::size_t col) const;
  std::vector<double> column(std::string_view name) const;
  std::size_t column_index(std::string_view name) const;
  bool has_column(std::string_view name) const;

  void add_row(const RowMeta& meta, std::span<const double> values);

  /// Appends columns given column-major (one vector of num_rows() values each).
  void append_columns(std::span<const std::string> names, std::span<const std::vector<double>> data);

  /// Copy restricted to the named columns, in the given order.
  FeatureTable select_columns(std::span<const std::string> names) const;
  /// Copy with only the rows of one partition.
  FeatureTable filter(Partition partition) const;

 private:
  std::vector<std::string> columns_;
  std::vector<double> values_;
  std::vector<RowMeta> meta_;
};

/// Rows sorted by (parent_id, window_index); duplicate keys are an error.
FeatureTable build_feature_table(std::vector<FeatureVector> vectors);

/// FFT and feature extraction for every segment, then build_feature_table.
FeatureTable featurize_segments(std::span<const Segment> segments);

/// CSV layout: parent_id, window_index, partition, pressure, opening, label,
/// numeric columns..., degenerate.
std::string feature_table_csv(const FeatureTable& table);
void write_feature_table(const std::filesystem::path& path, const FeatureTable& table);
FeatureTable read_feature_table(const std::filesystem::path& path);

}  // namespace valvecav
