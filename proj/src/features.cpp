#include "valvecav/features.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "valvecav/io.hpp"

namespace valvecav {

std::array<double, kNumBaseFeatures> FeatureVector::values() const {
  return {mean, median, q1, q3, min, max, iqr, std,
          rms, sra, kurtosis, skewness, shape_factor, clearance_factor, crest_factor};
}

double quantile_sorted(std::span<const double> sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 0) throw NumericError("quantile of an empty sequence");
  const double np = static_cast<double>(n) * p;
  const double whole = std::floor(np);
  if (np == whole) {
    const auto k = static_cast<std::size_t>(whole);
    if (k == 0) return sorted.front();
    if (k >= n) return sorted.back();
    return 0.5 * (sorted[k - 1] + sorted[k]);
  }
  return sorted[static_cast<std::size_t>(whole)];
}

FeatureVector extract_features(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 4) throw NumericError("feature extraction needs at least 4 values, got " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i])) throw NumericError("non-finite value at index " + std::to_string(i));
  }

  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());

  FeatureVector f;
  const double inv_n = 1.0 / static_cast<double>(n);
  double sum = 0.0, sum_sq = 0.0, sum_abs = 0.0, sum_sqrt_abs = 0.0, peak = 0.0;
  for (double v : x) {
    sum += v;
    sum_sq += v * v;
    sum_abs += std::abs(v);
    sum_sqrt_abs += std::sqrt(std::abs(v));
    peak = std::max(peak, std::abs(v));
  }
  f.mean = sum * inv_n;
  f.median = quantile_sorted(sorted, 0.5);
  f.q1 = quantile_sorted(sorted, 0.25);
  f.q3 = quantile_sorted(sorted, 0.75);
  f.min = sorted.front();
  f.max = sorted.back();
  f.iqr = f.q3 - f.q1;
  f.rms = std::sqrt(sum_sq * inv_n);
  const double mean_sqrt_abs = sum_sqrt_abs * inv_n;
  f.sra = mean_sqrt_abs * mean_sqrt_abs;

  if (f.min == f.max) {
    // Constant input: no spread, shape moments undefined.
    f.degenerate = true;
    f.mean = f.min;
    f.std = 0.0;
    f.kurtosis = 0.0;
    f.skewness = 0.0;
  } else {
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
      const double d = v - f.mean;
      const double d2 = d * d;
      m2 += d2;
      m3 += d2 * d;
      m4 += d2 * d2;
    }
    m2 *= inv_n;
    m3 *= inv_n;
    m4 *= inv_n;
    f.std = std::sqrt(m2);
    f.kurtosis = m4 / (m2 * m2);
    f.skewness = m3 / (m2 * f.std);
  }

  if (f.rms == 0.0) {
    f.degenerate = true;
    f.shape_factor = 1.0;
    f.clearance_factor = 1.0;
    f.crest_factor = 1.0;
  } else {
    f.shape_factor = f.rms / (sum_abs * inv_n);
    f.clearance_factor = peak / f.sra;
    f.crest_factor = peak / f.rms;
  }
  return f;
}

FeatureVector extract_features(const Spectrum& spectrum) {
  return extract_features(std::span<const double>(spectrum.magnitudes));
}

FeatureTable::FeatureTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  std::vector<std::string> sorted = columns_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DataError("duplicate feature column names");
  }
}

std::vector<double> FeatureTable::column(std::size_t col) const {
  std::vector<double> out(num_rows());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = at(r, col);
  return out;
}

std::vector<double> FeatureTable::column(std::string_view name) const {
  return column(column_index(name));
}

std::size_t FeatureTable::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  throw DataError("missing feature column '" + std::string(name) + "'");
}

bool FeatureTable::has_column(std::string_view name) const {
  return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

void FeatureTable::add_row(const RowMeta& meta, std::span<const double> values) {
  if (values.size() != columns_.size()) {
    throw DataError("row has " + std::to_string(values.size()) + " values, table has " +
                    std::to_string(columns_.size()) + " columns");
  }
  for (std::size_t c = 0; c < values.size(); ++c) {
    if (!std::isfinite(values[c])) {
      throw NumericError("non-finite value in column '" + columns_[c] + "' for row '" +
                         meta.parent_id + "'");
    }
  }
  values_.insert(values_.end(), values.begin(), values.end());
  meta_.push_back(meta);
}

void FeatureTable::append_columns(std::span<const std::string> names,
                                  std::span<const std::vector<double>> data) {
  if (names.size() != data.size()) throw DataError("column name/data count mismatch");
  for (const auto& col : data) {
    if (col.size() != num_rows()) throw DataError("appended column has wrong row count");
  }
  for (const auto& name : names) {
    if (has_column(name)) throw DataError("duplicate feature column '" + name + "'");
  }
  const std::size_t old_cols = columns_.size();
  const std::size_t new_cols = old_cols + names.size();
  std::vector<double> values(num_rows() * new_cols);
  for (std::size_t r = 0; r < num_rows(); ++r) {
    std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(r * old_cols), old_cols,
                values.begin() + static_cast<std::ptrdiff_t>(r * new_cols));
    for (std::size_t c = 0; c < data.size(); ++c) values[r * new_cols + old_cols + c] = data[c][r];
  }
  values_ = std::move(values);
  columns_.insert(columns_.end(), names.begin(), names.end());
  std::vector<std::string> sorted = columns_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DataError("duplicate feature column names");
  }
}

FeatureTable FeatureTable::select_columns(std::span<const std::string> names) const {
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  for (const auto& n : names) idx.push_back(column_index(n));
  FeatureTable out(std::vector<std::string>(names.begin(), names.end()));
  std::vector<double> buf(idx.size());
  for (std::size_t r = 0; r < num_rows(); ++r) {
    for (std::size_t c = 0; c < idx.size(); ++c) buf[c] = at(r, idx[c]);
    out.add_row(meta_[r], buf);
  }
  return out;
}

FeatureTable FeatureTable::filter(Partition partition) const {
  FeatureTable out(columns_);
  for (std::size_t r = 0; r < num_rows(); ++r) {
    if (meta_[r].partition == partition) out.add_row(meta_[r], row(r));
  }
  return out;
}

FeatureTable build_feature_table(std::vector<FeatureVector> vectors) {
  std::sort(vectors.begin(), vectors.end(), [](const FeatureVector& a, const FeatureVector& b) {
    if (a.meta.parent_id != b.meta.parent_id) return a.meta.parent_id < b.meta.parent_id;
    return a.meta.window_index < b.meta.window_index;
  });
  for (std::size_t i = 1; i < vectors.size(); ++i) {
    if (vectors[i].meta.parent_id == vectors[i - 1].meta.parent_id &&
        vectors[i].meta.window_index == vectors[i - 1].meta.window_index) {
      throw DataError("duplicate feature row (" + vectors[i].meta.parent_id + ", window " +
                      std::to_string(vectors[i].meta.window_index) + ")");
    }
  }
  FeatureTable table(std::vector<std::string>(kBaseFeatureNames.begin(), kBaseFeatureNames.end()));
  for (const auto& v : vectors) {
    RowMeta meta = v.meta;
    meta.degenerate = v.degenerate;
    table.add_row(meta, v.values());
  }
  return table;
}

FeatureTable featurize_segments(std::span<const Segment> segments) {
  std::vector<FeatureVector> vectors;
  vectors.reserve(segments.size());
  for (const auto& s : segments) {
    if (!s.partition) {
      throw DataError("segment (" + s.parent_id + ", " + std::to_string(s.window_index) +
                      ") has no partition tag");
    }
    auto f = extract_features(fft_magnitude(s));
    f.meta.parent_id = s.parent_id;
    f.meta.window_index = s.window_index;
    f.meta.partition = *s.partition;
    f.meta.upstream_pressure = s.upstream_pressure;
    f.meta.valve_opening = s.valve_opening;
    f.meta.label = s.label;
    vectors.push_back(std::move(f));
  }
  return build_feature_table(std::move(vectors));
}

namespace {
constexpr std::array<std::string_view, 6> kLeadingColumns = {
    "parent_id", "window_index", "partition", "pressure", "opening", "label"};
constexpr std::string_view kDegenerateColumn = "degenerate";
}  // namespace

std::string feature_table_csv(const FeatureTable& table) {
  std::ostringstream out;
  for (auto name : kLeadingColumns) out << name << ',';
  for (const auto& c : table.columns()) out << io::quote_csv_field(c) << ',';
  out << kDegenerateColumn << '\n';
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    const auto& m = table.meta(r);
    out << m.parent_id << ',' << m.window_index << ',' << to_string(m.partition) << ','
        << io::format_double(m.upstream_pressure) << ',' << io::format_double(m.valve_opening)
        << ',' << to_string(m.label) << ',';
    for (double v : table.row(r)) out << io::format_double(v) << ',';
    out << (m.degenerate ? 1 : 0) << '\n';
  }
  return out.str();
}

void write_feature_table(const std::filesystem::path& path, const FeatureTable& table) {
  io::write_text(path, feature_table_csv(table));
}

FeatureTable read_feature_table(const std::filesystem::path& path) {
  const auto doc = io::read_csv(path);
  const auto& h = doc.header;
  if (h.size() < kLeadingColumns.size() + 1) throw DataError(path.string() + ": not a feature table");
  for (std::size_t i = 0; i < kLeadingColumns.size(); ++i) {
    if (h[i] != kLeadingColumns[i]) {
      throw DataError(path.string() + ": expected column '" + std::string(kLeadingColumns[i]) +
                      "' at position " + std::to_string(i));
    }
  }
  if (h.back() != kDegenerateColumn) throw DataError(path.string() + ": missing trailing 'degenerate' column");
  const std::size_t first = kLeadingColumns.size();
  const std::size_t last = h.size() - 1;
  FeatureTable table(std::vector<std::string>(h.begin() + static_cast<std::ptrdiff_t>(first),
                                              h.begin() + static_cast<std::ptrdiff_t>(last)));
  std::vector<double> buf(last - first);
  for (const auto& row : doc.rows) {
    RowMeta m;
    m.parent_id = row[0];
    m.window_index = static_cast<std::size_t>(io::parse_int(row[1], "window_index"));
    m.partition = parse_partition(row[2]);
    m.upstream_pressure = io::parse_double(row[3], "pressure");
    m.valve_opening = io::parse_double(row[4], "opening");
    m.label = parse_flow_state(row[5]);
    for (std::size_t c = first; c < last; ++c) buf[c - first] = io::parse_double(row[c], h[c]);
    m.degenerate = row[last] == "1";
    table.add_row(m, buf);
  }
  return table;
}

}  // namespace valvecav
