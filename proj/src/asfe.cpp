#include "valvecav/asfe.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "valvecav/io.hpp"

namespace valvecav::asfe {

std::string to_string(AggOp op) {
  switch (op) {
    case AggOp::kMedian: return "median";
    case AggOp::kMean: return "mean";
    case AggOp::kMax: return "max";
    case AggOp::kMin: return "min";
  }
  return "?";
}

double apply_op(AggOp op, std::span<const double> values) {
  if (values.empty()) throw DataError("aggregate of an empty group");
  switch (op) {
    case AggOp::kMedian: {
      std::vector<double> sorted(values.begin(), values.end());
      std::sort(sorted.begin(), sorted.end());
      return quantile_sorted(sorted, 0.5);
    }
    case AggOp::kMean: {
      double sum = 0.0;
      for (double v : values) sum += v;
      return sum / static_cast<double>(values.size());
    }
    case AggOp::kMax: return *std::max_element(values.begin(), values.end());
    case AggOp::kMin: return *std::min_element(values.begin(), values.end());
  }
  return 0.0;
}

void AsfeConfig::validate() const {
  if (k < 5 || k > 10) throw ConfigError("ASFE k must lie in [5, 10], got " + std::to_string(k));
  if (ops.size() != 4) throw ConfigError("ASFE needs exactly 4 aggregation operations");
  probe.validate();
}

std::vector<std::pair<std::string, double>> rank_base_features(
    const FeatureTable& train_table, const gbt::GbtHyperParams& probe_params, Task task) {
  std::vector<std::string> base;
  for (auto name : kBaseFeatureNames) {
    if (train_table.has_column(name)) base.emplace_back(name);
  }
  if (base.empty()) throw DataError("top-k selection: table has none of the base features");
  const FeatureTable probe_table = train_table.filter(Partition::kTrain).select_columns(base);
  return gbt::feature_importance(gbt::train(probe_table, probe_params, task));
}

std::vector<std::string> select_top_k(const FeatureTable& train_table, int k,
                                      const gbt::GbtHyperParams& probe_params, Task task) {
  return top_k(rank_base_features(train_table, probe_params, task), k);
}

std::vector<std::string> top_k(std::span<const std::pair<std::string, double>> ranked, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > ranked.size()) {
    throw ConfigError("top-k selection: k = " + std::to_string(k) + " but only " +
                      std::to_string(ranked.size()) + " base features");
  }
  std::vector<std::string> out;
  for (int i = 0; i < k; ++i) out.push_back(ranked[static_cast<std::size_t>(i)].first);
  return out;
}

std::string aggregate_column_name(AggOp op, const std::string& feature) {
  return "agg_" + to_string(op) + "(" + feature + ")";
}

std::vector<std::string> AggregationPlan::output_columns() const {
  std::vector<std::string> names;
  for (const auto& f : selected) {
    for (AggOp op : ops) names.push_back(aggregate_column_name(op, f));
  }
  return names;
}

AggregationPlan fit_aggregation(const FeatureTable& table, std::span<const std::string> selected,
                                const AsfeConfig& config) {
  AggregationPlan plan;
  plan.selected.assign(selected.begin(), selected.end());
  plan.ops = config.ops;
  plan.strict = config.strict;

  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    if (table.meta(r).partition == Partition::kTrain) rows.push_back(r);
  }
  if (rows.empty()) throw DataError("aggregation fit: no training rows");

  std::map<double, std::vector<std::size_t>> by_pressure;
  std::map<double, std::vector<std::size_t>> by_opening;
  for (std::size_t r : rows) {
    by_pressure[table.meta(r).upstream_pressure].push_back(r);
    by_opening[table.meta(r).valve_opening].push_back(r);
  }
  for (double level : config.pressure_levels) {
    if (!by_pressure.count(level)) {
      throw DataError("aggregation fit: pressure group " + io::format_double(level) + " is empty");
    }
  }
  for (double level : config.opening_levels) {
    if (!by_opening.count(level)) {
      throw DataError("aggregation fit: opening group " + io::format_double(level) + " is empty");
    }
  }

  std::vector<double> buf;
  auto gather = [&](const std::vector<double>& col, const std::vector<std::size_t>& idx) {
    buf.clear();
    for (std::size_t r : idx) buf.push_back(col[r]);
    return std::span<const double>(buf);
  };
  for (const auto& feature : plan.selected) {
    const auto col = table.column(feature);
    for (AggOp op : plan.ops) {
      GroupLookup lk;
      for (const auto& [level, idx] : by_pressure) lk.by_pressure[level] = apply_op(op, gather(col, idx));
      for (const auto& [level, idx] : by_opening) lk.by_opening[level] = apply_op(op, gather(col, idx));
      lk.global = apply_op(op, gather(col, rows));
      plan.lookups.push_back(std::move(lk));
    }
  }
  return plan;
}

std::size_t apply_aggregation(FeatureTable& table, const AggregationPlan& plan) {
  std::size_t fallbacks = 0;
  auto find = [&](const std::map<double, double>& m, double key, double global, const char* what) {
    auto it = m.find(key);
    if (it != m.end()) return it->second;
    if (plan.strict) {
      throw DataError(std::string("aggregation: unseen ") + what + " value " + io::format_double(key));
    }
    ++fallbacks;
    return global;
  };
  std::vector<std::vector<double>> data;
  for (std::size_t f = 0; f < plan.selected.size(); ++f) {
    for (std::size_t o = 0; o < plan.ops.size(); ++o) {
      const auto& lk = plan.lookup(f, o);
      std::vector<double> col(table.num_rows());
      for (std::size_t r = 0; r < table.num_rows(); ++r) {
        const auto& m = table.meta(r);
        const double p = find(lk.by_pressure, m.upstream_pressure, lk.global, "pressure");
        const double q = find(lk.by_opening, m.valve_opening, lk.global, "opening");
        col[r] = 0.5 * (p + q);
      }
      data.push_back(std::move(col));
    }
  }
  const auto names = plan.output_columns();
  table.append_columns(names, data);
  return fallbacks;
}

std::vector<std::string> CrossPlan::output_columns() const {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    for (std::size_t j = 0; j < sources.size(); ++j) {
      if (i == j) continue;
      names.push_back("ratio(" + sources[i] + "," + sources[j] + ")");
      names.push_back("diff(" + sources[i] + "," + sources[j] + ")");
    }
  }
  return names;
}

std::size_t build_crosses(FeatureTable& table, const CrossPlan& plan) {
  std::vector<std::vector<double>> src;
  for (const auto& name : plan.sources) {
    if (!table.has_column(name)) throw DataError("cross features: missing source column '" + name + "'");
    src.push_back(table.column(name));
  }
  std::size_t clamps = 0;
  const std::size_t n = table.num_rows();
  std::vector<std::vector<double>> data;
  data.reserve(2 * src.size() * (src.size() > 0 ? src.size() - 1 : 0));
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t j = 0; j < src.size(); ++j) {
      if (i == j) continue;
      std::vector<double> ratio(n), diff(n);
      for (std::size_t r = 0; r < n; ++r) {
        const double den = src[j][r];
        if (std::abs(den) < kRatioEpsilon) {
          ratio[r] = 0.0;
          ++clamps;
        } else {
          ratio[r] = src[i][r] / den;
        }
        diff[r] = src[i][r] - src[j][r];
      }
      data.push_back(std::move(ratio));
      data.push_back(std::move(diff));
    }
  }
  const auto names = plan.output_columns();
  table.append_columns(names, data);
  return clamps;
}

std::size_t expected_aggregate_count(int k, std::size_t num_ops) {
  return num_ops * static_cast<std::size_t>(k);
}

std::size_t expected_cross_count(int k, std::size_t num_ops) {
  const std::size_t m = static_cast<std::size_t>(k) + expected_aggregate_count(k, num_ops);
  return 2 * m * (m - 1);
}

std::optional<std::size_t> published_cross_count(int k) {
  switch (k) {
    case 5: return 1200;
    case 6: return 1300;
    case 7: return 1404;
    case 8: return 1512;
    case 9: return 1624;
    case 10: return 1740;
    default: return std::nullopt;
  }
}

std::string AsfeReport::to_json() const {
  nlohmann::json j;
  j["k"] = k;
  j["selected_features"] = selected;
  nlohmann::json imp = nlohmann::json::array();
  for (const auto& [name, score] : importance) imp.push_back({{"feature", name}, {"gain", score}});
  j["probe_importance"] = std::move(imp);
  j["base_columns"] = base_columns;
  j["aggregate_columns"] = aggregate_columns;
  j["cross_columns"] = cross_columns;
  j["total_columns"] = total_columns;
  j["ratio_clamps"] = {{"train", train_ratio_clamps}, {"test", test_ratio_clamps}};
  j["group_fallbacks"] = {{"train", train_group_fallbacks}, {"test", test_group_fallbacks}};
  j["published_cross_columns"] =
      published_cross_columns ? nlohmann::json(*published_cross_columns) : nlohmann::json(nullptr);
  j["discrepancy_note"] = discrepancy_note;
  return j.dump(2) + "\n";
}

AsfeResult run_asfe(const FeatureTable& train_table, const FeatureTable& test_table,
                    const AsfeConfig& config, Task task) {
  config.validate();
  if (train_table.columns() != test_table.columns()) {
    throw DataError("ASFE: train and test tables have different schemas");
  }
  for (std::size_t r = 0; r < test_table.num_rows(); ++r) {
    if (test_table.meta(r).partition != Partition::kTest) {
      throw DataError("ASFE: test table contains a non-test row");
    }
  }
  for (std::size_t r = 0; r < train_table.num_rows(); ++r) {
    if (train_table.meta(r).partition != Partition::kTrain) {
      throw DataError("ASFE: train table contains a non-train row");
    }
  }

  AsfeResult out{train_table, test_table, {}, {}};
  AsfeReport& rep = out.report;
  rep.k = config.k;
  rep.base_columns = train_table.num_cols();

  rep.importance = rank_base_features(train_table, config.probe, task);
  rep.selected = top_k(rep.importance, config.k);

  out.aggregation = fit_aggregation(train_table, rep.selected, config);
  rep.train_group_fallbacks = apply_aggregation(out.train, out.aggregation);
  rep.test_group_fallbacks = apply_aggregation(out.test, out.aggregation);
  rep.aggregate_columns = out.aggregation.output_columns().size();

  CrossPlan cross;
  cross.sources = rep.selected;
  const auto agg_names = out.aggregation.output_columns();
  cross.sources.insert(cross.sources.end(), agg_names.begin(), agg_names.end());
  rep.train_ratio_clamps = build_crosses(out.train, cross);
  rep.test_ratio_clamps = build_crosses(out.test, cross);
  rep.cross_columns = cross.output_columns().size();
  rep.total_columns = out.train.num_cols();

  if (rep.aggregate_columns != expected_aggregate_count(config.k, config.ops.size()) ||
      rep.cross_columns != expected_cross_count(config.k, config.ops.size()) ||
      rep.total_columns != rep.base_columns + rep.aggregate_columns + rep.cross_columns ||
      out.test.num_cols() != rep.total_columns) {
    throw DataError("ASFE: column-count identity violated");
  }

  rep.published_cross_columns = published_cross_count(config.k);
  if (rep.published_cross_columns && *rep.published_cross_columns != rep.cross_columns) {
    rep.discrepancy_note =
        "cross count follows 2*m*(m-1) with m = k + 4k = " + std::to_string(5 * config.k) +
        ", giving " + std::to_string(rep.cross_columns) + "; the published table lists " +
        std::to_string(*rep.published_cross_columns) +
        ", which corresponds to m = k + 20 (aggregate count held at 20)";
  }
  return out;
}

}  // namespace valvecav::asfe
