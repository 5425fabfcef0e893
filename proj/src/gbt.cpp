#include "valvecav/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "valvecav/io.hpp"

namespace valvecav::gbt {

using nlohmann::json;

void GbtHyperParams::validate() const {
  if (num_rounds < 0) throw ConfigError("num_rounds must be >= 0");
  if (max_depth < 0) throw ConfigError("max_depth must be >= 0");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw ConfigError("learning_rate must lie in (0, 1]");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (!(gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
  if (!(min_child_hessian >= 0.0)) throw ConfigError("min_child_hessian must be >= 0");
  if (num_classes < 2) throw ConfigError("num_classes must be >= 2");
}

Objective objective_for(int num_classes) {
  return num_classes > 2 ? Objective::kSoftmax : Objective::kLogistic;
}

namespace {

double sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

void softmax(std::span<const double> s, std::span<double> out) {
  const double peak = *std::max_element(s.begin(), s.end());
  double total = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    out[k] = std::exp(s[k] - peak);
    total += out[k];
  }
  for (auto& v : out) v /= total;
}

// -log p(y | s)
double log_loss(Objective objective, int label, std::span<const double> s) {
  if (objective == Objective::kLogistic) {
    const double z = s[0];
    return std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0) - (label == 1 ? z : 0.0);
  }
  const double peak = *std::max_element(s.begin(), s.end());
  double total = 0.0;
  for (double v : s) total += std::exp(v - peak);
  return peak + std::log(total) - s[static_cast<std::size_t>(label)];
}

void check_labels(std::span<const int> labels, int num_classes) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw DataError("label " + std::to_string(labels[i]) + " at row " + std::to_string(i) +
                      " outside [0, " + std::to_string(num_classes) + ")");
    }
  }
}

}  // namespace

GradHess grad_hess(Objective objective, std::span<const int> labels, std::span<const double> scores,
                   int num_classes) {
  const std::size_t k = objective == Objective::kLogistic ? 1 : static_cast<std::size_t>(num_classes);
  if (scores.size() != labels.size() * k) throw DataError("score matrix shape does not match labels");
  check_labels(labels, num_classes);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw NumericError("non-finite raw score at index " + std::to_string(i));
  }
  GradHess gh;
  gh.grad.resize(scores.size());
  gh.hess.resize(scores.size());
  if (objective == Objective::kLogistic) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const double p = sigmoid(scores[i]);
      gh.grad[i] = p - (labels[i] == 1 ? 1.0 : 0.0);
      gh.hess[i] = p * (1.0 - p);
    }
    return gh;
  }
  std::vector<double> p(k);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    softmax(scores.subspan(i * k, k), p);
    for (std::size_t c = 0; c < k; ++c) {
      gh.grad[i * k + c] = p[c] - (static_cast<std::size_t>(labels[i]) == c ? 1.0 : 0.0);
      gh.hess[i * k + c] = p[c] * (1.0 - p[c]);
    }
  }
  return gh;
}

double leaf_weight(double grad_sum, double hess_sum, double lambda) {
  if (!(hess_sum + lambda > 0.0)) throw NumericError("leaf weight needs H + lambda > 0");
  return -grad_sum / (hess_sum + lambda);
}

double split_gain(double grad_left, double hess_left, double grad_right, double hess_right,
                  double lambda, double gamma) {
  if (!(hess_left + lambda > 0.0) || !(hess_right + lambda > 0.0)) {
    throw NumericError("split gain needs H + lambda > 0 on both sides");
  }
  const double g = grad_left + grad_right;
  const double h = hess_left + hess_right;
  return 0.5 * (grad_left * grad_left / (hess_left + lambda) +
                grad_right * grad_right / (hess_right + lambda) - g * g / (h + lambda)) -
         gamma;
}

int Tree::leaf_index(std::span<const double> row) const {
  int idx = 0;
  while (!nodes[static_cast<std::size_t>(idx)].is_leaf()) {
    const auto& n = nodes[static_cast<std::size_t>(idx)];
    const double v = row[static_cast<std::size_t>(n.feature)];
    const bool left = std::isnan(v) ? n.default_left : v < n.threshold;
    idx = left ? n.left : n.right;
  }
  return idx;
}

int Tree::depth() const {
  std::vector<int> d(nodes.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (!nodes[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

std::size_t Tree::num_leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

ColumnMatrix ColumnMatrix::from_table(const FeatureTable& table) {
  ColumnMatrix m;
  m.num_rows = table.num_rows();
  m.columns.resize(table.num_cols());
  for (std::size_t c = 0; c < table.num_cols(); ++c) m.columns[c] = table.column(c);
  return m;
}

TreeGrower::TreeGrower(const ColumnMatrix& matrix, const GbtHyperParams& params)
    : matrix_(matrix), params_(params) {
  params_.validate();
  if (matrix.num_rows > std::numeric_limits<std::uint32_t>::max()) {
    throw DataError("too many rows for the tree grower");
  }
  sorted_.resize(matrix.num_cols());
  missing_.resize(matrix.num_cols());
  for (std::size_t f = 0; f < matrix.num_cols(); ++f) {
    const auto& col = matrix.columns[f];
    if (col.size() != matrix.num_rows) throw DataError("ragged column matrix");
    auto& order = sorted_[f];
    for (std::uint32_t i = 0; i < matrix.num_rows; ++i) {
      (std::isnan(col[i]) ? missing_[f] : order).push_back(i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&col](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
  }
}

namespace {

struct Candidate {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
  bool default_left = false;
};

struct Sums {
  double g = 0.0;
  double h = 0.0;
};

}  // namespace

Tree TreeGrower::grow(std::span<const double> grad, std::span<const double> hess,
                      std::vector<int>* leaf_of_row) const {
  const std::size_t n = matrix_.num_rows;
  if (grad.size() != n || hess.size() != n) throw DataError("gradient length does not match rows");
  const double lambda = params_.lambda;
  const double gamma = params_.gamma;
  const double min_h = params_.min_child_hessian;

  Tree tree;
  std::vector<int> pos(n, 0);
  std::vector<Sums> node_sums(1);
  for (std::size_t i = 0; i < n; ++i) {
    node_sums[0].g += grad[i];
    node_sums[0].h += hess[i];
  }
  tree.nodes.emplace_back();
  std::vector<int> active = {0};

  for (int depth = 0; depth < params_.max_depth && !active.empty(); ++depth) {
    std::vector<int> slot(tree.nodes.size(), -1);
    for (std::size_t s = 0; s < active.size(); ++s) slot[static_cast<std::size_t>(active[s])] = static_cast<int>(s);
    std::vector<Candidate> best(active.size());

    std::vector<Sums> running(active.size());
    std::vector<Sums> present(active.size());
    std::vector<Sums> absent(active.size());
    std::vector<double> last(active.size());
    std::vector<char> seen(active.size());
    std::vector<char> has_missing(active.size());

    for (std::size_t f = 0; f < matrix_.num_cols(); ++f) {
      const auto& col = matrix_.columns[f];
      std::fill(running.begin(), running.end(), Sums{});
      std::fill(absent.begin(), absent.end(), Sums{});
      std::fill(seen.begin(), seen.end(), 0);
      std::fill(has_missing.begin(), has_missing.end(), 0);
      for (std::uint32_t i : missing_[f]) {
        const int s = slot[static_cast<std::size_t>(pos[i])];
        if (s < 0) continue;
        absent[static_cast<std::size_t>(s)].g += grad[i];
        absent[static_cast<std::size_t>(s)].h += hess[i];
        has_missing[static_cast<std::size_t>(s)] = 1;
      }
      for (std::size_t s = 0; s < active.size(); ++s) {
        const auto& tot = node_sums[static_cast<std::size_t>(active[s])];
        present[s] = {tot.g - absent[s].g, tot.h - absent[s].h};
      }

      auto consider = [&](std::size_t s, double threshold, double gl, double hl, double gr, double hr,
                          bool default_left) {
        if (hl < min_h || hr < min_h || !(hl + lambda > 0.0) || !(hr + lambda > 0.0)) return;
        const double gain = split_gain(gl, hl, gr, hr, lambda, gamma);
        if (gain > best[s].gain) {
          best[s] = {gain, static_cast<int>(f), threshold, default_left};
        }
      };

      for (std::uint32_t i : sorted_[f]) {
        const int si = slot[static_cast<std::size_t>(pos[i])];
        if (si < 0) continue;
        const auto s = static_cast<std::size_t>(si);
        const double v = col[i];
        if (seen[s] && v != last[s]) {
          double threshold = 0.5 * (last[s] + v);
          if (!(threshold > last[s])) threshold = v;
          const Sums& tot = node_sums[static_cast<std::size_t>(active[s])];
          const Sums& run = running[s];
          // missing values to the right
          consider(s, threshold, run.g, run.h, tot.g - run.g, tot.h - run.h, false);
          if (has_missing[s]) {
            const double gl = run.g + absent[s].g;
            const double hl = run.h + absent[s].h;
            consider(s, threshold, gl, hl, tot.g - gl, tot.h - hl, true);
          }
        }
        running[s].g += grad[i];
        running[s].h += hess[i];
        last[s] = v;
        seen[s] = 1;
      }
      // All present values on one side, missing on the other.
      for (std::size_t s = 0; s < active.size(); ++s) {
        if (!has_missing[s] || !seen[s]) continue;
        const Sums& tot = node_sums[static_cast<std::size_t>(active[s])];
        const double threshold = std::nextafter(last[s], std::numeric_limits<double>::infinity());
        consider(s, threshold, present[s].g, present[s].h, tot.g - present[s].g,
                 tot.h - present[s].h, false);
      }
    }

    std::vector<int> next;
    std::vector<int> split_slot(tree.nodes.size(), -1);
    for (std::size_t s = 0; s < active.size(); ++s) {
      if (best[s].feature < 0) continue;
      const auto node = static_cast<std::size_t>(active[s]);
      const int left = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      node_sums.resize(tree.nodes.size());
      auto& nd = tree.nodes[node];
      nd.feature = best[s].feature;
      nd.threshold = best[s].threshold;
      nd.default_left = best[s].default_left;
      nd.gain = best[s].gain;
      nd.left = left;
      nd.right = left + 1;
      split_slot[node] = static_cast<int>(s);
      next.push_back(left);
      next.push_back(left + 1);
    }
    if (next.empty()) break;
    for (std::size_t i = 0; i < n; ++i) {
      const auto node = static_cast<std::size_t>(pos[i]);
      if (node >= split_slot.size() || split_slot[node] < 0) continue;
      const auto& nd = tree.nodes[node];
      const double v = matrix_.columns[static_cast<std::size_t>(nd.feature)][i];
      const bool go_left = std::isnan(v) ? nd.default_left : v < nd.threshold;
      pos[i] = go_left ? nd.left : nd.right;
      auto& sums = node_sums[static_cast<std::size_t>(pos[i])];
      sums.g += grad[i];
      sums.h += hess[i];
    }
    active = std::move(next);
  }

  for (std::size_t j = 0; j < tree.nodes.size(); ++j) {
    auto& nd = tree.nodes[j];
    nd.hess_sum = node_sums[j].h;
    if (nd.is_leaf()) {
      nd.weight = node_sums[j].h + lambda > 0.0 ? leaf_weight(node_sums[j].g, node_sums[j].h, lambda) : 0.0;
    }
  }
  if (leaf_of_row) *leaf_of_row = std::move(pos);
  return tree;
}

std::vector<double> GbtModel::predict_raw(std::span<const double> row) const {
  if (row.size() != feature_names.size()) throw DataError("row width does not match model features");
  std::vector<double> raw(static_cast<std::size_t>(trees_per_round()), base_score);
  for (const auto& e : forest) {
    raw[static_cast<std::size_t>(e.class_index)] += params.learning_rate * e.tree.predict(row);
  }
  return raw;
}

std::vector<double> GbtModel::predict_proba(std::span<const double> row) const {
  const auto raw = predict_raw(row);
  if (params.num_classes == 2) {
    const double p = sigmoid(raw[0]);
    return {1.0 - p, p};
  }
  std::vector<double> p(raw.size());
  softmax(raw, p);
  return p;
}

GbtModel train(const ColumnMatrix& matrix, std::span<const int> labels,
               std::vector<std::string> feature_names, const GbtHyperParams& params) {
  params.validate();
  if (matrix.num_rows < 2) throw DataError("training needs at least 2 rows");
  if (matrix.num_cols() == 0) throw DataError("training needs at least 1 feature");
  if (labels.size() != matrix.num_rows) throw DataError("label count does not match rows");
  if (feature_names.size() != matrix.num_cols()) throw DataError("feature name count does not match columns");
  check_labels(labels, params.num_classes);

  GbtModel model;
  model.feature_names = std::move(feature_names);
  model.params = params;
  model.importance_gain.assign(matrix.num_cols(), 0.0);
  model.importance_weight.assign(matrix.num_cols(), 0.0);
  const Objective objective = objective_for(params.num_classes);
  const auto per_round = static_cast<std::size_t>(model.trees_per_round());
  const std::size_t n = matrix.num_rows;

  if (objective == Objective::kLogistic) {
    const double positives = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
    const double prior = std::clamp(positives / static_cast<double>(n), 1e-6, 1.0 - 1e-6);
    model.base_score = std::log(prior / (1.0 - prior));
  }
  if (std::all_of(labels.begin(), labels.end(), [&](int y) { return y == labels[0]; })) {
    model.warnings.push_back("all training rows share label " + std::to_string(labels[0]) +
                             "; returning a base-score-only model");
    log_warning(model.warnings.back());
    return model;
  }

  TreeGrower grower(matrix, params);
  std::vector<double> scores(n * per_round, model.base_score);
  std::vector<double> g(n), h(n);
  std::vector<int> leaf;
  for (int round = 0; round < params.num_rounds; ++round) {
    const auto gh = grad_hess(objective, labels, scores, params.num_classes);
    for (std::size_t k = 0; k < per_round; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        g[i] = gh.grad[i * per_round + k];
        h[i] = gh.hess[i * per_round + k];
      }
      Tree tree = grower.grow(g, h, &leaf);
      for (std::size_t i = 0; i < n; ++i) {
        scores[i * per_round + k] +=
            params.learning_rate * tree.nodes[static_cast<std::size_t>(leaf[i])].weight;
      }
      for (const auto& nd : tree.nodes) {
        if (nd.is_leaf()) continue;
        model.importance_gain[static_cast<std::size_t>(nd.feature)] += nd.gain;
        model.importance_weight[static_cast<std::size_t>(nd.feature)] += 1.0;
      }
      model.forest.push_back({round, static_cast<int>(k), std::move(tree)});
    }
  }
  return model;
}

std::vector<int> labels_for_task(const FeatureTable& table, Task task) {
  std::vector<int> labels(table.num_rows());
  for (std::size_t r = 0; r < labels.size(); ++r) labels[r] = class_index(table.meta(r).label, task);
  return labels;
}

GbtModel train(const FeatureTable& table, const GbtHyperParams& params, Task task) {
  GbtHyperParams p = params;
  p.num_classes = num_classes(task);
  const auto labels = labels_for_task(table, task);
  auto model = train(ColumnMatrix::from_table(table), labels, table.columns(), p);
  model.class_names = class_names(task);
  return model;
}

std::vector<double> predict(const GbtModel& model, const FeatureTable& table) {
  if (table.num_cols() != model.feature_names.size()) {
    throw DataError("schema mismatch: model has " + std::to_string(model.feature_names.size()) +
                    " features, table has " + std::to_string(table.num_cols()));
  }
  std::vector<std::size_t> idx;
  idx.reserve(model.feature_names.size());
  for (const auto& name : model.feature_names) {
    if (!table.has_column(name)) throw DataError("schema mismatch: table lacks feature '" + name + "'");
    idx.push_back(table.column_index(name));
  }
  const auto k = static_cast<std::size_t>(model.num_classes());
  std::vector<double> out(table.num_rows() * k);
  std::vector<double> row(idx.size());
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    for (std::size_t c = 0; c < idx.size(); ++c) row[c] = table.at(r, idx[c]);
    const auto p = model.predict_proba(row);
    std::copy(p.begin(), p.end(), out.begin() + static_cast<std::ptrdiff_t>(r * k));
  }
  return out;
}

double training_objective(const GbtModel& model, const ColumnMatrix& matrix,
                          std::span<const int> labels, int num_rounds) {
  const auto per_round = static_cast<std::size_t>(model.trees_per_round());
  const Objective objective = objective_for(model.num_classes());
  const double eta = model.params.learning_rate;
  std::vector<double> scores(matrix.num_rows * per_round, model.base_score);
  std::vector<double> row(matrix.num_cols());
  double penalty = 0.0;
  for (const auto& e : model.forest) {
    if (num_rounds >= 0 && e.round >= num_rounds) continue;
    for (const auto& nd : e.tree.nodes) {
      if (!nd.is_leaf()) continue;
      const double w = eta * nd.weight;
      penalty += model.params.gamma + 0.5 * model.params.lambda * w * w;
    }
    for (std::size_t i = 0; i < matrix.num_rows; ++i) {
      for (std::size_t c = 0; c < row.size(); ++c) row[c] = matrix.columns[c][i];
      scores[i * per_round + static_cast<std::size_t>(e.class_index)] += eta * e.tree.predict(row);
    }
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < matrix.num_rows; ++i) {
    loss += log_loss(objective, labels[i], std::span<const double>(scores).subspan(i * per_round, per_round));
  }
  return loss + penalty;
}

std::vector<std::pair<std::string, double>> feature_importance(const GbtModel& model,
                                                               ImportanceKind kind) {
  const auto& scores = kind == ImportanceKind::kGain ? model.importance_gain : model.importance_weight;
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t f = 0; f < model.feature_names.size(); ++f) {
    out.emplace_back(model.feature_names[f], f < scores.size() ? scores[f] : 0.0);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

namespace {

json node_to_json(const Tree& tree, int idx) {
  const auto& n = tree.nodes[static_cast<std::size_t>(idx)];
  json j;
  if (n.is_leaf()) {
    j["leaf"] = n.weight;
    j["cover"] = n.hess_sum;
    return j;
  }
  j["feature"] = n.feature;
  j["threshold"] = n.threshold;
  j["default_left"] = n.default_left;
  j["gain"] = n.gain;
  j["cover"] = n.hess_sum;
  j["left"] = node_to_json(tree, n.left);
  j["right"] = node_to_json(tree, n.right);
  return j;
}

int node_from_json(const json& j, Tree& tree, std::size_t num_features) {
  const int idx = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  TreeNode n;
  n.hess_sum = j.value("cover", 0.0);
  if (j.contains("leaf")) {
    n.weight = j.at("leaf").get<double>();
    if (!std::isfinite(n.weight)) throw DataError("model: non-finite leaf weight");
  } else {
    n.feature = j.at("feature").get<int>();
    if (n.feature < 0 || static_cast<std::size_t>(n.feature) >= num_features) {
      throw DataError("model: feature index out of range");
    }
    n.threshold = j.at("threshold").get<double>();
    n.default_left = j.at("default_left").get<bool>();
    n.gain = j.at("gain").get<double>();
    n.left = node_from_json(j.at("left"), tree, num_features);
    n.right = node_from_json(j.at("right"), tree, num_features);
  }
  tree.nodes[static_cast<std::size_t>(idx)] = n;
  return idx;
}

}  // namespace

std::string model_to_json(const GbtModel& model) {
  json j;
  j["format"] = "valvecav-gbt";
  j["version"] = 1;
  j["feature_names"] = model.feature_names;
  j["class_names"] = model.class_names;
  const auto& p = model.params;
  j["hyperparams"] = {{"num_rounds", p.num_rounds},       {"max_depth", p.max_depth},
                      {"learning_rate", p.learning_rate}, {"lambda", p.lambda},
                      {"gamma", p.gamma},                 {"min_child_hessian", p.min_child_hessian},
                      {"num_classes", p.num_classes},     {"seed", p.seed}};
  j["base_score"] = model.base_score;
  json trees = json::array();
  for (const auto& e : model.forest) {
    trees.push_back({{"round", e.round}, {"class", e.class_index}, {"root", node_to_json(e.tree, 0)}});
  }
  j["trees"] = std::move(trees);
  json gain = json::object();
  json weight = json::object();
  for (std::size_t f = 0; f < model.feature_names.size(); ++f) {
    gain[model.feature_names[f]] = model.importance_gain[f];
    weight[model.feature_names[f]] = model.importance_weight[f];
  }
  j["importance_gain"] = std::move(gain);
  j["importance_weight"] = std::move(weight);
  j["warnings"] = model.warnings;
  return j.dump(1) + "\n";
}

GbtModel model_from_json(const std::string& text) {
  GbtModel m;
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != "valvecav-gbt") throw DataError("not a valvecav model");
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.class_names = j.value("class_names", std::vector<std::string>{});
    const auto& hp = j.at("hyperparams");
    m.params.num_rounds = hp.at("num_rounds").get<int>();
    m.params.max_depth = hp.at("max_depth").get<int>();
    m.params.learning_rate = hp.at("learning_rate").get<double>();
    m.params.lambda = hp.at("lambda").get<double>();
    m.params.gamma = hp.at("gamma").get<double>();
    m.params.min_child_hessian = hp.at("min_child_hessian").get<double>();
    m.params.num_classes = hp.at("num_classes").get<int>();
    m.params.seed = hp.at("seed").get<std::uint64_t>();
    m.params.validate();
    m.base_score = j.at("base_score").get<double>();
    for (const auto& t : j.at("trees")) {
      ForestEntry e;
      e.round = t.at("round").get<int>();
      e.class_index = t.at("class").get<int>();
      if (e.class_index < 0 || e.class_index >= m.trees_per_round()) {
        throw DataError("model: tree class index out of range");
      }
      node_from_json(t.at("root"), e.tree, m.feature_names.size());
      m.forest.push_back(std::move(e));
    }
    m.importance_gain.assign(m.feature_names.size(), 0.0);
    m.importance_weight.assign(m.feature_names.size(), 0.0);
    const auto& gain = j.at("importance_gain");
    const auto& weight = j.at("importance_weight");
    for (std::size_t f = 0; f < m.feature_names.size(); ++f) {
      m.importance_gain[f] = gain.value(m.feature_names[f], 0.0);
      m.importance_weight[f] = weight.value(m.feature_names[f], 0.0);
    }
    m.warnings = j.value("warnings", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw DataError(std::string("model: ") + e.what());
  }
  return m;
}

void save_model(const std::filesystem::path& path, const GbtModel& model) {
  io::write_text(path, model_to_json(model));
}

GbtModel load_model(const std::filesystem::path& path) { return model_from_json(io::read_text(path)); }

}  // namespace valvecav::gbt
