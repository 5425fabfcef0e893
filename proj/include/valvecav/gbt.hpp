#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "valvecav/dataset.hpp"
#include "valvecav/error.hpp"
#include "valvecav/features.hpp"

namespace valvecav::gbt {

struct GbtHyperParams {
  int num_rounds = 100;
  int max_depth = 6;
  double learning_rate = 0.3;  // eta
  double lambda = 1.0;         // L2 penalty on leaf weights
  double gamma = 0.0;          // penalty per leaf
  double min_child_hessian = 1.0;
  int num_classes = 2;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Binary logistic for two classes, softmax otherwise.
enum class Objective { kLogistic, kSoftmax };
Objective objective_for(int num_classes);

/// Gradient and hessian of the log-loss at the current raw scores.
/// scores and the outputs are row-major n x K (K = 1 for logistic).
struct GradHess {
  std::vector<double> grad;
  std::vector<double> hess;
};
GradHess grad_hess(Objective objective, std::span<const int> labels, std::span<const double> scores,
                   int num_classes);

/// Minimizer of G*w + (H + lambda)/2 * w^2.
double leaf_weight(double grad_sum, double hess_sum, double lambda);

/// Objective reduction of splitting a leaf into (L, R), minus gamma.
double split_gain(double grad_left, double hess_left, double grad_right, double hess_right,
                  double lambda, double gamma);

/// Node of a regression tree stored in a flat array; children by index.
/// Rows go left when value < threshold; missing values follow default_left.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  bool default_left = true;
  double weight = 0.0;  // leaf output before shrinkage
  double gain = 0.0;    // split gain for internal nodes
  double hess_sum = 0.0;

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  int leaf_index(std::span<const double> row) const;
  double predict(std::span<const double> row) const { return nodes[leaf_index(row)].weight; }
  int depth() const;
  std::size_t num_leaves() const;
};

/// Column-major numeric matrix used for training.
struct ColumnMatrix {
  std::size_t num_rows = 0;
  std::vector<std::vector<double>> columns;

  static ColumnMatrix from_table(const FeatureTable& table);
  std::size_t num_cols() const { return columns.size(); }
};

/// Exact greedy tree growth, level by level over presorted columns.
class TreeGrower {
 public:
  TreeGrower(const ColumnMatrix& matrix, const GbtHyperParams& params);

  /// Grows one tree for the given per-row gradient statistics. If leaf_of_row
  /// is non-null it receives the leaf node index of every row.
  Tree grow(std::span<const double> grad, std::span<const double> hess,
            std::vector<int>* leaf_of_row = nullptr) const;

 private:
  const ColumnMatrix& matrix_;
  GbtHyperParams params_;
  std::vector<std::vector<std::uint32_t>> sorted_;   // non-missing rows by ascending value
  std::vector<std::vector<std::uint32_t>> missing_;  // rows with NaN per feature
};

struct ForestEntry {
  int round = 0;
  int class_index = 0;
  Tree tree;
};

struct GbtModel {
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;
  GbtHyperParams params;
  double base_score = 0.0;
  std::vector<ForestEntry> forest;
  std::vector<double> importance_gain;    // per feature, total split gain
  std::vector<double> importance_weight;  // per feature, number of splits
  Warnings warnings;

  int num_classes() const { return params.num_classes; }
  int trees_per_round() const { return params.num_classes > 2 ? params.num_classes : 1; }

  /// Raw margins (K values, or 1 for binary) for one row in model column order.
  std::vector<double> predict_raw(std::span<const double> row) const;
  /// Class probabilities (always num_classes values) for one row.
  std::vector<double> predict_proba(std::span<const double> row) const;
};

/// Trains on class indices in [0, num_classes).
GbtModel train(const ColumnMatrix& matrix, std::span<const int> labels,
               std::vector<std::string> feature_names, const GbtHyperParams& params);

/// Trains on a feature table; labels mapped through the task.
GbtModel train(const FeatureTable& table, const GbtHyperParams& params, Task task);

/// Per-row class probabilities, row-major rows x num_classes. Table columns are
/// matched to the model's features by name.
std::vector<double> predict(const GbtModel& model, const FeatureTable& table);

/// Regularized training objective: summed log-loss plus gamma*T + lambda/2 * sum(w^2)
/// over every tree, with w the shrunk leaf outputs. Uses the first
/// num_rounds rounds of the forest (all when negative).
double training_objective(const GbtModel& model, const ColumnMatrix& matrix,
                          std::span<const int> labels, int num_rounds = -1);

enum class ImportanceKind { kGain, kWeight };

/// (feature, score) pairs, descending by score, ties by name ascending.
std::vector<std::pair<std::string, double>> feature_importance(
    const GbtModel& model, ImportanceKind kind = ImportanceKind::kGain);

std::string model_to_json(const GbtModel& model);
GbtModel model_from_json(const std::string& text);
void save_model(const std::filesystem::path& path, const GbtModel& model);
GbtModel load_model(const std::filesystem::path& path);

std::vector<int> labels_for_task(const FeatureTable& table, Task task);

}  // namespace valvecav::gbt
