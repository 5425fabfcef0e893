#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "valvecav/dataset.hpp"

namespace valvecav::eval {

/// Rows are actual classes, columns predicted classes.
struct ConfusionMatrix {
  std::vector<std::string> classes;
  std::vector<std::size_t> counts;  // row-major K x K

  std::size_t size() const { return classes.size(); }
  std::size_t at(std::size_t actual, std::size_t predicted) const {
    return counts[actual * size() + predicted];
  }
  std::size_t total() const;
};

ConfusionMatrix confusion(std::span<const int> actual, std::span<const int> predicted,
                          std::vector<std::string> classes);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  bool undefined = false;  // some ratio was 0/0 and reported as 0
};

/// Per-class scores use a one-vs-rest reduction; macro values are unweighted means.
struct Scores {
  double accuracy = 0.0;
  std::vector<ClassScores> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
};

Scores scores(const ConfusionMatrix& cm);

struct RocPoint {
  double threshold = 0.0;  // +inf for the (0, 0) start
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

/// Threshold sweep over distinct scores in descending order, tied scores
/// stepped together; trapezoidal area. labels are 0/1.
RocCurve roc_auc_binary(std::span<const double> scores, std::span<const int> labels);

/// Micro-averaged curve: one-hot labels and probabilities flattened row-major
/// into n*k binary pairs. probabilities is row-major n x k.
RocCurve roc_auc_multiclass(std::span<const double> probabilities, std::span<const int> labels,
                            std::size_t num_classes);

double pearson(std::span<const double> a, std::span<const double> b);

/// Pearson r between every pair of a record's NOSW segments; row-major s x s.
std::vector<double> subsequence_correlation(const SignalRecord& record, std::size_t window_size);

struct EvalReport {
  std::string task;
  ConfusionMatrix confusion;
  Scores scores;
  RocCurve roc;
  std::size_t rows = 0;

  std::string to_json() const;
};

/// Argmax predictions (ties to the lower class) from row-major probabilities.
std::vector<int> argmax_rows(std::span<const double> probabilities, std::size_t num_classes);

EvalReport evaluate(std::span<const double> probabilities, std::span<const int> labels,
                    std::vector<std::string> classes, const std::string& task);

/// Writes eval.json, roc.csv, confusion.csv, roc.svg and confusion.svg.
void write_report(const std::filesystem::path& dir, const EvalReport& report);

std::string roc_svg(const RocCurve& roc);
std::string confusion_svg(const ConfusionMatrix& cm);

}  // namespace valvecav::eval
