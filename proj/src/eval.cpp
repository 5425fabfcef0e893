#include "valvecav/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "valvecav/io.hpp"
#include "valvecav/nosw.hpp"

namespace valvecav::eval {

std::size_t ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

ConfusionMatrix confusion(std::span<const int> actual, std::span<const int> predicted,
                          std::vector<std::string> classes) {
  if (actual.size() != predicted.size()) {
    throw DataError("confusion: " + std::to_string(actual.size()) + " actual vs " +
                    std::to_string(predicted.size()) + " predicted labels");
  }
  ConfusionMatrix cm;
  cm.classes = std::move(classes);
  const auto k = cm.classes.size();
  cm.counts.assign(k * k, 0);
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const int a = actual[i];
    const int p = predicted[i];
    if (a < 0 || static_cast<std::size_t>(a) >= k || p < 0 || static_cast<std::size_t>(p) >= k) {
      throw DataError("confusion: unknown label at row " + std::to_string(i));
    }
    ++cm.counts[static_cast<std::size_t>(a) * k + static_cast<std::size_t>(p)];
  }
  return cm;
}

namespace {
double ratio_or_zero(double num, double den, bool& undefined) {
  if (den == 0.0) {
    undefined = true;
    return 0.0;
  }
  return num / den;
}
}  // namespace

Scores scores(const ConfusionMatrix& cm) {
  const std::size_t total = cm.total();
  if (total == 0) throw DataError("scores: empty confusion matrix");
  const std::size_t k = cm.size();
  Scores s;
  std::size_t trace = 0;
  for (std::size_t c = 0; c < k; ++c) trace += cm.at(c, c);
  s.accuracy = static_cast<double>(trace) / static_cast<double>(total);
  for (std::size_t c = 0; c < k; ++c) {
    ClassScores cs;
    cs.tp = cm.at(c, c);
    for (std::size_t o = 0; o < k; ++o) {
      if (o == c) continue;
      cs.fp += cm.at(o, c);
      cs.fn += cm.at(c, o);
    }
    cs.tn = total - cs.tp - cs.fp - cs.fn;
    const auto tp = static_cast<double>(cs.tp);
    cs.precision = ratio_or_zero(tp, tp + static_cast<double>(cs.fp), cs.undefined);
    cs.recall = ratio_or_zero(tp, tp + static_cast<double>(cs.fn), cs.undefined);
    cs.f1 = ratio_or_zero(2.0 * cs.precision * cs.recall, cs.precision + cs.recall, cs.undefined);
    s.macro_precision += cs.precision;
    s.macro_recall += cs.recall;
    s.macro_f1 += cs.f1;
    s.per_class.push_back(cs);
  }
  s.macro_precision /= static_cast<double>(k);
  s.macro_recall /= static_cast<double>(k);
  s.macro_f1 /= static_cast<double>(k);
  return s;
}

RocCurve roc_auc_binary(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw DataError("roc: score/label length mismatch");
  std::size_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) {
      ++pos;
    } else if (labels[i] == 0) {
      ++neg;
    } else {
      throw DataError("roc: labels must be 0 or 1");
    }
    if (std::isnan(scores[i])) throw NumericError("roc: NaN score at row " + std::to_string(i));
  }
  if (pos == 0 || neg == 0) throw DataError("roc: both classes must be present");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve roc;
  roc.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  double area = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    const std::size_t tp0 = tp, fp0 = fp;
    while (i < order.size() && scores[order[i]] == threshold) {
      (labels[order[i]] == 1 ? tp : fp) += 1;
      ++i;
    }
    // trapezoid in count units, normalized once at the end
    area += static_cast<double>(fp - fp0) * 0.5 * static_cast<double>(tp + tp0);
    roc.points.push_back({threshold, static_cast<double>(fp) / static_cast<double>(neg),
                          static_cast<double>(tp) / static_cast<double>(pos)});
  }
  roc.auc = area / (static_cast<double>(pos) * static_cast<double>(neg));
  return roc;
}

RocCurve roc_auc_multiclass(std::span<const double> probabilities, std::span<const int> labels,
                            std::size_t num_classes) {
  if (num_classes < 2) throw DataError("roc: need at least 2 classes");
  if (probabilities.size() != labels.size() * num_classes) {
    throw DataError("roc: probability matrix shape does not match labels");
  }
  std::vector<int> onehot(probabilities.size(), 0);
  for (std::size_t j = 0; j < labels.size(); ++j) {
    double sum = 0.0;
    for (std::size_t c = 0; c < num_classes; ++c) sum += probabilities[j * num_classes + c];
    if (std::abs(sum - 1.0) > 1e-9) {
      throw DataError("roc: probability row " + std::to_string(j) + " sums to " + io::format_double(sum));
    }
    if (labels[j] < 0 || static_cast<std::size_t>(labels[j]) >= num_classes) {
      throw DataError("roc: label out of range at row " + std::to_string(j));
    }
    onehot[j * num_classes + static_cast<std::size_t>(labels[j])] = 1;
  }
  return roc_auc_binary(probabilities, onehot);
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw DataError("pearson: length mismatch");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw NumericError("pearson: zero-variance input");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::vector<double> subsequence_correlation(const SignalRecord& record, std::size_t window_size) {
  const auto segs = segment_signal(record, window_size);
  if (segs.size() < 2) throw DataError("correlation needs at least 2 segments");
  for (const auto& s : segs) {
    const auto x = s.samples();
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) {
      throw NumericError("segment " + std::to_string(s.window_index) + " has zero variance");
    }
  }
  const std::size_t m = segs.size();
  std::vector<double> r(m * m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      r[i * m + j] = r[j * m + i] = pearson(segs[i].samples(), segs[j].samples());
    }
  }
  return r;
}

std::vector<int> argmax_rows(std::span<const double> probabilities, std::size_t num_classes) {
  std::vector<int> out(probabilities.size() / num_classes);
  for (std::size_t r = 0; r < out.size(); ++r) {
    auto row = probabilities.subspan(r * num_classes, num_classes);
    out[r] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

EvalReport evaluate(std::span<const double> probabilities, std::span<const int> labels,
                    std::vector<std::string> classes, const std::string& task) {
  const std::size_t k = classes.size();
  if (k < 2) throw DataError("evaluate: need at least 2 classes");
  if (probabilities.size() != labels.size() * k) throw DataError("evaluate: shape mismatch");
  EvalReport rep;
  rep.task = task;
  rep.rows = labels.size();
  const auto predicted = argmax_rows(probabilities, k);
  rep.confusion = confusion(labels, predicted, std::move(classes));
  rep.scores = scores(rep.confusion);
  if (k == 2) {
    std::vector<double> positive(labels.size());
    for (std::size_t r = 0; r < labels.size(); ++r) positive[r] = probabilities[r * 2 + 1];
    rep.roc = roc_auc_binary(positive, labels);
  } else {
    rep.roc = roc_auc_multiclass(probabilities, labels, k);
  }
  return rep;
}

std::string EvalReport::to_json() const {
  nlohmann::json j;
  j["task"] = task;
  j["rows"] = rows;
  j["classes"] = confusion.classes;
  nlohmann::json cm = nlohmann::json::array();
  for (std::size_t a = 0; a < confusion.size(); ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t p = 0; p < confusion.size(); ++p) row.push_back(confusion.at(a, p));
    cm.push_back(std::move(row));
  }
  j["confusion_matrix"] = std::move(cm);
  j["accuracy"] = scores.accuracy;
  nlohmann::json per = nlohmann::json::array();
  for (std::size_t c = 0; c < scores.per_class.size(); ++c) {
    const auto& s = scores.per_class[c];
    per.push_back({{"class", confusion.classes[c]},
                   {"precision", s.precision},
                   {"recall", s.recall},
                   {"f1", s.f1},
                   {"tp", s.tp},
                   {"fp", s.fp},
                   {"fn", s.fn},
                   {"tn", s.tn},
                   {"undefined_ratio", s.undefined}});
  }
  j["per_class"] = std::move(per);
  j["averaging"] = "macro (unweighted mean over classes)";
  j["macro_precision"] = scores.macro_precision;
  j["macro_recall"] = scores.macro_recall;
  j["macro_f1"] = scores.macro_f1;
  j["auc"] = roc.auc;
  j["roc_construction"] =
      confusion.size() == 2 ? "binary" : "one-hot flattened (micro-averaged)";
  j["roc_points"] = roc.points.size();
  return j.dump(2) + "\n";
}

std::string roc_svg(const RocCurve& roc) {
  constexpr double size = 400.0, margin = 40.0;
  auto sx = [&](double x) { return margin + x * size; };
  auto sy = [&](double y) { return margin + (1.0 - y) * size; };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\">\n"
      << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << size << "\" height=\""
      << size << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(1) << "\" y2=\"" << sy(1)
      << "\" stroke=\"gray\" stroke-dasharray=\"4\"/>\n<polyline fill=\"none\" stroke=\"blue\" points=\"";
  for (const auto& p : roc.points) svg << sx(p.fpr) << ',' << sy(p.tpr) << ' ';
  svg << "\"/>\n<text x=\"" << margin << "\" y=\"25\">ROC (AUC = " << io::format_double(roc.auc)
      << ")</text>\n<text x=\"200\" y=\"470\">FPR</text>\n<text x=\"5\" y=\"250\">TPR</text>\n</svg>\n";
  return svg.str();
}

std::string confusion_svg(const ConfusionMatrix& cm) {
  const std::size_t k = cm.size();
  constexpr double cell = 80.0, left = 180.0, top = 60.0;
  std::size_t peak = 1;
  for (auto c : cm.counts) peak = std::max(peak, c);
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << left + cell * static_cast<double>(k) + 20
      << "\" height=\"" << top + cell * static_cast<double>(k) + 20 << "\">\n"
      << "<text x=\"" << left << "\" y=\"20\">rows: actual, columns: predicted</text>\n";
  for (std::size_t a = 0; a < k; ++a) {
    svg << "<text x=\"5\" y=\"" << top + cell * (static_cast<double>(a) + 0.55) << "\">"
        << cm.classes[a] << "</text>\n";
    for (std::size_t p = 0; p < k; ++p) {
      const int shade = 255 - static_cast<int>(200.0 * static_cast<double>(cm.at(a, p)) / static_cast<double>(peak));
      const double x = left + cell * static_cast<double>(p);
      const double y = top + cell * static_cast<double>(a);
      svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
          << "\" fill=\"rgb(" << shade << ',' << shade << ",255)\" stroke=\"black\"/>\n"
          << "<text x=\"" << x + cell / 2 - 10 << "\" y=\"" << y + cell / 2 + 5 << "\">" << cm.at(a, p)
          << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_report(const std::filesystem::path& dir, const EvalReport& report) {
  std::filesystem::create_directories(dir);
  io::write_text(dir / "eval.json", report.to_json());
  std::ostringstream roc;
  roc << "threshold,fpr,tpr\n";
  for (const auto& p : report.roc.points) {
    roc << (std::isinf(p.threshold) ? std::string("inf") : io::format_double(p.threshold)) << ','
        << io::format_double(p.fpr) << ',' << io::format_double(p.tpr) << '\n';
  }
  io::write_text(dir / "roc.csv", roc.str());
  std::ostringstream cm;
  cm << "actual";
  for (const auto& c : report.confusion.classes) cm << ',' << c;
  cm << '\n';
  for (std::size_t a = 0; a < report.confusion.size(); ++a) {
    cm << report.confusion.classes[a];
    for (std::size_t p = 0; p < report.confusion.size(); ++p) cm << ',' << report.confusion.at(a, p);
    cm << '\n';
  }
  io::write_text(dir / "confusion.csv", cm.str());
  io::write_text(dir / "roc.svg", roc_svg(report.roc));
  io::write_text(dir / "confusion.svg", confusion_svg(report.confusion));
}

}  // namespace valvecav::eval
