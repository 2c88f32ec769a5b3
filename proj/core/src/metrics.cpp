#include "tweetsense/metrics.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace tweetsense::metrics {
namespace {

struct Ratio {
  double value;
  bool degenerate;
};

Ratio ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return {0.0, true};
  return {static_cast<double>(num) / static_cast<double>(den), false};
}

ClassMetrics class_metrics(std::uint64_t hit, std::uint64_t predicted, std::uint64_t actual) {
  ClassMetrics m;
  const auto p = ratio(hit, predicted);
  const auto r = ratio(hit, actual);
  m.precision = p.value;
  m.precision_degenerate = p.degenerate;
  m.recall = r.value;
  m.recall_degenerate = r.degenerate;
  m.f1 = (m.precision + m.recall) > 0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  m.support = actual;
  return m;
}

nlohmann::ordered_json class_json(const ClassMetrics& m) {
  nlohmann::ordered_json j;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["support"] = m.support;
  j["precision_rounded"] = round2(m.precision);
  j["recall_rounded"] = round2(m.recall);
  j["f1_rounded"] = round2(m.f1);
  return j;
}

}  // namespace

ConfusionMatrix2 confusion(const std::vector<std::pair<sentiment::Label, sentiment::Label>>& pairs) {
  ConfusionMatrix2 cm;
  for (const auto& [actual, predicted] : pairs) {
    if (actual.is_neutral() || predicted.is_neutral()) {
      throw std::invalid_argument("confusion: neutral (0.5) labels are not allowed");
    }
    const bool a = actual == sentiment::Label::positive();
    const bool p = predicted == sentiment::Label::positive();
    if (a && p) ++cm.tp;
    else if (a) ++cm.fp;
    else if (p) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

ClassReport report(const ConfusionMatrix2& cm) {
  ClassReport r;
  // Predicted-positive column is tp + fn; actual-positive row is tp + fp.
  r.positive = class_metrics(cm.tp, cm.tp + cm.fn, cm.tp + cm.fp);
  r.negative = class_metrics(cm.tn, cm.tn + cm.fp, cm.tn + cm.fn);

  const std::uint64_t total = cm.total();
  r.weighted.support = total;
  if (total > 0) {
    const double wp = static_cast<double>(r.positive.support) / static_cast<double>(total);
    const double wn = static_cast<double>(r.negative.support) / static_cast<double>(total);
    r.weighted.precision = wp * r.positive.precision + wn * r.negative.precision;
    r.weighted.recall = wp * r.positive.recall + wn * r.negative.recall;
    r.weighted.f1 = wp * r.positive.f1 + wn * r.negative.f1;
  } else {
    r.weighted.precision_degenerate = true;
    r.weighted.recall_degenerate = true;
  }
  return r;
}

double accuracy(const ConfusionMatrix2& cm) {
  if (cm.total() == 0) throw std::invalid_argument("accuracy: empty confusion matrix");
  return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

double round2(double value) {
  // The epsilon keeps values like 0.805 (stored as 0.80499...) rounding up.
  return std::floor(value * 100.0 + 0.5 + 1e-9) / 100.0;
}

std::string report_json(const ConfusionMatrix2& cm, const ClassReport& rep) {
  nlohmann::ordered_json j;
  j["confusion_matrix"] = {{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}};
  j["positive"] = class_json(rep.positive);
  j["negative"] = class_json(rep.negative);
  j["weighted_avg"] = class_json(rep.weighted);
  j["total"] = cm.total();
  if (cm.total() > 0) {
    j["accuracy"] = accuracy(cm);
  } else {
    j["accuracy"] = nullptr;
  }
  return j.dump(2) + "\n";
}

void write_report_json(const std::filesystem::path& path, const ConfusionMatrix2& cm,
                       const ClassReport& rep) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << report_json(cm, rep);
}

}  // namespace tweetsense::metrics
