#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tweetsense/sentiment.hpp"

namespace tweetsense::metrics {

// Two-class confusion matrix in the printed layout of the reference
// report: rows are the actual class, columns the predicted class.
//
//                  predicted +   predicted -
//   actual +          tp            fp
//   actual -          fn            tn
//
// The cell names follow that layout rather than the usual convention.
struct ConfusionMatrix2 {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix2&, const ConfusionMatrix2&) = default;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
  bool precision_degenerate = false;  // zero denominator
  bool recall_degenerate = false;
};

struct ClassReport {
  ClassMetrics positive;
  ClassMetrics negative;
  ClassMetrics weighted;  // support-weighted average; support is the total
};

// (actual, predicted) pairs. Throws std::invalid_argument on a neutral label.
ConfusionMatrix2 confusion(const std::vector<std::pair<sentiment::Label, sentiment::Label>>& pairs);

ClassReport report(const ConfusionMatrix2& cm);

// (tp + tn) / total. Throws std::invalid_argument when total is zero.
double accuracy(const ConfusionMatrix2& cm);

// Half-up rounding to two decimals, as used for display.
double round2(double value);

// Matrix, per-class metrics and accuracy with a fixed key order.
std::string report_json(const ConfusionMatrix2& cm, const ClassReport& rep);
void write_report_json(const std::filesystem::path& path, const ConfusionMatrix2& cm,
                       const ClassReport& rep);

}  // namespace tweetsense::metrics
