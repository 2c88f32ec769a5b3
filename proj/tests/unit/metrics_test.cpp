#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "json.hpp"

#include "tweetsense/metrics.hpp"

using namespace tweetsense;
using sentiment::Label;
using Pairs = std::vector<std::pair<Label, Label>>;

namespace {

const Label P = Label::positive();
const Label N = Label::negative();

// Reference confusion matrix.
const metrics::ConfusionMatrix2 kPublished{8298, 1941, 1946, 7924};

}  // namespace

TEST(Confusion, Examples) {
  EXPECT_EQ(metrics::confusion({{P, P}, {P, N}, {N, P}, {N, N}}),
            (metrics::ConfusionMatrix2{1, 1, 1, 1}));
  EXPECT_EQ(metrics::confusion({}), (metrics::ConfusionMatrix2{}));
  EXPECT_EQ(metrics::confusion({{P, P}, {P, P}, {P, P}}), (metrics::ConfusionMatrix2{3, 0, 0, 0}));
  EXPECT_THROW(metrics::confusion({{Label::neutral(), P}}), std::invalid_argument);
  EXPECT_THROW(metrics::confusion({{P, Label::neutral()}}), std::invalid_argument);
}

TEST(Report, RegeneratesReferenceTable) {
  const auto r = metrics::report(kPublished);
  EXPECT_EQ(metrics::round2(r.positive.precision), 0.81);
  EXPECT_EQ(metrics::round2(r.positive.recall), 0.81);
  EXPECT_EQ(metrics::round2(r.positive.f1), 0.81);
  EXPECT_EQ(r.positive.support, 10239u);
  EXPECT_EQ(metrics::round2(r.negative.precision), 0.80);
  EXPECT_EQ(metrics::round2(r.negative.recall), 0.80);
  EXPECT_EQ(metrics::round2(r.negative.f1), 0.80);
  EXPECT_EQ(r.negative.support, 9870u);
  EXPECT_EQ(metrics::round2(r.weighted.precision), 0.81);
  EXPECT_EQ(metrics::round2(r.weighted.recall), 0.81);
  EXPECT_EQ(metrics::round2(r.weighted.f1), 0.81);
  EXPECT_EQ(r.weighted.support, 20109u);
  EXPECT_DOUBLE_EQ(r.positive.precision, 8298.0 / 10244.0);
  EXPECT_DOUBLE_EQ(r.positive.recall, 8298.0 / 10239.0);
}

TEST(Report, PerfectClassifier) {
  const auto r = metrics::report({5, 0, 0, 7});
  for (const auto* m : {&r.positive, &r.negative, &r.weighted}) {
    EXPECT_EQ(m->precision, 1.0);
    EXPECT_EQ(m->recall, 1.0);
    EXPECT_EQ(m->f1, 1.0);
  }
}

TEST(Report, ZeroDenominatorIsFlagged) {
  const auto r = metrics::report({0, 4, 0, 6});
  EXPECT_EQ(r.positive.precision, 0.0);
  EXPECT_TRUE(r.positive.precision_degenerate);
  EXPECT_EQ(r.positive.f1, 0.0);
  EXPECT_FALSE(r.negative.precision_degenerate);
}

TEST(Accuracy, Examples) {
  EXPECT_NEAR(metrics::accuracy(kPublished), 0.8067, 1e-4);
  EXPECT_DOUBLE_EQ(metrics::accuracy(kPublished), 16222.0 / 20109.0);
  EXPECT_EQ(metrics::accuracy({3, 0, 0, 2}), 1.0);
  EXPECT_EQ(metrics::accuracy({0, 3, 2, 0}), 0.0);
  EXPECT_THROW(metrics::accuracy({}), std::invalid_argument);
}

TEST(Round2, HalfUp) {
  EXPECT_EQ(metrics::round2(0.805), 0.81);
  EXPECT_EQ(metrics::round2(0.8049), 0.80);
  EXPECT_EQ(metrics::round2(0.125), 0.13);
  EXPECT_EQ(metrics::round2(1.0), 1.0);
}

TEST(MetricsProperties, PermutationInvariant) {
  std::mt19937_64 rng(6);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 100; ++trial) {
    Pairs pairs;
    for (int i = 0; i < 50; ++i) pairs.emplace_back(coin(rng) ? P : N, coin(rng) ? P : N);
    const auto cm = metrics::confusion(pairs);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    EXPECT_EQ(metrics::confusion(pairs), cm);
    const auto a = metrics::report(cm);
    const auto b = metrics::report(metrics::confusion(pairs));
    EXPECT_EQ(a.weighted.f1, b.weighted.f1);
  }
}

TEST(MetricsProperties, WeightedF1BetweenClassF1) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> cell(0, 40);
  for (int trial = 0; trial < 2000; ++trial) {
    const metrics::ConfusionMatrix2 cm{cell(rng), cell(rng), cell(rng), cell(rng)};
    if (cm.total() == 0) continue;
    const auto r = metrics::report(cm);
    const double lo = std::min(r.positive.f1, r.negative.f1);
    const double hi = std::max(r.positive.f1, r.negative.f1);
    EXPECT_GE(r.weighted.f1, lo - 1e-15);
    EXPECT_LE(r.weighted.f1, hi + 1e-15);
    EXPECT_EQ(r.positive.support + r.negative.support, cm.total());
    for (const auto* m : {&r.positive, &r.negative}) {
      if (m->precision + m->recall > 0) {
        EXPECT_NEAR(m->f1, 2 * m->precision * m->recall / (m->precision + m->recall), 1e-15);
      }
    }
  }
}

TEST(ReportJson, KeyOrderAndValues) {
  const auto text = metrics::report_json(kPublished, metrics::report(kPublished));
  const auto j = nlohmann::ordered_json::parse(text);
  std::vector<std::string> keys;
  for (const auto& item : j.items()) keys.push_back(item.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"confusion_matrix", "positive", "negative",
                                            "weighted_avg", "total", "accuracy"}));
  EXPECT_EQ(j["confusion_matrix"]["tp"], 8298);
  EXPECT_EQ(j["total"], 20109);
  EXPECT_EQ(j["positive"]["support"], 10239);
}
