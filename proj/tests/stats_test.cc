/*
 * Copyright 2026 The shapaudit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "gtest/gtest.h"
#include "shapaudit/errors.h"
#include "shapaudit/stats/stats.h"

namespace shapaudit {
namespace {

// Reference metrics straight from the confusion-matrix definitions.
struct Reference {
  double accuracy, precision, recall, f1, f1_neg, macro, weighted, fpr;
};

Reference Oracle(const std::vector<int>& preds, const std::vector<int>& labels) {
  double tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] == 1 && labels[i] == 1) tp += 1;
    if (preds[i] == 1 && labels[i] == 0) fp += 1;
    if (preds[i] == 0 && labels[i] == 0) tn += 1;
    if (preds[i] == 0 && labels[i] == 1) fn += 1;
  }
  auto ratio = [](double a, double b) { return b == 0 ? 0.0 : a / b; };
  Reference r{};
  r.accuracy = (tp + tn) / (tp + fp + tn + fn);
  r.precision = ratio(tp, tp + fp);
  r.recall = ratio(tp, tp + fn);
  r.f1 = ratio(2 * tp, 2 * tp + fp + fn);
  r.f1_neg = ratio(2 * tn, 2 * tn + fn + fp);
  r.macro = (r.f1 + r.f1_neg) / 2;
  r.weighted = ratio(r.f1 * (tp + fn) + r.f1_neg * (tn + fp), tp + fp + tn + fn);
  r.fpr = ratio(fp, fp + tn);
  return r;
}

std::pair<std::vector<int>, std::vector<int>> FromCounts(int tp, int fp, int tn,
                                                         int fn) {
  std::vector<int> p, l;
  for (int i = 0; i < tp; ++i) p.push_back(1), l.push_back(1);
  for (int i = 0; i < fp; ++i) p.push_back(1), l.push_back(0);
  for (int i = 0; i < tn; ++i) p.push_back(0), l.push_back(0);
  for (int i = 0; i < fn; ++i) p.push_back(0), l.push_back(1);
  return {p, l};
}

TEST(McNemarTest, KnownStatistics) {
  const McNemarResult r = McNemar({0, 10, 25, 0});
  ASSERT_TRUE(r.applicable);
  EXPECT_NEAR(r.chi2, 5.6, 1e-12);
  EXPECT_FALSE(r.small_sample);
  const McNemarResult s = McNemar({3, 5, 5, 1});
  EXPECT_NEAR(s.chi2, 0.1, 1e-12);
  EXPECT_TRUE(s.small_sample);
}

TEST(McNemarTest, PublishedPValue) {
  EXPECT_NEAR(ChiSquare1Survival(5.723), 0.0167, 0.0005);
}

TEST(McNemarTest, SurvivalMatchesReferenceDistribution) {
  const boost::math::chi_squared dist(1.0);
  for (double x : {0.0, 0.01, 0.1, 0.5, 1.0, 2.5, 3.841, 5.723, 10.0, 25.0}) {
    EXPECT_NEAR(ChiSquare1Survival(x), boost::math::cdf(complement(dist, x)),
                1e-12)
        << x;
  }
}

TEST(McNemarTest, NoDiscordantPairsIsNotApplicable) {
  const McNemarResult r = McNemar({10, 0, 0, 4});
  EXPECT_FALSE(r.applicable);
}

TEST(McNemarTest, SymmetricAndMonotone) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> d(0, 200);
  for (int i = 0; i < 2000; ++i) {
    const int b = d(rng), c = d(rng), a = d(rng), dd = d(rng);
    const McNemarResult x = McNemar({a, b, c, dd});
    const McNemarResult y = McNemar({a, c, b, dd});
    EXPECT_EQ(x.applicable, y.applicable);
    EXPECT_EQ(x.chi2, y.chi2);
    EXPECT_EQ(x.p_value, y.p_value);
    EXPECT_GE(x.chi2, 0.0);
    EXPECT_GT(x.p_value, 0.0);
    EXPECT_LE(x.p_value, 1.0);
  }
  double prev = 1.0;
  for (double chi2 = 0; chi2 < 40; chi2 += 0.25) {
    const double p = ChiSquare1Survival(chi2);
    EXPECT_LE(p, prev);
    prev = p;
  }
}

TEST(ContingencyTest, Examples) {
  const std::vector<int> labels = {1, 0, 1, 1, 0, 0, 1, 0, 1, 0};
  std::vector<int> flipped;
  for (int l : labels) flipped.push_back(1 - l);
  ContingencyTable t = BuildContingency(labels, labels, labels);
  EXPECT_EQ(t.a, 10);
  EXPECT_EQ(t.b + t.c + t.d, 0);
  t = BuildContingency(labels, flipped, labels);
  EXPECT_EQ(t.c, 10);

  // Model 1 misses instance 0; model 2 misses instance 5.
  std::vector<int> p1 = labels, p2 = labels;
  p1[0] = 0;
  p2[5] = 1;
  t = BuildContingency(p1, p2, labels);
  EXPECT_EQ(t.b, 1);
  EXPECT_EQ(t.c, 1);
  EXPECT_EQ(t.a, 8);
  EXPECT_THROW(BuildContingency(p1, std::vector<int>{1}, labels),
               ContractViolation);
}

TEST(MetricsTest, HandExample) {
  const auto [p, l] = FromCounts(8, 2, 7, 3);
  const MetricsBundle m = ClassificationMetrics(p, l);
  EXPECT_NEAR(m.precision, 0.8, 1e-9);
  EXPECT_NEAR(m.recall, 8.0 / 11.0, 1e-9);
  EXPECT_NEAR(m.f1_binary, 16.0 / 21.0, 1e-9);
  EXPECT_NEAR(m.accuracy, 0.75, 1e-9);
  EXPECT_NEAR(m.false_positive_rate, 2.0 / 9.0, 1e-9);
  EXPECT_EQ(m.f1_macro, (m.f1_class0 + m.f1_class1) / 2);
}

TEST(MetricsTest, Perfect) {
  const auto [p, l] = FromCounts(5, 0, 5, 0);
  const MetricsBundle m = ClassificationMetrics(p, l);
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.f1_binary, 1.0);
  EXPECT_EQ(m.f1_macro, 1.0);
  EXPECT_EQ(m.f1_weighted, 1.0);
}

TEST(MetricsTest, ZeroDenominatorsAreFlagged) {
  const auto [p, l] = FromCounts(0, 0, 5, 0);
  const MetricsBundle m = ClassificationMetrics(p, l);
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_TRUE(m.no_predicted_positives);
  EXPECT_TRUE(m.no_actual_positives);
  EXPECT_FALSE(m.no_actual_negatives);
}

TEST(MetricsTest, RejectsBadInput) {
  EXPECT_THROW(ClassificationMetrics(std::vector<int>{}, std::vector<int>{}),
               ContractViolation);
  EXPECT_THROW(ClassificationMetrics(std::vector<int>{2}, std::vector<int>{1}),
               ContractViolation);
  EXPECT_THROW(ClassificationMetrics(std::vector<int>{1, 0}, std::vector<int>{1}),
               ContractViolation);
}

TEST(MetricsTest, FuzzAgainstOracle) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> len(1, 300);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 3000; ++trial) {
    const int n = len(rng);
    std::bernoulli_distribution skew(std::uniform_real_distribution<>(0, 1)(rng));
    std::vector<int> p(n), l(n);
    for (int i = 0; i < n; ++i) {
      p[i] = skew(rng);
      l[i] = coin(rng);
    }
    const MetricsBundle m = ClassificationMetrics(p, l);
    const Reference r = Oracle(p, l);
    EXPECT_NEAR(m.accuracy, r.accuracy, 1e-12);
    EXPECT_NEAR(m.precision, r.precision, 1e-12);
    EXPECT_NEAR(m.recall, r.recall, 1e-12);
    EXPECT_NEAR(m.f1_binary, r.f1, 1e-12);
    EXPECT_NEAR(m.f1_macro, r.macro, 1e-12);
    EXPECT_NEAR(m.f1_weighted, r.weighted, 1e-12);
    EXPECT_NEAR(m.false_positive_rate, r.fpr, 1e-12);
    for (double v : {m.accuracy, m.precision, m.recall, m.f1_binary,
                     m.f1_macro, m.f1_weighted, m.false_positive_rate}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    // Invariant under reordering.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<int> p2(n), l2(n);
    for (int i = 0; i < n; ++i) p2[i] = p[idx[i]], l2[i] = l[idx[i]];
    EXPECT_EQ(ClassificationMetrics(p2, l2).f1_macro, m.f1_macro);
  }
}

}  // namespace
}  // namespace shapaudit
