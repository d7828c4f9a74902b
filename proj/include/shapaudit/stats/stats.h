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

#ifndef SHAPAUDIT_STATS_STATS_H_
#define SHAPAUDIT_STATS_STATS_H_

#include <cstdint>
#include <span>

namespace shapaudit {

// Paired correctness of two classifiers on the same instances.
struct ContingencyTable {
  std::int64_t a = 0;  // both correct
  std::int64_t b = 0;  // model 1 wrong, model 2 correct
  std::int64_t c = 0;  // model 1 correct, model 2 wrong
  std::int64_t d = 0;  // both wrong

  std::int64_t total() const { return a + b + c + d; }
};

ContingencyTable BuildContingency(std::span<const int> preds1,
                                  std::span<const int> preds2,
                                  std::span<const int> labels);

struct McNemarResult {
  // False when b + c == 0: the statistic is undefined and chi2/p are unset.
  bool applicable = false;
  double chi2 = 0.0;
  double p_value = 1.0;
  // b + c < 25, where the chi-square approximation is coarse.
  bool small_sample = false;
};

// Continuity-corrected McNemar statistic (|b - c| - 1)^2 / (b + c), with the
// p-value from the chi-square distribution with one degree of freedom.
McNemarResult McNemar(const ContingencyTable& table);

// P(X > chi2) for X ~ chi-square(1), i.e. erfc(sqrt(chi2 / 2)).
double ChiSquare1Survival(double chi2);

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
};

// Binary metrics with the biased class (1) as positive. A ratio with a zero
// denominator is reported as 0 and flagged.
struct MetricsBundle {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1_binary = 0.0;
  double f1_macro = 0.0;
  double f1_weighted = 0.0;
  double f1_class0 = 0.0;
  double f1_class1 = 0.0;
  double false_positive_rate = 0.0;
  ConfusionCounts counts;
  bool no_predicted_positives = false;
  bool no_actual_positives = false;
  bool no_predicted_negatives = false;
  bool no_actual_negatives = false;
};

MetricsBundle ClassificationMetrics(std::span<const int> preds,
                                    std::span<const int> labels);
MetricsBundle MetricsFromCounts(const ConfusionCounts& counts);

}  // namespace shapaudit

#endif  // SHAPAUDIT_STATS_STATS_H_
