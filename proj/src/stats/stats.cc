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

#include "shapaudit/stats/stats.h"

#include <cmath>
#include <cstdlib>
#include <string>

#include "shapaudit/errors.h"

namespace shapaudit {

namespace {

void CheckBinary(std::span<const int> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0 && v[i] != 1) {
      throw ContractViolation(std::string(what) + "[" + std::to_string(i) +
                              "] is not binary");
    }
  }
}

double Ratio(std::int64_t num, std::int64_t den, bool& undefined) {
  if (den == 0) {
    undefined = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

double F1(double precision, double recall) {
  const double s = precision + recall;
  return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

}  // namespace

ContingencyTable BuildContingency(std::span<const int> preds1,
                                  std::span<const int> preds2,
                                  std::span<const int> labels) {
  if (preds1.size() != labels.size() || preds2.size() != labels.size()) {
    throw ContractViolation("BuildContingency: vectors differ in length");
  }
  CheckBinary(preds1, "preds1");
  CheckBinary(preds2, "preds2");
  CheckBinary(labels, "labels");
  ContingencyTable t;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool ok1 = preds1[i] == labels[i];
    const bool ok2 = preds2[i] == labels[i];
    if (ok1 && ok2) {
      ++t.a;
    } else if (!ok1 && ok2) {
      ++t.b;
    } else if (ok1 && !ok2) {
      ++t.c;
    } else {
      ++t.d;
    }
  }
  return t;
}

double ChiSquare1Survival(double chi2) {
  if (chi2 <= 0.0) return 1.0;
  return std::erfc(std::sqrt(chi2 / 2.0));
}

McNemarResult McNemar(const ContingencyTable& table) {
  if (table.a < 0 || table.b < 0 || table.c < 0 || table.d < 0) {
    throw ContractViolation("McNemar: negative count");
  }
  McNemarResult r;
  const std::int64_t disagreements = table.b + table.c;
  r.small_sample = disagreements < 25;
  if (disagreements == 0) return r;
  const double diff =
      static_cast<double>(std::llabs(table.b - table.c)) - 1.0;
  r.applicable = true;
  // |b - c| = 0 gives (0 - 1)^2; the correction is applied unconditionally.
  r.chi2 = diff * diff / static_cast<double>(disagreements);
  r.p_value = ChiSquare1Survival(r.chi2);
  return r;
}

MetricsBundle MetricsFromCounts(const ConfusionCounts& c) {
  if (c.total() <= 0) throw ContractViolation("metrics over an empty set");
  MetricsBundle m;
  m.counts = c;
  const double n = static_cast<double>(c.total());
  m.accuracy = static_cast<double>(c.tp + c.tn) / n;

  m.precision = Ratio(c.tp, c.tp + c.fp, m.no_predicted_positives);
  m.recall = Ratio(c.tp, c.tp + c.fn, m.no_actual_positives);
  bool unused = false;
  const double precision0 = Ratio(c.tn, c.tn + c.fn, m.no_predicted_negatives);
  const double recall0 = Ratio(c.tn, c.tn + c.fp, m.no_actual_negatives);
  m.false_positive_rate = Ratio(c.fp, c.fp + c.tn, unused);

  m.f1_class1 = F1(m.precision, m.recall);
  m.f1_class0 = F1(precision0, recall0);
  m.f1_binary = m.f1_class1;
  m.f1_macro = (m.f1_class0 + m.f1_class1) / 2.0;
  const double support1 = static_cast<double>(c.tp + c.fn);
  const double support0 = static_cast<double>(c.tn + c.fp);
  m.f1_weighted = (support0 * m.f1_class0 + support1 * m.f1_class1) / n;
  return m;
}

MetricsBundle ClassificationMetrics(std::span<const int> preds,
                                    std::span<const int> labels) {
  if (preds.size() != labels.size()) {
    throw ContractViolation("ClassificationMetrics: length mismatch");
  }
  if (preds.empty()) throw ContractViolation("ClassificationMetrics: empty");
  CheckBinary(preds, "preds");
  CheckBinary(labels, "labels");
  ConfusionCounts c;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] == 1) {
      ++(labels[i] == 1 ? c.tp : c.fp);
    } else {
      ++(labels[i] == 1 ? c.fn : c.tn);
    }
  }
  return MetricsFromCounts(c);
}

}  // namespace shapaudit
