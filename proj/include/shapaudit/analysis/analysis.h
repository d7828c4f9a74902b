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

#ifndef SHAPAUDIT_ANALYSIS_ANALYSIS_H_
#define SHAPAUDIT_ANALYSIS_ANALYSIS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "shapaudit/explainer/explainer.h"
#include "shapaudit/stats/stats.h"
#include "shapaudit/types.h"
#include "shapaudit/words/word_aggregation.h"

namespace shapaudit {

struct ExplainedInstance {
  std::string instance_id;
  std::string text;
  int true_label = kNonBiased;
  int pred_label = kNonBiased;
  double p_biased = 0.0;
  std::vector<TokenAttribution> token_attrs;
  std::vector<WordAttribution> word_attrs;
  OutcomeCategory category = OutcomeCategory::kTN;
  // Mean of |phi| over word_attrs.
  double mean_abs_phi = 0.0;

  Estimator estimator = Estimator::kExact;
  double base_value = 0.0;
  double full_value = 0.0;
  std::size_t original_token_count = 0;
};

// Groups tokens into words and fills in the outcome category. Requires a
// successful explanation.
ExplainedInstance AssembleExplainedInstance(const Instance& instance,
                                            const InstanceExplanation& expl);

struct WordStats {
  std::string word_key;
  double mean_abs_phi = 0.0;
  double mean_signed_phi = 0.0;
  std::size_t count = 0;
};

// Sort order used by every ranked word list: mean |phi| descending, then
// key ascending.
bool RanksBefore(const WordStats& lhs, const WordStats& rhs);

// Per-key statistics over all word occurrences, ranked. Punctuation-only
// words are outside the scope. Throws ContractViolation on empty input.
std::vector<WordStats> GlobalWordImportance(
    std::span<const ExplainedInstance> explained, std::size_t min_count = 1);

struct CategoryReport {
  OutcomeCategory category = OutcomeCategory::kTP;
  std::size_t n_instances = 0;
  double mean_abs_phi_per_instance = 0.0;
  std::vector<WordStats> top_words;
  // Share of in-scope word occurrences with phi > 0.
  double positive_fraction = 0.0;
  std::size_t positive_count = 0;
  std::size_t negative_count = 0;
  std::size_t zero_count = 0;
  double mean_p_biased = 0.0;
  // Most frequent keys (count descending, key ascending), same length cap as
  // top_words.
  std::vector<WordStats> frequent_words;
  std::size_t word_occurrences = 0;
  std::size_t distinct_words = 0;
};

CategoryReport CategoryStats(std::span<const ExplainedInstance> explained,
                             OutcomeCategory category, std::size_t top_k = 100);

struct SamplingResult {
  // Category-major (in the order requested), dataset order within each.
  std::vector<PredictionRecord> records;
  std::map<OutcomeCategory, std::size_t> available;
  std::map<OutcomeCategory, std::size_t> selected;
  std::vector<std::string> warnings;
};

inline const std::vector<OutcomeCategory> kDefaultSampleCategories = {
    OutcomeCategory::kTP, OutcomeCategory::kFP, OutcomeCategory::kTN};

// Uniform sampling without replacement of min(cap, available) records per
// category, reproducible from `seed`.
SamplingResult StratifiedSample(
    std::span<const PredictionRecord> records, std::size_t cap = 100,
    const std::vector<OutcomeCategory>& categories = kDefaultSampleCategories,
    std::uint64_t seed = 42);

struct Composition {
  std::map<std::string, std::size_t> counts;
  std::map<std::string, double> fractions;
  std::size_t total = 0;
  std::vector<std::string> warnings;
};

inline constexpr const char* kOtherCategory = "other";

// Histogram of lexicon categories over a ranked word list; words missing
// from the lexicon count as "other".
Composition WordCategoryComposition(
    std::span<const WordStats> top_words,
    const std::map<std::string, std::string>& lexicon);

// Everything the comparison needs from one model's run.
struct ModelSummary {
  std::string name;
  // Instance ids of the evaluated split.
  std::vector<std::string> instance_ids;
  MetricsBundle metrics;
  std::vector<WordStats> global_words;
  std::map<OutcomeCategory, CategoryReport> categories;
};

struct MagnitudeDelta {
  OutcomeCategory category = OutcomeCategory::kTP;
  double mean_abs_phi_a = 0.0;
  double mean_abs_phi_b = 0.0;
  double delta = 0.0;  // a - b
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

struct ModelSpecificWord {
  std::string word_key;
  double mean_abs_phi = 0.0;
  // 1-based rank in the other model's global list; 0 when absent there.
  std::size_t rank_in_other = 0;
};

struct ComparisonReport {
  std::string model_a;
  std::string model_b;
  std::size_t top_k = 10;
  std::vector<std::string> shared_indicators;
  std::vector<std::string> only_a;
  std::vector<std::string> only_b;

  std::int64_t false_positives_a = 0;
  std::int64_t false_positives_b = 0;
  double false_positive_rate_a = 0.0;
  double false_positive_rate_b = 0.0;
  std::vector<std::string> fp_shared_words;
  std::vector<std::string> fp_only_a;
  std::vector<std::string> fp_only_b;

  std::vector<MagnitudeDelta> magnitude;
  // FP mean |phi| exceeds TP mean |phi| (attribution-prediction
  // misalignment).
  bool misaligned_a = false;
  bool misaligned_b = false;

  std::vector<ModelSpecificWord> specific_a;
  std::vector<ModelSpecificWord> specific_b;
};

// Throws ContractViolation when the two models were not run on the same
// instances.
ComparisonReport CompareModels(const ModelSummary& a, const ModelSummary& b,
                               std::size_t top_k = 10);

}  // namespace shapaudit

#endif  // SHAPAUDIT_ANALYSIS_ANALYSIS_H_
