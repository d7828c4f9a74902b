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

#ifndef SHAPAUDIT_TYPES_H_
#define SHAPAUDIT_TYPES_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace shapaudit {

// Label convention: 0 = non-biased, 1 = biased.
inline constexpr int kNonBiased = 0;
inline constexpr int kBiased = 1;

struct Instance {
  std::string instance_id;
  std::string text;
  int label = kNonBiased;
};

// Probability pair in served label order (non-biased, biased).
using ClassProbabilities = std::array<double, 2>;

// Model output for one instance, joined with the instance's ground truth.
struct PredictionRecord {
  std::string instance_id;
  double p_non_biased = 0.0;
  double p_biased = 0.0;
  // argmax over the pair; ties go to label 0.
  int pred_label = kNonBiased;
  int true_label = kNonBiased;
};

// Builds a record from a probability pair. Ties resolve to non-biased.
PredictionRecord MakePredictionRecord(const Instance& instance,
                                      const ClassProbabilities& probs);

enum class OutcomeCategory { kTP, kFP, kTN, kFN };

inline constexpr std::array<OutcomeCategory, 4> kAllCategories = {
    OutcomeCategory::kTP, OutcomeCategory::kFP, OutcomeCategory::kTN,
    OutcomeCategory::kFN};

// Throws ContractViolation unless both inputs are 0 or 1.
OutcomeCategory Categorize(int pred, int label);

std::string_view CategoryName(OutcomeCategory category);
std::optional<OutcomeCategory> ParseCategory(std::string_view name);

}  // namespace shapaudit

#endif  // SHAPAUDIT_TYPES_H_
