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

#include "shapaudit/types.h"

#include <string>

#include "shapaudit/errors.h"

namespace shapaudit {

PredictionRecord MakePredictionRecord(const Instance& instance,
                                      const ClassProbabilities& probs) {
  PredictionRecord record;
  record.instance_id = instance.instance_id;
  record.p_non_biased = probs[0];
  record.p_biased = probs[1];
  record.pred_label = probs[1] > probs[0] ? kBiased : kNonBiased;
  record.true_label = instance.label;
  return record;
}

OutcomeCategory Categorize(int pred, int label) {
  if ((pred != 0 && pred != 1) || (label != 0 && label != 1)) {
    throw ContractViolation("Categorize: labels must be binary, got pred=" +
                            std::to_string(pred) +
                            " label=" + std::to_string(label));
  }
  if (pred == kBiased) {
    return label == kBiased ? OutcomeCategory::kTP : OutcomeCategory::kFP;
  }
  return label == kBiased ? OutcomeCategory::kFN : OutcomeCategory::kTN;
}

std::string_view CategoryName(OutcomeCategory category) {
  switch (category) {
    case OutcomeCategory::kTP:
      return "TP";
    case OutcomeCategory::kFP:
      return "FP";
    case OutcomeCategory::kTN:
      return "TN";
    case OutcomeCategory::kFN:
      return "FN";
  }
  return "?";
}

std::optional<OutcomeCategory> ParseCategory(std::string_view name) {
  for (OutcomeCategory c : kAllCategories) {
    if (name == CategoryName(c)) return c;
  }
  return std::nullopt;
}

}  // namespace shapaudit
