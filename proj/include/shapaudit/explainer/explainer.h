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

#ifndef SHAPAUDIT_EXPLAINER_EXPLAINER_H_
#define SHAPAUDIT_EXPLAINER_EXPLAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shapaudit/explainer/token_sequence.h"
#include "shapaudit/types.h"

namespace shapaudit {

enum class BaselineKind { kEmptyInput, kBackgroundMean };
enum class Estimator { kExact, kSampled };

std::string_view EstimatorName(Estimator estimator);
std::string_view MaskPolicyName(MaskPolicy policy);
std::string_view BaselineKindName(BaselineKind kind);
std::optional<MaskPolicy> ParseMaskPolicy(std::string_view name);
std::optional<BaselineKind> ParseBaselineKind(std::string_view name);

struct ExplainerConfig {
  // Sequences up to this length are enumerated exactly (2^n coalitions).
  int exact_max_tokens = 12;
  // Sampled orderings; each is also evaluated reversed.
  int n_permutations = 200;
  std::uint64_t seed = 42;
  MaskPolicy mask_policy = MaskPolicy::kDelete;
  std::string mask_string = "...";
  BaselineKind baseline = BaselineKind::kEmptyInput;
  int background_size = 20;
  // Texts per predictor request.
  int batch_size = 32;
  int max_sequence_tokens = 256;

  // Throws ContractViolation for out-of-range fields.
  void Validate() const;
};

// Biased-class probability for every text, in order. Must be safe to call
// concurrently.
using PredictFn =
    std::function<std::vector<double>(const std::vector<std::string>& texts)>;
using TokenizeFn = std::function<TokenSequence(const std::string& text)>;

struct TokenAttribution {
  std::string token;
  std::size_t position = 0;
  // Contribution to P(biased), in probability units.
  double phi = 0.0;
  // Standard error of phi; exactly 0 for the exact estimator.
  double std_error = 0.0;
};

struct ShapleyResult {
  std::vector<TokenAttribution> attributions;
  Estimator estimator = Estimator::kExact;
  double base_value = 0.0;  // value of the empty coalition
  double full_value = 0.0;  // value of the full coalition
  // Distinct rendered texts whose predictions were requested.
  std::size_t texts_evaluated = 0;
};

// Attributions are reported on a fixed-point grid with this spacing. With
// |phi| <= 1 and at most 2^12 tokens every partial sum is exactly
// representable, so regrouping token values into words loses nothing.
inline constexpr double kAttributionQuantum = 0x1p-40;
double SnapToGrid(double value);

// Exact enumeration over all 2^n coalitions. `baseline_value`, when set,
// replaces the predictor's value for the empty coalition. Throws
// ContractViolation when the sequence is longer than exact_max_tokens.
ShapleyResult ExactShapley(const TokenSequence& seq, const PredictFn& predict,
                           const ExplainerConfig& cfg,
                           std::optional<double> baseline_value = std::nullopt);

// Antithetic permutation sampling with cfg.seed as the RNG seed.
ShapleyResult SampledShapley(
    const TokenSequence& seq, const PredictFn& predict,
    const ExplainerConfig& cfg,
    std::optional<double> baseline_value = std::nullopt);

// Mean biased-class probability over the background texts.
double BackgroundBaseline(const std::vector<std::string>& background_texts,
                          const PredictFn& predict, const ExplainerConfig& cfg);

// seed XOR FNV-1a(instance_id).
std::uint64_t InstanceSeed(std::uint64_t seed, std::string_view instance_id);

// Token-level part of an explained instance.
struct InstanceExplanation {
  std::string instance_id;
  bool ok = false;
  std::string error;
  TokenSequence tokens;  // after truncation to the sequence cap
  std::size_t original_token_count = 0;
  ShapleyResult shapley;
  double p_biased = 0.0;
  int pred_label = kNonBiased;
};

// Tokenizes, truncates, and picks the exact or sampled estimator by length.
// Failures (empty text, transport or protocol errors) are reported in the
// result instead of thrown. Under BaselineKind::kBackgroundMean the caller
// supplies `background_baseline` (see BackgroundBaseline).
InstanceExplanation ExplainInstance(
    const Instance& instance, const PredictionRecord& prediction,
    const PredictFn& predict, const TokenizeFn& tokenize,
    const ExplainerConfig& cfg,
    std::optional<double> background_baseline = std::nullopt);

}  // namespace shapaudit

#endif  // SHAPAUDIT_EXPLAINER_EXPLAINER_H_
