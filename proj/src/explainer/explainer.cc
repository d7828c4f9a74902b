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

#include "shapaudit/explainer/explainer.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>

#include "shapaudit/errors.h"
#include "shapaudit/explainer/shapley_kernels.h"
#include "shapaudit/text/utf8.h"

namespace shapaudit {

namespace {

// Target number of coalition texts rendered at once by the sampler.
constexpr std::size_t kSamplerChunkTexts = 8192;

// Deduplicating collector of coalition texts.
class TextTable {
 public:
  std::size_t Intern(std::string text) {
    auto [it, inserted] = index_.try_emplace(text, texts_.size());
    if (inserted) texts_.push_back(std::move(text));
    return it->second;
  }
  const std::vector<std::string>& texts() const { return texts_; }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> texts_;
};

// Sends `texts` to the predictor in batches. Batches run concurrently unless
// already inside a parallel region (per-instance parallelism).
std::vector<double> EvaluateBatched(const std::vector<std::string>& texts,
                                    const PredictFn& predict,
                                    std::size_t batch_size) {
  std::vector<double> values(texts.size());
  if (texts.empty()) return values;
  const std::size_t n_batches = (texts.size() + batch_size - 1) / batch_size;
  std::vector<std::exception_ptr> errors(n_batches);
  const bool parallel = n_batches > 1 && !omp_in_parallel();

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long long b = 0; b < static_cast<long long>(n_batches); ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * batch_size;
    const std::size_t end = std::min(texts.size(), begin + batch_size);
    try {
      std::vector<std::string> batch(texts.begin() + begin,
                                     texts.begin() + end);
      std::vector<double> out = predict(batch);
      if (out.size() != batch.size()) {
        throw ProtocolError("predictor returned " + std::to_string(out.size()) +
                            " values for a batch of " +
                            std::to_string(batch.size()));
      }
      for (std::size_t k = 0; k < out.size(); ++k) {
        if (!std::isfinite(out[k]) || out[k] < -1e-9 || out[k] > 1 + 1e-9) {
          throw ProtocolError("predictor returned a non-probability value");
        }
        values[begin + k] = out[k];
      }
    } catch (...) {
      errors[static_cast<std::size_t>(b)] = std::current_exception();
    }
  }
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  return values;
}

ShapleyResult MakeResult(const TokenSequence& seq, Estimator estimator,
                         const std::vector<double>& phi,
                         const std::vector<double>* std_error) {
  ShapleyResult result;
  result.estimator = estimator;
  result.attributions.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    TokenAttribution attr;
    attr.token = seq.token(i);
    attr.position = i;
    attr.phi = SnapToGrid(phi[i]);
    attr.std_error = std_error != nullptr ? (*std_error)[i] : 0.0;
    result.attributions.push_back(std::move(attr));
  }
  return result;
}

}  // namespace

std::string_view EstimatorName(Estimator estimator) {
  return estimator == Estimator::kExact ? "exact" : "sampled";
}

std::string_view MaskPolicyName(MaskPolicy policy) {
  return policy == MaskPolicy::kDelete ? "delete" : "replace_with_mask_string";
}

std::string_view BaselineKindName(BaselineKind kind) {
  return kind == BaselineKind::kEmptyInput ? "empty_input" : "background_mean";
}

std::optional<MaskPolicy> ParseMaskPolicy(std::string_view name) {
  if (name == "delete") return MaskPolicy::kDelete;
  if (name == "replace_with_mask_string" || name == "replace") {
    return MaskPolicy::kReplaceWithMaskString;
  }
  return std::nullopt;
}

std::optional<BaselineKind> ParseBaselineKind(std::string_view name) {
  if (name == "empty_input" || name == "empty") return BaselineKind::kEmptyInput;
  if (name == "background_mean" || name == "background") {
    return BaselineKind::kBackgroundMean;
  }
  return std::nullopt;
}

void ExplainerConfig::Validate() const {
  if (exact_max_tokens < 1 || exact_max_tokens > kernels::kMaxExactPlayers) {
    throw ContractViolation("exact_max_tokens must be in [1, " +
                            std::to_string(kernels::kMaxExactPlayers) + "]");
  }
  if (n_permutations < 1) {
    throw ContractViolation("n_permutations must be >= 1");
  }
  if (background_size < 1) {
    throw ContractViolation("background_size must be >= 1");
  }
  if (batch_size < 1) throw ContractViolation("batch_size must be >= 1");
  if (max_sequence_tokens < 1 || max_sequence_tokens > 4096) {
    throw ContractViolation("max_sequence_tokens must be in [1, 4096]");
  }
}

double SnapToGrid(double value) {
  return std::nearbyint(value / kAttributionQuantum) * kAttributionQuantum;
}

ShapleyResult ExactShapley(const TokenSequence& seq, const PredictFn& predict,
                           const ExplainerConfig& cfg,
                           std::optional<double> baseline_value) {
  cfg.Validate();
  const std::size_t n = seq.size();
  if (n == 0) throw ContractViolation("ExactShapley: empty token sequence");
  if (n > static_cast<std::size_t>(cfg.exact_max_tokens)) {
    throw ContractViolation(
        "ExactShapley: " + std::to_string(n) +
        " tokens exceed exact_max_tokens=" +
        std::to_string(cfg.exact_max_tokens) +
        "; use SampledShapley for longer sequences");
  }

  const std::uint64_t n_masks = std::uint64_t{1} << n;
  TextTable table;
  std::vector<std::size_t> text_of_mask(n_masks);
  for (std::uint64_t mask = 0; mask < n_masks; ++mask) {
    text_of_mask[mask] = table.Intern(
        RenderCoalitionBits(seq, mask, cfg.mask_policy, cfg.mask_string));
  }
  const std::vector<double> text_values = EvaluateBatched(
      table.texts(), predict, static_cast<std::size_t>(cfg.batch_size));

  std::vector<double> values(n_masks);
  for (std::uint64_t mask = 0; mask < n_masks; ++mask) {
    values[mask] = text_values[text_of_mask[mask]];
  }
  if (baseline_value) values[0] = *baseline_value;

  const std::vector<double> phi =
      kernels::omp::ExactFromTable(values, static_cast<int>(n));
  ShapleyResult result = MakeResult(seq, Estimator::kExact, phi, nullptr);
  result.base_value = values[0];
  result.full_value = values[n_masks - 1];
  result.texts_evaluated = table.texts().size();
  return result;
}

ShapleyResult SampledShapley(const TokenSequence& seq,
                             const PredictFn& predict,
                             const ExplainerConfig& cfg,
                             std::optional<double> baseline_value) {
  cfg.Validate();
  const std::size_t n = seq.size();
  if (n == 0) throw ContractViolation("SampledShapley: empty token sequence");
  if (n > 0xFFFF) throw ContractViolation("SampledShapley: too many tokens");

  // All random draws happen here, before any evaluation is dispatched.
  const std::size_t n_pairs = static_cast<std::size_t>(cfg.n_permutations);
  const std::size_t n_orderings = 2 * n_pairs;
  std::vector<std::uint16_t> orderings(n_orderings * n);
  {
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::uint16_t> perm(n);
    for (std::size_t k = 0; k < n_pairs; ++k) {
      std::iota(perm.begin(), perm.end(), std::uint16_t{0});
      std::shuffle(perm.begin(), perm.end(), rng);
      std::copy(perm.begin(), perm.end(), orderings.begin() + 2 * k * n);
      std::reverse_copy(perm.begin(), perm.end(),
                        orderings.begin() + (2 * k + 1) * n);
    }
  }

  const std::size_t batch_size = static_cast<std::size_t>(cfg.batch_size);
  std::size_t texts_evaluated = 0;

  // Empty and full coalitions are shared by every ordering.
  double empty_value = 0.0;
  double full_value = 0.0;
  {
    TextTable ends;
    const std::size_t empty_idx = ends.Intern(RenderCoalition(
        seq, Coalition(n, false), cfg.mask_policy, cfg.mask_string));
    const std::size_t full_idx = ends.Intern(RenderCoalition(
        seq, Coalition(n, true), cfg.mask_policy, cfg.mask_string));
    const std::vector<double> v = EvaluateBatched(ends.texts(), predict,
                                                  batch_size);
    texts_evaluated += ends.texts().size();
    empty_value = baseline_value ? *baseline_value : v[empty_idx];
    full_value = v[full_idx];
  }

  std::vector<double> prefix_values(n_orderings * (n + 1));
  std::size_t chunk = std::max<std::size_t>(2, kSamplerChunkTexts / (n + 1));
  chunk += chunk % 2;
  for (std::size_t first = 0; first < n_orderings; first += chunk) {
    const std::size_t last = std::min(n_orderings, first + chunk);
    TextTable table;
    std::vector<std::size_t> slot_text;
    slot_text.reserve((last - first) * (n > 1 ? n - 1 : 0));
    for (std::size_t o = first; o < last; ++o) {
      Coalition mask(n, false);
      const std::uint16_t* order = orderings.data() + o * n;
      for (std::size_t t = 1; t < n; ++t) {
        mask[order[t - 1]] = true;
        slot_text.push_back(table.Intern(
            RenderCoalition(seq, mask, cfg.mask_policy, cfg.mask_string)));
      }
    }
    const std::vector<double> v =
        EvaluateBatched(table.texts(), predict, batch_size);
    texts_evaluated += table.texts().size();

    std::size_t slot = 0;
    for (std::size_t o = first; o < last; ++o) {
      double* row = prefix_values.data() + o * (n + 1);
      row[0] = empty_value;
      for (std::size_t t = 1; t < n; ++t) row[t] = v[slot_text[slot++]];
      row[n] = full_value;
    }
  }

  const kernels::PermutationEstimate est = kernels::omp::PermutationMeans(
      orderings, prefix_values, static_cast<int>(n));
  ShapleyResult result =
      MakeResult(seq, Estimator::kSampled, est.mean, &est.std_error);
  result.base_value = empty_value;
  result.full_value = full_value;
  result.texts_evaluated = texts_evaluated;
  return result;
}

double BackgroundBaseline(const std::vector<std::string>& background_texts,
                          const PredictFn& predict,
                          const ExplainerConfig& cfg) {
  if (background_texts.empty()) {
    throw ContractViolation("BackgroundBaseline: no background texts");
  }
  const std::vector<double> values = EvaluateBatched(
      background_texts, predict, static_cast<std::size_t>(cfg.batch_size));
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::uint64_t InstanceSeed(std::uint64_t seed, std::string_view instance_id) {
  return seed ^ text::Fnv1a64(instance_id);
}

InstanceExplanation ExplainInstance(const Instance& instance,
                                    const PredictionRecord& prediction,
                                    const PredictFn& predict,
                                    const TokenizeFn& tokenize,
                                    const ExplainerConfig& cfg,
                                    std::optional<double> background_baseline) {
  cfg.Validate();
  if (cfg.baseline == BaselineKind::kBackgroundMean && !background_baseline) {
    throw ContractViolation(
        "ExplainInstance: background_mean baseline requires a precomputed "
        "background value");
  }
  InstanceExplanation out;
  out.instance_id = instance.instance_id;
  out.p_biased = prediction.p_biased;
  out.pred_label = prediction.pred_label;
  try {
    if (text::CollapseWhitespace(instance.text).empty()) {
      throw ContractViolation("instance text is empty");
    }
    TokenSequence seq = tokenize(instance.text);
    if (seq.empty()) throw ProtocolError("tokenizer returned no tokens");
    out.original_token_count = seq.size();
    out.tokens =
        seq.Truncated(static_cast<std::size_t>(cfg.max_sequence_tokens));

    const std::optional<double> baseline =
        cfg.baseline == BaselineKind::kBackgroundMean ? background_baseline
                                                      : std::nullopt;
    if (out.tokens.size() <= static_cast<std::size_t>(cfg.exact_max_tokens)) {
      out.shapley = ExactShapley(out.tokens, predict, cfg, baseline);
    } else {
      ExplainerConfig sub = cfg;
      sub.seed = InstanceSeed(cfg.seed, instance.instance_id);
      out.shapley = SampledShapley(out.tokens, predict, sub, baseline);
    }
    out.ok = true;
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
  }
  return out;
}

}  // namespace shapaudit
