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

#ifndef SHAPAUDIT_PIPELINE_PREDICTOR_H_
#define SHAPAUDIT_PIPELINE_PREDICTOR_H_

#include <atomic>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "shapaudit/explainer/explainer.h"
#include "shapaudit/pipeline/model_client.h"
#include "shapaudit/pipeline/prediction_cache.h"
#include "shapaudit/types.h"

namespace shapaudit {

inline constexpr double kProbabilitySumTolerance = 1e-6;

// Batching, de-duplicating, caching front end for a ModelClient. Safe for
// concurrent use.
class Predictor {
 public:
  // `cache` may be null.
  Predictor(std::shared_ptr<ModelClient> client,
            std::shared_ptr<PredictionCache> cache,
            std::size_t batch_size = 32);

  // Throws TransportError after retries are exhausted and ProtocolError,
  // naming the batch, when a response breaks the probability contract.
  std::vector<ClassProbabilities> Probabilities(
      const std::vector<std::string>& texts);
  std::vector<double> BiasedProbabilities(
      const std::vector<std::string>& texts);

  std::vector<TokenSequence> Tokenize(const std::vector<std::string>& texts);
  TokenSequence Tokenize(const std::string& text);

  PredictFn AsPredictFn();
  TokenizeFn AsTokenizeFn();

  ModelClient& client() { return *client_; }
  std::size_t requests() const { return requests_.load(); }
  std::size_t texts_sent() const { return texts_sent_.load(); }
  std::size_t cache_hits() const { return cache_hits_.load(); }

 private:
  std::shared_ptr<ModelClient> client_;
  std::shared_ptr<PredictionCache> cache_;
  std::size_t batch_size_;
  std::atomic<std::size_t> requests_{0};
  std::atomic<std::size_t> texts_sent_{0};
  std::atomic<std::size_t> cache_hits_{0};
};

// Throws ProtocolError unless every pair is finite, within [0, 1], and sums
// to 1 within kProbabilitySumTolerance. `batch_label` names the request.
void ValidateProbabilities(const std::vector<ClassProbabilities>& probs,
                           const std::string& batch_label);

// Predicts every instance; records keep dataset order.
std::vector<PredictionRecord> PredictBatch(Predictor& predictor,
                                           const std::vector<Instance>& data);

// "http://host:port[/prefix]" or "mock:<lexicon path>".
std::shared_ptr<ModelClient> MakeModelClient(const std::string& endpoint);

bool IsMockEndpoint(const std::string& endpoint);

}  // namespace shapaudit

#endif  // SHAPAUDIT_PIPELINE_PREDICTOR_H_
