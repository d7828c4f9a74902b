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

#include "shapaudit/pipeline/predictor.h"

#include <cmath>
#include <exception>
#include <unordered_map>

#include <omp.h>

#include "shapaudit/errors.h"
#include "shapaudit/pipeline/http_client.h"
#include "shapaudit/pipeline/mock_model.h"

namespace shapaudit {

void ValidateProbabilities(const std::vector<ClassProbabilities>& probs,
                           const std::string& batch_label) {
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const auto& p = probs[i];
    const bool finite = std::isfinite(p[0]) && std::isfinite(p[1]);
    const bool in_range = finite && p[0] >= -1e-9 && p[0] <= 1 + 1e-9 &&
                          p[1] >= -1e-9 && p[1] <= 1 + 1e-9;
    const double sum = p[0] + p[1];
    if (!in_range || std::abs(sum - 1.0) > kProbabilitySumTolerance) {
      throw ProtocolError(batch_label + ", item " + std::to_string(i) +
                          ": probabilities [" + std::to_string(p[0]) + ", " +
                          std::to_string(p[1]) + "] do not form a distribution");
    }
  }
}

Predictor::Predictor(std::shared_ptr<ModelClient> client,
                     std::shared_ptr<PredictionCache> cache,
                     std::size_t batch_size)
    : client_(std::move(client)),
      cache_(std::move(cache)),
      batch_size_(batch_size == 0 ? 1 : batch_size) {
  if (!client_) throw ContractViolation("predictor needs a client");
}

std::vector<ClassProbabilities> Predictor::Probabilities(
    const std::vector<std::string>& texts) {
  std::vector<ClassProbabilities> out(texts.size());
  std::vector<std::string> misses;
  std::unordered_map<std::string, std::vector<std::size_t>> waiting;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (cache_) {
      if (auto hit = cache_->LookupPrediction(texts[i])) {
        out[i] = *hit;
        ++cache_hits_;
        continue;
      }
    }
    auto [it, fresh] = waiting.try_emplace(texts[i]);
    if (fresh) misses.push_back(texts[i]);
    it->second.push_back(i);
  }
  if (misses.empty()) return out;

  const std::size_t n_batches = (misses.size() + batch_size_ - 1) / batch_size_;
  std::vector<std::vector<ClassProbabilities>> results(n_batches);
  std::vector<std::exception_ptr> failures(n_batches);
  auto run_batch = [&](std::size_t b) {
    const std::size_t lo = b * batch_size_;
    const std::size_t hi = std::min(misses.size(), lo + batch_size_);
    std::vector<std::string> batch(misses.begin() + lo, misses.begin() + hi);
    try {
      ++requests_;
      texts_sent_ += batch.size();
      std::vector<ClassProbabilities> probs = client_->Predict(batch);
      const std::string label = "predict batch " + std::to_string(b) +
                                " (texts " + std::to_string(lo) + ".." +
                                std::to_string(hi - 1) + ")";
      if (probs.size() != batch.size()) {
        throw ProtocolError(label + ": expected " +
                            std::to_string(batch.size()) + " results, got " +
                            std::to_string(probs.size()));
      }
      ValidateProbabilities(probs, label);
      if (cache_) cache_->StorePredictions(batch, probs);
      results[b] = std::move(probs);
    } catch (...) {
      failures[b] = std::current_exception();
    }
  };
  if (n_batches > 1 && !omp_in_parallel()) {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t b = 0; b < n_batches; ++b) run_batch(b);
  } else {
    for (std::size_t b = 0; b < n_batches; ++b) run_batch(b);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  for (std::size_t m = 0; m < misses.size(); ++m) {
    const ClassProbabilities& p = results[m / batch_size_][m % batch_size_];
    for (std::size_t i : waiting[misses[m]]) out[i] = p;
  }
  return out;
}

std::vector<double> Predictor::BiasedProbabilities(
    const std::vector<std::string>& texts) {
  std::vector<ClassProbabilities> probs = Probabilities(texts);
  std::vector<double> out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) out[i] = probs[i][1];
  return out;
}

std::vector<TokenSequence> Predictor::Tokenize(
    const std::vector<std::string>& texts) {
  std::vector<std::optional<PredictionCache::Tokens>> found(texts.size());
  std::vector<std::string> misses;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (cache_) found[i] = cache_->LookupTokens(texts[i]);
    if (found[i]) {
      ++cache_hits_;
    } else {
      misses.push_back(texts[i]);
    }
  }
  for (std::size_t lo = 0; lo < misses.size(); lo += batch_size_) {
    const std::size_t hi = std::min(misses.size(), lo + batch_size_);
    std::vector<std::string> batch(misses.begin() + lo, misses.begin() + hi);
    ++requests_;
    texts_sent_ += batch.size();
    TokenizeBatch res = client_->Tokenize(batch);
    if (res.tokens.size() != batch.size()) {
      throw ProtocolError("tokenize batch at text " + std::to_string(lo) +
                          ": expected " + std::to_string(batch.size()) +
                          " results, got " + std::to_string(res.tokens.size()));
    }
    if (cache_) cache_->StoreTokens(batch, res.tokens, res.word_start_marker);
    std::size_t k = 0;
    for (std::size_t i = 0; i < texts.size() && k < batch.size(); ++i) {
      if (!found[i] && texts[i] == batch[k]) {
        found[i] = PredictionCache::Tokens{res.tokens[k], res.word_start_marker};
        ++k;
      }
    }
  }
  std::vector<TokenSequence> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out.emplace_back(found[i]->tokens, texts[i], found[i]->word_start_marker);
  }
  return out;
}

TokenSequence Predictor::Tokenize(const std::string& text) {
  return std::move(Tokenize(std::vector<std::string>{text}).front());
}

PredictFn Predictor::AsPredictFn() {
  return [this](const std::vector<std::string>& texts) {
    return BiasedProbabilities(texts);
  };
}

TokenizeFn Predictor::AsTokenizeFn() {
  return [this](const std::string& text) { return Tokenize(text); };
}

std::vector<PredictionRecord> PredictBatch(Predictor& predictor,
                                           const std::vector<Instance>& data) {
  std::vector<std::string> texts;
  texts.reserve(data.size());
  for (const Instance& inst : data) texts.push_back(inst.text);
  const std::vector<ClassProbabilities> probs = predictor.Probabilities(texts);
  std::vector<PredictionRecord> records;
  records.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    records.push_back(MakePredictionRecord(data[i], probs[i]));
  }
  return records;
}

bool IsMockEndpoint(const std::string& endpoint) {
  return endpoint.rfind("mock:", 0) == 0;
}

std::shared_ptr<ModelClient> MakeModelClient(const std::string& endpoint) {
  if (IsMockEndpoint(endpoint)) {
    return std::make_shared<MockModel>(
        MockLexicon::Load(endpoint.substr(std::string("mock:").size())));
  }
  if (endpoint.rfind("http://", 0) == 0) {
    return std::make_shared<HttpModelClient>(endpoint);
  }
  throw ContractViolation("unsupported endpoint '" + endpoint +
                          "' (expected http://... or mock:<lexicon>)");
}

}  // namespace shapaudit
