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

#ifndef SHAPAUDIT_PIPELINE_MODEL_CLIENT_H_
#define SHAPAUDIT_PIPELINE_MODEL_CLIENT_H_

#include <string>
#include <vector>

#include "shapaudit/types.h"

namespace shapaudit {

struct TokenizeBatch {
  std::vector<std::vector<std::string>> tokens;
  std::string word_start_marker;
};

// A text classifier reachable through the predict / tokenize protocol.
// Implementations must be safe for concurrent use.
class ModelClient {
 public:
  virtual ~ModelClient() = default;

  // Stable identity of the endpoint; namespaces the prediction cache.
  virtual std::string Identity() const = 0;

  // One (p_non_biased, p_biased) pair per text.
  virtual std::vector<ClassProbabilities> Predict(
      const std::vector<std::string>& texts) = 0;

  virtual TokenizeBatch Tokenize(const std::vector<std::string>& texts) = 0;

  // model_id reported by the health endpoint.
  virtual std::string Health() = 0;
};

}  // namespace shapaudit

#endif  // SHAPAUDIT_PIPELINE_MODEL_CLIENT_H_
