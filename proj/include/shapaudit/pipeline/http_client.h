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

#ifndef SHAPAUDIT_PIPELINE_HTTP_CLIENT_H_
#define SHAPAUDIT_PIPELINE_HTTP_CLIENT_H_

#include <chrono>
#include <string>
#include <vector>

#include "json.hpp"
#include "shapaudit/pipeline/model_client.h"

namespace shapaudit {

struct HttpClientOptions {
  int max_attempts = 3;
  // Doubled after every failed attempt.
  std::chrono::milliseconds initial_backoff{200};
  std::chrono::seconds timeout{120};
};

// Protocol client for a model server at "http://host:port[/prefix]".
// Connection failures, 429 and 5xx responses are retried with exponential
// backoff; other 4xx responses and malformed bodies raise ProtocolError at
// once. Each call opens its own connection, so the client is thread-safe.
class HttpModelClient : public ModelClient {
 public:
  explicit HttpModelClient(const std::string& endpoint,
                           HttpClientOptions options = {});

  std::string Identity() const override { return identity_; }
  std::vector<ClassProbabilities> Predict(
      const std::vector<std::string>& texts) override;
  TokenizeBatch Tokenize(const std::vector<std::string>& texts) override;
  std::string Health() override;

 private:
  nlohmann::json Call(const std::string& path,
                      const nlohmann::json* body) const;

  std::string scheme_host_port_;
  std::string path_prefix_;
  std::string identity_;
  HttpClientOptions options_;
};

}  // namespace shapaudit

#endif  // SHAPAUDIT_PIPELINE_HTTP_CLIENT_H_
