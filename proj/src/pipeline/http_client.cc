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

#include "shapaudit/pipeline/http_client.h"

#include <string>
#include <thread>

#include "httplib.h"
#include "shapaudit/errors.h"
#include "shapaudit/pipeline/protocol.h"

namespace shapaudit {

using nlohmann::json;

HttpModelClient::HttpModelClient(const std::string& endpoint,
                                 HttpClientOptions options)
    : options_(options) {
  const std::string scheme = "http://";
  if (endpoint.rfind(scheme, 0) != 0) {
    throw ContractViolation("endpoint must start with http://, got " +
                            endpoint);
  }
  const std::size_t slash = endpoint.find('/', scheme.size());
  scheme_host_port_ = endpoint.substr(0, slash);
  if (slash != std::string::npos) {
    path_prefix_ = endpoint.substr(slash);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') {
      path_prefix_.pop_back();
    }
  }
  if (scheme_host_port_.size() == scheme.size()) {
    throw ContractViolation("endpoint has no host: " + endpoint);
  }
  identity_ = scheme_host_port_ + path_prefix_;
  if (options_.max_attempts < 1) options_.max_attempts = 1;
}

json HttpModelClient::Call(const std::string& path, const json* body) const {
  const std::string full_path = path_prefix_ + path;
  std::string last_error;
  auto backoff = options_.initial_backoff;
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    client.set_write_timeout(options_.timeout);
    httplib::Result res = body != nullptr
                              ? client.Post(full_path, body->dump(),
                                            "application/json")
                              : client.Get(full_path);
    if (!res) {
      last_error = "connection to " + identity_ + " failed: " +
                   httplib::to_string(res.error());
    } else if (res->status == 429 || res->status >= 500) {
      last_error = identity_ + full_path + " returned HTTP " +
                   std::to_string(res->status) + ": " + res->body;
    } else if (res->status != 200) {
      throw ProtocolError(identity_ + full_path + " returned HTTP " +
                          std::to_string(res->status) + ": " + res->body);
    } else {
      try {
        return json::parse(res->body);
      } catch (const json::exception& e) {
        throw ProtocolError(identity_ + full_path +
                            " returned malformed JSON: " + e.what());
      }
    }
    if (attempt < options_.max_attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  throw TransportError(last_error + " (after " +
                       std::to_string(options_.max_attempts) + " attempts)");
}

std::vector<ClassProbabilities> HttpModelClient::Predict(
    const std::vector<std::string>& texts) {
  const json request = protocol::MakeTextsRequest(texts);
  return protocol::ParsePredictResponse(Call(protocol::kPredictPath, &request),
                                        texts.size());
}

TokenizeBatch HttpModelClient::Tokenize(const std::vector<std::string>& texts) {
  const json request = protocol::MakeTextsRequest(texts);
  return protocol::ParseTokenizeResponse(
      Call(protocol::kTokenizePath, &request), texts.size());
}

std::string HttpModelClient::Health() {
  return protocol::ParseHealthResponse(Call(protocol::kHealthPath, nullptr));
}

}  // namespace shapaudit
