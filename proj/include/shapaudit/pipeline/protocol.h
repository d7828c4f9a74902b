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

#ifndef SHAPAUDIT_PIPELINE_PROTOCOL_H_
#define SHAPAUDIT_PIPELINE_PROTOCOL_H_

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "shapaudit/pipeline/model_client.h"

namespace httplib {
class Server;
}

// JSON wire protocol between the audit engine and a model server:
//
//   POST /predict   {"texts": [s, ...]}  -> {"probabilities": [[p0, p1], ...]}
//   POST /tokenize  {"texts": [s, ...]}  -> {"tokens": [[t, ...], ...],
//                                            "word_start_marker": m}
//   GET  /health                         -> {"status": "ok", "model_id": id}
//
// Probability pairs are in (non-biased, biased) order.
namespace shapaudit::protocol {

inline constexpr const char* kPredictPath = "/predict";
inline constexpr const char* kTokenizePath = "/tokenize";
inline constexpr const char* kHealthPath = "/health";

nlohmann::json MakeTextsRequest(const std::vector<std::string>& texts);
// Throws ProtocolError when the body is not {"texts": [string...]}.
std::vector<std::string> ParseTextsRequest(const nlohmann::json& body);

nlohmann::json MakePredictResponse(const std::vector<ClassProbabilities>& probs);
// Validates shape and count. Throws ProtocolError.
std::vector<ClassProbabilities> ParsePredictResponse(const nlohmann::json& body,
                                                     std::size_t expected);

nlohmann::json MakeTokenizeResponse(const TokenizeBatch& batch);
TokenizeBatch ParseTokenizeResponse(const nlohmann::json& body,
                                    std::size_t expected);

nlohmann::json MakeHealthResponse(const std::string& model_id);
std::string ParseHealthResponse(const nlohmann::json& body);

// Serves `backend` over the protocol on `server`. Requests larger than
// `max_batch` texts get HTTP 413; malformed bodies get 400.
void MountProtocol(httplib::Server& server, ModelClient& backend,
                   std::size_t max_batch = 64);

}  // namespace shapaudit::protocol

#endif  // SHAPAUDIT_PIPELINE_PROTOCOL_H_
