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

#include "shapaudit/pipeline/protocol.h"

#include <exception>
#include <string>

#include "httplib.h"
#include "shapaudit/errors.h"

namespace shapaudit::protocol {

using nlohmann::json;

json MakeTextsRequest(const std::vector<std::string>& texts) {
  return json{{"texts", texts}};
}

std::vector<std::string> ParseTextsRequest(const json& body) {
  if (!body.is_object() || !body.contains("texts") ||
      !body["texts"].is_array()) {
    throw ProtocolError("request body must be {\"texts\": [...]}");
  }
  std::vector<std::string> texts;
  for (const json& t : body["texts"]) {
    if (!t.is_string()) throw ProtocolError("texts must be strings");
    texts.push_back(t.get<std::string>());
  }
  return texts;
}

json MakePredictResponse(const std::vector<ClassProbabilities>& probs) {
  json rows = json::array();
  for (const auto& p : probs) rows.push_back({p[0], p[1]});
  return json{{"probabilities", rows}};
}

std::vector<ClassProbabilities> ParsePredictResponse(const json& body,
                                                     std::size_t expected) {
  if (!body.is_object() || !body.contains("probabilities") ||
      !body["probabilities"].is_array()) {
    throw ProtocolError("predict response lacks a \"probabilities\" array");
  }
  const json& rows = body["probabilities"];
  if (rows.size() != expected) {
    throw ProtocolError("predict response has " + std::to_string(rows.size()) +
                        " rows for " + std::to_string(expected) + " texts");
  }
  std::vector<ClassProbabilities> out;
  out.reserve(rows.size());
  for (const json& row : rows) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number() ||
        !row[1].is_number()) {
      throw ProtocolError("predict response rows must be [p0, p1]");
    }
    out.push_back({row[0].get<double>(), row[1].get<double>()});
  }
  return out;
}

json MakeTokenizeResponse(const TokenizeBatch& batch) {
  return json{{"tokens", batch.tokens},
              {"word_start_marker", batch.word_start_marker}};
}

TokenizeBatch ParseTokenizeResponse(const json& body, std::size_t expected) {
  if (!body.is_object() || !body.contains("tokens") ||
      !body["tokens"].is_array()) {
    throw ProtocolError("tokenize response lacks a \"tokens\" array");
  }
  TokenizeBatch out;
  if (body.contains("word_start_marker")) {
    if (!body["word_start_marker"].is_string()) {
      throw ProtocolError("word_start_marker must be a string");
    }
    out.word_start_marker = body["word_start_marker"].get<std::string>();
  }
  const json& rows = body["tokens"];
  if (rows.size() != expected) {
    throw ProtocolError("tokenize response has " + std::to_string(rows.size()) +
                        " rows for " + std::to_string(expected) + " texts");
  }
  for (const json& row : rows) {
    if (!row.is_array()) throw ProtocolError("token rows must be arrays");
    std::vector<std::string> tokens;
    for (const json& t : row) {
      if (!t.is_string()) throw ProtocolError("tokens must be strings");
      tokens.push_back(t.get<std::string>());
    }
    out.tokens.push_back(std::move(tokens));
  }
  return out;
}

json MakeHealthResponse(const std::string& model_id) {
  return json{{"status", "ok"}, {"model_id", model_id}};
}

std::string ParseHealthResponse(const json& body) {
  if (!body.is_object() || body.value("status", "") != "ok" ||
      !body.contains("model_id") || !body["model_id"].is_string()) {
    throw ProtocolError("health response must be {\"status\":\"ok\",...}");
  }
  return body["model_id"].get<std::string>();
}

namespace {

void Reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename Handler>
void HandleTexts(const httplib::Request& req, httplib::Response& res,
                 std::size_t max_batch, Handler handler) {
  std::vector<std::string> texts;
  try {
    texts = ParseTextsRequest(json::parse(req.body));
  } catch (const std::exception& e) {
    Reply(res, 400, json{{"error", e.what()}});
    return;
  }
  if (texts.size() > max_batch) {
    Reply(res, 413, json{{"error", "batch of " + std::to_string(texts.size()) +
                                       " exceeds max " +
                                       std::to_string(max_batch)}});
    return;
  }
  try {
    Reply(res, 200, handler(texts));
  } catch (const std::exception& e) {
    Reply(res, 500, json{{"error", e.what()}});
  }
}

}  // namespace

void MountProtocol(httplib::Server& server, ModelClient& backend,
                   std::size_t max_batch) {
  server.Post(kPredictPath, [&backend, max_batch](const httplib::Request& req,
                                                  httplib::Response& res) {
    HandleTexts(req, res, max_batch, [&backend](const auto& texts) {
      return MakePredictResponse(backend.Predict(texts));
    });
  });
  server.Post(kTokenizePath, [&backend, max_batch](const httplib::Request& req,
                                                   httplib::Response& res) {
    HandleTexts(req, res, max_batch, [&backend](const auto& texts) {
      return MakeTokenizeResponse(backend.Tokenize(texts));
    });
  });
  server.Get(kHealthPath,
             [&backend](const httplib::Request&, httplib::Response& res) {
               Reply(res, 200, MakeHealthResponse(backend.Health()));
             });
}

}  // namespace shapaudit::protocol
