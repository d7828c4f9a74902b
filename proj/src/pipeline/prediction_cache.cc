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

#include "shapaudit/pipeline/prediction_cache.h"

#include <cstdlib>
#include <system_error>

#include "json.hpp"
#include "shapaudit/errors.h"
#include "shapaudit/text/utf8.h"

namespace shapaudit {

using nlohmann::json;

PredictionCache::PredictionCache(const std::filesystem::path& dir,
                                 std::string identity)
    : identity_(std::move(identity)) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create cache directory " + dir.string() + ": " +
                  ec.message());
  }
  file_ = dir / (text::Hex64(text::Fnv1a64(identity_)) + ".jsonl");

  std::ifstream in(file_, std::ios::binary);
  std::string line;
  bool header_ok = false;
  bool first = true;
  while (std::getline(in, line)) {
    // A torn final line from an interrupted run is skipped.
    json row = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (!row.is_object()) continue;
    if (first) {
      first = false;
      header_ok = row.value("identity", std::string()) == identity_;
      if (!header_ok) break;
      continue;
    }
    const std::string kind = row.value("kind", std::string());
    if (!row.contains("text") || !row["text"].is_string()) continue;
    std::string text = row["text"].get<std::string>();
    if (kind == "p" && row.contains("p") && row["p"].is_array() &&
        row["p"].size() == 2) {
      predictions_[std::move(text)] = {row["p"][0].get<double>(),
                                       row["p"][1].get<double>()};
    } else if (kind == "t" && row.contains("tokens")) {
      tokens_[std::move(text)] = {
          row["tokens"].get<std::vector<std::string>>(),
          row.value("marker", std::string())};
    }
  }
  in.close();

  if (!header_ok) {
    // Missing, foreign or corrupt header: start the file over.
    predictions_.clear();
    tokens_.clear();
    out_.open(file_, std::ios::binary | std::ios::trunc);
    if (out_) out_ << json{{"identity", identity_}}.dump() << '\n';
  } else {
    out_.open(file_, std::ios::binary | std::ios::app);
  }
  if (!out_) throw IoError("cannot write cache file " + file_.string());
  out_.flush();
}

std::optional<ClassProbabilities> PredictionCache::LookupPrediction(
    const std::string& text) const {
  std::shared_lock lock(mu_);
  auto it = predictions_.find(text);
  if (it == predictions_.end()) return std::nullopt;
  return it->second;
}

std::optional<PredictionCache::Tokens> PredictionCache::LookupTokens(
    const std::string& text) const {
  std::shared_lock lock(mu_);
  auto it = tokens_.find(text);
  if (it == tokens_.end()) return std::nullopt;
  return it->second;
}

std::size_t PredictionCache::prediction_count() const {
  std::shared_lock lock(mu_);
  return predictions_.size();
}

void PredictionCache::StorePredictions(
    const std::vector<std::string>& texts,
    const std::vector<ClassProbabilities>& probs) {
  std::string lines;
  {
    std::unique_lock lock(mu_);
    for (std::size_t i = 0; i < texts.size(); ++i) {
      if (!predictions_.emplace(texts[i], probs[i]).second) continue;
      lines += json{{"kind", "p"},
                    {"text", texts[i]},
                    {"p", {probs[i][0], probs[i][1]}}}
                   .dump() +
               '\n';
    }
  }
  Append(lines);
}

void PredictionCache::StoreTokens(
    const std::vector<std::string>& texts,
    const std::vector<std::vector<std::string>>& tokens,
    const std::string& word_start_marker) {
  std::string lines;
  {
    std::unique_lock lock(mu_);
    for (std::size_t i = 0; i < texts.size(); ++i) {
      if (!tokens_.emplace(texts[i], Tokens{tokens[i], word_start_marker})
               .second) {
        continue;
      }
      lines += json{{"kind", "t"},
                    {"text", texts[i]},
                    {"tokens", tokens[i]},
                    {"marker", word_start_marker}}
                   .dump() +
               '\n';
    }
  }
  Append(lines);
}

void PredictionCache::Append(const std::string& lines) {
  if (lines.empty()) return;
  std::lock_guard lock(write_mu_);
  out_ << lines;
  out_.flush();
  if (!out_) throw IoError("cannot append to cache file " + file_.string());
}

std::filesystem::path PredictionCache::DefaultDirectory() {
  if (const char* env = std::getenv("SHAPAUDIT_CACHE_DIR"); env && *env) {
    return env;
  }
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    return std::filesystem::path(xdg) / "shapaudit";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".cache" / "shapaudit";
  }
  return ".shapaudit-cache";
}

}  // namespace shapaudit
