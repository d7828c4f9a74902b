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

#ifndef SHAPAUDIT_PIPELINE_PREDICTION_CACHE_H_
#define SHAPAUDIT_PIPELINE_PREDICTION_CACHE_H_

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "shapaudit/types.h"

namespace shapaudit {

// On-disk memo of predict and tokenize responses for one endpoint. Entries
// live in <dir>/<hash of identity>.jsonl, one JSON object per line, and are
// keyed by the exact text. Lookups take a shared lock; appends are
// serialized and flushed per batch.
class PredictionCache {
 public:
  PredictionCache(const std::filesystem::path& dir, std::string identity);

  std::optional<ClassProbabilities> LookupPrediction(
      const std::string& text) const;
  void StorePredictions(const std::vector<std::string>& texts,
                        const std::vector<ClassProbabilities>& probs);

  struct Tokens {
    std::vector<std::string> tokens;
    std::string word_start_marker;
  };
  std::optional<Tokens> LookupTokens(const std::string& text) const;
  void StoreTokens(const std::vector<std::string>& texts,
                   const std::vector<std::vector<std::string>>& tokens,
                   const std::string& word_start_marker);

  std::size_t prediction_count() const;
  const std::filesystem::path& file() const { return file_; }

  // $SHAPAUDIT_CACHE_DIR, else $XDG_CACHE_HOME/shapaudit, else
  // ~/.cache/shapaudit, else ./.shapaudit-cache.
  static std::filesystem::path DefaultDirectory();

 private:
  void Append(const std::string& lines);

  std::string identity_;
  std::filesystem::path file_;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, ClassProbabilities> predictions_;
  std::unordered_map<std::string, Tokens> tokens_;
  std::mutex write_mu_;
  std::ofstream out_;
};

}  // namespace shapaudit

#endif  // SHAPAUDIT_PIPELINE_PREDICTION_CACHE_H_
