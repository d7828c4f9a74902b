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

#ifndef SHAPAUDIT_PIPELINE_MOCK_MODEL_H_
#define SHAPAUDIT_PIPELINE_MOCK_MODEL_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "shapaudit/pipeline/model_client.h"

namespace shapaudit {

// Word weights for the mock classifier. File format, one entry per line:
//
//   # comment
//   __intercept__ -1.5
//   dubious 2.0
//   boasted            (weight defaults to 1)
//
// Words are matched on their casefolded, punctuation-stripped form.
struct MockLexicon {
  double intercept = -1.0;
  std::map<std::string, double> weights;

  static MockLexicon Parse(std::string_view content);
  static MockLexicon Load(const std::filesystem::path& path);
  std::string Serialize() const;
};

// Deterministic offline classifier: P(biased) = sigmoid(intercept + sum of
// lexicon weights over the words of the text). The score sums word counts in
// key order, so it does not depend on word order.
//
// Its tokenizer mimics byte-level BPE: each whitespace word becomes pieces of
// at most kPieceLength code points, punctuation marks become pieces of their
// own, and the first piece of a word carries the U+0120 word-start marker.
class MockModel : public ModelClient {
 public:
  static constexpr std::size_t kPieceLength = 5;

  explicit MockModel(MockLexicon lexicon);

  std::string Identity() const override { return identity_; }
  std::vector<ClassProbabilities> Predict(
      const std::vector<std::string>& texts) override;
  TokenizeBatch Tokenize(const std::vector<std::string>& texts) override;
  std::string Health() override { return identity_; }

  double Score(std::string_view text) const;
  ClassProbabilities PredictOne(std::string_view text) const;
  std::vector<std::string> TokenizeOne(std::string_view text) const;

  const MockLexicon& lexicon() const { return lexicon_; }

 private:
  MockLexicon lexicon_;
  std::string identity_;
};

}  // namespace shapaudit

#endif  // SHAPAUDIT_PIPELINE_MOCK_MODEL_H_
