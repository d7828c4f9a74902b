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

#include "shapaudit/pipeline/mock_model.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "shapaudit/errors.h"
#include "shapaudit/explainer/token_sequence.h"
#include "shapaudit/text/utf8.h"

namespace shapaudit {

namespace {

constexpr std::string_view kInterceptKey = "__intercept__";

// Casefolded word with boundary punctuation removed; empty for pure
// punctuation.
std::string WordKey(std::string_view word) {
  std::vector<char32_t> cps = text::ToCodePoints(word);
  std::size_t begin = 0;
  std::size_t end = cps.size();
  while (begin < end && text::IsPunctuation(cps[begin])) ++begin;
  while (end > begin && text::IsPunctuation(cps[end - 1])) --end;
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    text::AppendUtf8(text::ToLower(cps[i]), out);
  }
  return out;
}

}  // namespace

MockLexicon MockLexicon::Parse(std::string_view content) {
  MockLexicon lex;
  std::istringstream in{std::string(content)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string> fields = text::SplitWhitespace(line);
    if (fields.empty() || fields[0][0] == '#') continue;
    double weight = 1.0;
    if (fields.size() >= 2) {
      try {
        std::size_t used = 0;
        weight = std::stod(fields[1], &used);
        if (used != fields[1].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw DatasetError("lexicon line " + std::to_string(line_no) +
                           ": bad weight '" + fields[1] + "'");
      }
    }
    if (fields[0] == kInterceptKey) {
      lex.intercept = weight;
    } else {
      const std::string key = WordKey(fields[0]);
      if (!key.empty()) lex.weights[key] = weight;
    }
  }
  return lex;
}

MockLexicon MockLexicon::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot read lexicon " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

std::string MockLexicon::Serialize() const {
  std::ostringstream out;
  out.precision(17);
  out << kInterceptKey << ' ' << intercept << '\n';
  for (const auto& [word, weight] : weights) out << word << ' ' << weight << '\n';
  return out.str();
}

MockModel::MockModel(MockLexicon lexicon)
    : lexicon_(std::move(lexicon)),
      identity_("mock:" + text::Hex64(text::Fnv1a64(lexicon_.Serialize()))) {}

double MockModel::Score(std::string_view text) const {
  std::map<std::string, int> counts;
  for (const std::string& word : text::SplitWhitespace(text)) {
    const std::string key = WordKey(word);
    if (!key.empty() && lexicon_.weights.count(key)) ++counts[key];
  }
  double score = lexicon_.intercept;
  for (const auto& [key, count] : counts) {
    score += count * lexicon_.weights.at(key);
  }
  return score;
}

ClassProbabilities MockModel::PredictOne(std::string_view text) const {
  const double p1 = 1.0 / (1.0 + std::exp(-Score(text)));
  return {1.0 - p1, p1};
}

std::vector<std::string> MockModel::TokenizeOne(std::string_view text) const {
  std::vector<std::string> tokens;
  for (const std::string& word : text::SplitWhitespace(text)) {
    const std::vector<char32_t> cps = text::ToCodePoints(word);
    bool first = true;
    auto emit = [&](std::string piece) {
      if (first) piece = std::string(kBpeWordStart) + piece;
      first = false;
      tokens.push_back(std::move(piece));
    };
    std::string piece;
    std::size_t piece_len = 0;
    for (char32_t cp : cps) {
      if (text::IsPunctuation(cp)) {
        if (!piece.empty()) emit(std::move(piece));
        piece.clear();
        piece_len = 0;
        std::string mark;
        text::AppendUtf8(cp, mark);
        emit(std::move(mark));
        continue;
      }
      if (piece_len == kPieceLength) {
        emit(std::move(piece));
        piece.clear();
        piece_len = 0;
      }
      text::AppendUtf8(cp, piece);
      ++piece_len;
    }
    if (!piece.empty()) emit(std::move(piece));
  }
  return tokens;
}

std::vector<ClassProbabilities> MockModel::Predict(
    const std::vector<std::string>& texts) {
  std::vector<ClassProbabilities> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) out.push_back(PredictOne(t));
  return out;
}

TokenizeBatch MockModel::Tokenize(const std::vector<std::string>& texts) {
  TokenizeBatch batch;
  batch.word_start_marker = std::string(kBpeWordStart);
  for (const std::string& t : texts) batch.tokens.push_back(TokenizeOne(t));
  return batch;
}

}  // namespace shapaudit
