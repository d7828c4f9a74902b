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

#ifndef SHAPAUDIT_WORDS_WORD_AGGREGATION_H_
#define SHAPAUDIT_WORDS_WORD_AGGREGATION_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "shapaudit/explainer/explainer.h"
#include "shapaudit/explainer/token_sequence.h"

namespace shapaudit {

struct WordGroup {
  // Display form: boundary punctuation and artifact prefixes removed, case
  // kept. Punctuation-only groups keep their original surface.
  std::string word;
  // Casefolded aggregation key.
  std::string key;
  // Contiguous, strictly increasing token indices.
  std::vector<std::size_t> token_positions;
  bool punctuation_only = false;
  // Key of the enclosing hyphenated compound ("well-known") when this group
  // is one of its components; empty otherwise.
  std::string compound;
};

struct WordAttribution {
  std::string word;
  std::string key;
  // Sum of the constituent token attributions.
  double phi = 0.0;
  // 0-based occurrence of `key` within the instance.
  std::size_t occurrence_index = 0;
  bool punctuation_only = false;
  std::string compound;
  std::vector<std::size_t> token_positions;
};

struct NormalizedWord {
  std::string display;
  std::string key;
  bool punctuation_only = false;
};

// Heuristic split of wrongly merged words. Splits at separator punctuation
// and hyphens (apostrophes inside words are kept), at lowercase-to-uppercase
// transitions, after a common ending ("day", "ing", "ed", "ly", "ism") that is
// followed by a plausible lowercase word, and after a leading consonant
// cluster that cannot begin an English word ("dmnboasted" -> "dmn",
// "boasted"). Never returns empty strings.
std::vector<std::string> SplitMergedWord(std::string_view word);

// Strips boundary punctuation, drops an artifact prefix, and casefolds the
// key. A word that is nothing but punctuation keeps its form and is flagged.
NormalizedWord NormalizeWord(std::string_view word);

// Partitions the token positions into words: word-start markers open groups,
// punctuation-only tokens form their own groups, and merged words are split
// where a heuristic boundary coincides with a token boundary.
std::vector<WordGroup> GroupTokens(const TokenSequence& seq);

// Sums token attributions per group, left to right, in surface order. Throws
// ContractViolation unless `groups` partitions the attribution positions.
std::vector<WordAttribution> Aggregate(
    const std::vector<TokenAttribution>& token_attrs,
    const std::vector<WordGroup>& groups);

}  // namespace shapaudit

#endif  // SHAPAUDIT_WORDS_WORD_AGGREGATION_H_
