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

#ifndef SHAPAUDIT_EXPLAINER_TOKEN_SEQUENCE_H_
#define SHAPAUDIT_EXPLAINER_TOKEN_SEQUENCE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace shapaudit {

// Common word-start markers of byte-level BPE and SentencePiece tokenizers.
inline constexpr std::string_view kBpeWordStart = "\xC4\xA0";       // U+0120
inline constexpr std::string_view kSentencePieceWordStart = "\xE2\x96\x81";  // U+2581

// Subword tokens of one sentence plus the tokenizer's word-start convention.
//
// With a nonempty `word_start_marker`, a token starts a new word iff it
// carries the marker as a prefix (the first token always starts a word).
// With an empty marker, WordPiece "##" continuations are honoured and the
// remaining boundaries come from whitespace alignment against
// `source_text`.
class TokenSequence {
 public:
  TokenSequence() = default;
  TokenSequence(std::vector<std::string> tokens, std::string source_text,
                std::string word_start_marker);

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(std::size_t i) const { return tokens_[i]; }
  const std::string& source_text() const { return source_text_; }
  const std::string& word_start_marker() const { return word_start_marker_; }

  bool StartsWord(std::size_t i) const { return starts_word_[i] != 0; }
  // Surface text of token `i` with boundary markers removed.
  const std::string& Piece(std::size_t i) const { return pieces_[i]; }

  // Joins pieces with one space at each word start, whitespace-collapsed.
  std::string Detokenize() const;

  // First `cap` tokens. The source text of the result is its own
  // detokenization.
  TokenSequence Truncated(std::size_t cap) const;

 private:
  void ComputeBoundaries();

  std::vector<std::string> tokens_;
  std::string source_text_;
  std::string word_start_marker_;
  std::vector<char> starts_word_;
  std::vector<std::string> pieces_;
};

enum class MaskPolicy { kDelete, kReplaceWithMaskString };

// Coalition bitmap over token positions; true = token present.
using Coalition = std::vector<bool>;

// Renders the text a coalition stands for. Throws ContractViolation when the
// mask length differs from the token count.
std::string RenderCoalition(const TokenSequence& seq, const Coalition& mask,
                            MaskPolicy policy, std::string_view mask_string);

// Same as RenderCoalition for sequences of at most 64 tokens; bit i of
// `mask` is token i.
std::string RenderCoalitionBits(const TokenSequence& seq, std::uint64_t mask,
                                MaskPolicy policy,
                                std::string_view mask_string);

}  // namespace shapaudit

#endif  // SHAPAUDIT_EXPLAINER_TOKEN_SEQUENCE_H_
