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

#include "shapaudit/explainer/token_sequence.h"

#include <string>
#include <utility>

#include "shapaudit/errors.h"
#include "shapaudit/text/utf8.h"

namespace shapaudit {

namespace {

constexpr std::string_view kWordPieceContinuation = "##";

bool HasPrefix(std::string_view s, std::string_view prefix) {
  return !prefix.empty() && s.substr(0, prefix.size()) == prefix;
}

// Appends one rendered unit (piece or mask string). Word starts get a single
// separating space unless nothing was emitted yet.
void Emit(std::string& out, bool starts_word, std::string_view unit) {
  if (starts_word && !out.empty()) out.push_back(' ');
  out.append(unit);
}

template <typename Present>
std::string Render(const TokenSequence& seq, Present present, MaskPolicy policy,
                   std::string_view mask_string) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (present(i)) {
      Emit(out, seq.StartsWord(i), seq.Piece(i));
    } else if (policy == MaskPolicy::kReplaceWithMaskString) {
      Emit(out, seq.StartsWord(i), mask_string);
    }
  }
  return text::CollapseWhitespace(out);
}

}  // namespace

TokenSequence::TokenSequence(std::vector<std::string> tokens,
                             std::string source_text,
                             std::string word_start_marker)
    : tokens_(std::move(tokens)),
      source_text_(std::move(source_text)),
      word_start_marker_(std::move(word_start_marker)) {
  ComputeBoundaries();
}

void TokenSequence::ComputeBoundaries() {
  starts_word_.assign(tokens_.size(), 0);
  pieces_.resize(tokens_.size());
  if (!word_start_marker_.empty()) {
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      const bool marked = HasPrefix(tokens_[i], word_start_marker_);
      starts_word_[i] = (marked || i == 0) ? 1 : 0;
      pieces_[i] = marked ? tokens_[i].substr(word_start_marker_.size())
                          : tokens_[i];
    }
    return;
  }

  // Whitespace alignment against the source text.
  const std::string_view source = source_text_;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    std::string_view piece = tokens_[i];
    const bool continuation = HasPrefix(piece, kWordPieceContinuation) &&
                              piece.size() > kWordPieceContinuation.size();
    if (continuation) piece.remove_prefix(kWordPieceContinuation.size());
    pieces_[i] = std::string(piece);

    bool saw_space = false;
    std::size_t probe = cursor;
    while (probe < source.size()) {
      std::size_t next = probe;
      if (!text::IsSpace(text::DecodeAt(source, next))) break;
      saw_space = true;
      probe = next;
    }
    bool aligned = false;
    if (!piece.empty() && source.substr(probe, piece.size()) == piece) {
      aligned = true;
      cursor = probe + piece.size();
    } else if (!piece.empty()) {
      const std::size_t found = source.find(piece, probe);
      if (found != std::string_view::npos) {
        aligned = true;
        for (std::size_t k = probe; k < found;) {
          if (text::IsSpace(text::DecodeAt(source, k))) saw_space = true;
        }
        cursor = found + piece.size();
      }
    }
    if (i == 0) {
      starts_word_[i] = 1;
    } else if (continuation) {
      starts_word_[i] = 0;
    } else {
      // Unalignable tokens ([UNK] and the like) are treated as words.
      starts_word_[i] = (!aligned || saw_space) ? 1 : 0;
    }
  }
}

std::string TokenSequence::Detokenize() const {
  return Render(*this, [](std::size_t) { return true; }, MaskPolicy::kDelete,
                "");
}

TokenSequence TokenSequence::Truncated(std::size_t cap) const {
  if (tokens_.size() <= cap) return *this;
  TokenSequence out;
  out.tokens_.assign(tokens_.begin(), tokens_.begin() + cap);
  out.word_start_marker_ = word_start_marker_;
  out.starts_word_.assign(starts_word_.begin(), starts_word_.begin() + cap);
  out.pieces_.assign(pieces_.begin(), pieces_.begin() + cap);
  out.source_text_ = out.Detokenize();
  return out;
}

std::string RenderCoalition(const TokenSequence& seq, const Coalition& mask,
                            MaskPolicy policy, std::string_view mask_string) {
  if (mask.size() != seq.size()) {
    throw ContractViolation("RenderCoalition: mask has " +
                            std::to_string(mask.size()) + " entries for " +
                            std::to_string(seq.size()) + " tokens");
  }
  return Render(seq, [&mask](std::size_t i) { return mask[i]; }, policy,
                mask_string);
}

std::string RenderCoalitionBits(const TokenSequence& seq, std::uint64_t mask,
                                MaskPolicy policy,
                                std::string_view mask_string) {
  if (seq.size() > 64) {
    throw ContractViolation("RenderCoalitionBits: more than 64 tokens");
  }
  return Render(seq, [mask](std::size_t i) { return ((mask >> i) & 1U) != 0; },
                policy, mask_string);
}

}  // namespace shapaudit
