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

#include "shapaudit/words/word_aggregation.h"

#include <algorithm>
#include <iterator>
#include <map>
#include <string>
#include <utility>

#include "shapaudit/errors.h"
#include "shapaudit/text/utf8.h"

namespace shapaudit {

namespace {

using CodePoints = std::vector<char32_t>;

// Half-open code point range of one fragment of a merged word.
struct Fragment {
  std::size_t begin = 0;
  std::size_t end = 0;
  // Set when the fragment was cut off as an unpronounceable prefix. Such cuts
  // relabel a word during normalization but never split token groups.
  bool artifact_prefix = false;
};

constexpr std::string_view kCommonEndings[] = {"day", "ing", "ed", "ly", "ism"};

// Right-hand fragments that are suffixes rather than words.
constexpr std::string_view kSuffixOnly[] = {
    "ful",  "less", "ness", "ment", "ship", "wise", "ward", "hood",
    "dom",  "ers",  "est",  "ies",  "ish",  "ity",  "ive",  "ous",
    "able", "ably", "ible", "ally", "ings", "ism",  "ist"};

// Consonant clusters that can begin an English word. Single consonants are
// always accepted.
constexpr std::string_view kOnsets[] = {
    "bl",  "br",  "ch",  "cl",  "cr",  "dr",  "dw",  "fl",  "fr",
    "gh",  "gl",  "gn",  "gr",  "kh",  "kl",  "kn",  "kr",  "kw",
    "ph",  "pl",  "pn",  "pr",  "ps",  "rh",  "sc",  "sh",  "sk",
    "sl",  "sm",  "sn",  "sp",  "sq",  "st",  "sv",  "sw",  "th",
    "tr",  "ts",  "tw",  "wh",  "wr",  "zh",  "chr", "phr", "sch",
    "scr", "shr", "skr", "spl", "spr", "str", "thr", "schl", "schm", "schn",
    "schr", "schw"};

bool IsAsciiLetter(char32_t cp) {
  return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
}

bool IsVowel(char32_t cp) {
  switch (text::ToLower(cp)) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
      return true;
    default:
      return false;
  }
}

bool IsAsciiConsonant(char32_t cp) { return IsAsciiLetter(cp) && !IsVowel(cp); }

std::string LowerAscii(const CodePoints& cps, std::size_t begin,
                       std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    text::AppendUtf8(text::ToLower(cps[i]), out);
  }
  return out;
}

bool IsValidOnset(std::string_view cluster) {
  if (cluster.size() == 1) return true;
  return std::find(std::begin(kOnsets), std::end(kOnsets), cluster) !=
         std::end(kOnsets);
}

bool ContainsVowel(const CodePoints& cps, std::size_t begin, std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) {
    if (IsVowel(cps[i]) || (cps[i] >= 0x80 && text::IsLetter(cps[i]))) {
      return true;
    }
  }
  return false;
}

std::size_t CountLetters(const CodePoints& cps, std::size_t begin,
                         std::size_t end) {
  std::size_t count = 0;
  for (std::size_t i = begin; i < end; ++i) count += text::IsLetter(cps[i]);
  return count;
}

// Length of an unpronounceable leading consonant prefix of cps[begin, end),
// or 0. The prefix is what remains of the leading consonant run after
// removing its longest valid onset; it must itself be an impossible onset and
// leave a plausible word (three or more letters with a vowel).
std::size_t ArtifactPrefixLength(const CodePoints& cps, std::size_t begin,
                                 std::size_t end) {
  std::size_t run_end = begin;
  while (run_end < end && IsAsciiConsonant(cps[run_end])) ++run_end;
  const std::size_t run = run_end - begin;
  if (run < 2 || run_end == end) return 0;
  const std::string cluster = LowerAscii(cps, begin, run_end);
  std::size_t onset = 1;
  for (std::size_t len = std::min<std::size_t>(4, run); len >= 2; --len) {
    if (IsValidOnset(std::string_view(cluster).substr(run - len))) {
      onset = len;
      break;
    }
  }
  const std::size_t prefix = run - onset;
  if (prefix < 2) return 0;
  if (IsValidOnset(std::string_view(cluster).substr(0, prefix))) return 0;
  const std::size_t rest = begin + prefix;
  if (CountLetters(cps, rest, end) < 3 || !ContainsVowel(cps, rest, end)) {
    return 0;
  }
  return prefix;
}

bool IsSeparator(const CodePoints& cps, std::size_t i) {
  const char32_t cp = cps[i];
  if (text::IsSpace(cp)) return true;
  if (!text::IsPunctuation(cp)) return false;
  if (text::IsApostrophe(cp) && i > 0 && i + 1 < cps.size() &&
      text::IsLetter(cps[i - 1]) && text::IsLetter(cps[i + 1])) {
    return false;
  }
  return true;
}

bool EndsWithCaseless(const CodePoints& cps, std::size_t begin,
                      std::size_t end, std::string_view ending) {
  if (end - begin < ending.size()) return false;
  for (std::size_t k = 0; k < ending.size(); ++k) {
    const char32_t cp = text::ToLower(cps[end - ending.size() + k]);
    if (cp != static_cast<unsigned char>(ending[k])) return false;
  }
  return true;
}

bool IsSuffixOnly(const std::string& fragment) {
  auto listed = [](std::string_view s) {
    return std::find(std::begin(kSuffixOnly), std::end(kSuffixOnly), s) !=
           std::end(kSuffixOnly);
  };
  if (listed(fragment)) return true;
  return fragment.size() > 1 && fragment.back() == 's' &&
         listed(std::string_view(fragment).substr(0, fragment.size() - 1));
}

// Common-ending rule inside [begin, end): cut after an ending when the stem
// before it and the fragment after it both hold three or more letters and the
// remainder looks like a word.
void SplitOnEndings(const CodePoints& cps, std::size_t begin, std::size_t end,
                    std::vector<Fragment>& out) {
  std::size_t start = begin;
  for (std::size_t p = start + 3; p + 3 <= end; ++p) {
    if (!text::IsLower(cps[p])) continue;
    if (!ContainsVowel(cps, p, end)) continue;
    if (IsSuffixOnly(LowerAscii(cps, p, end))) continue;
    for (std::string_view ending : kCommonEndings) {
      if (!EndsWithCaseless(cps, start, p, ending)) continue;
      if (p - start < ending.size() + 3) continue;
      out.push_back({start, p, false});
      start = p;
      p = start + 2;  // next candidate leaves >= 3 letters on the left
      break;
    }
  }
  out.push_back({start, end, false});
}

std::vector<Fragment> Fragments(const CodePoints& cps) {
  // Separators.
  std::vector<Fragment> pieces;
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && IsSeparator(cps, i)) ++i;
    const std::size_t begin = i;
    while (i < cps.size() && !IsSeparator(cps, i)) ++i;
    if (i > begin) pieces.push_back({begin, i, false});
  }
  // Case transitions.
  std::vector<Fragment> cased;
  for (const Fragment& f : pieces) {
    std::size_t start = f.begin;
    for (std::size_t p = f.begin + 1; p < f.end; ++p) {
      if (text::IsLower(cps[p - 1]) && text::IsUpper(cps[p])) {
        cased.push_back({start, p, false});
        start = p;
      }
    }
    cased.push_back({start, f.end, false});
  }
  // Artifact prefixes, then common endings.
  std::vector<Fragment> out;
  for (const Fragment& f : cased) {
    std::size_t start = f.begin;
    const std::size_t prefix = ArtifactPrefixLength(cps, f.begin, f.end);
    if (prefix > 0) {
      out.push_back({f.begin, f.begin + prefix, true});
      start = f.begin + prefix;
    }
    SplitOnEndings(cps, start, f.end, out);
  }
  return out;
}

std::string Slice(const CodePoints& cps, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) text::AppendUtf8(cps[i], out);
  return out;
}

bool HasHyphen(std::string_view s) {
  for (std::size_t pos = 0; pos < s.size();) {
    const char32_t cp = text::DecodeAt(s, pos);
    if (cp == '-' || (cp >= 0x2010 && cp <= 0x2013)) return true;
  }
  return false;
}

std::string ConcatPieces(const TokenSequence& seq,
                         const std::vector<std::size_t>& positions) {
  std::string out;
  for (std::size_t p : positions) out += seq.Piece(p);
  return out;
}

// Splits one run of non-punctuation tokens at heuristic word boundaries that
// fall on token boundaries.
std::vector<std::vector<std::size_t>> SplitRun(
    const TokenSequence& seq, const std::vector<std::size_t>& run) {
  std::vector<std::size_t> token_end;  // code point offset after each token
  CodePoints cps;
  for (std::size_t p : run) {
    const CodePoints piece = text::ToCodePoints(seq.Piece(p));
    cps.insert(cps.end(), piece.begin(), piece.end());
    token_end.push_back(cps.size());
  }
  const std::vector<Fragment> fragments = Fragments(cps);

  auto is_cut = [&](std::size_t offset) {
    for (std::size_t j = 0; j + 1 < fragments.size(); ++j) {
      if (fragments[j].artifact_prefix) continue;
      if (offset >= fragments[j].end && offset <= fragments[j + 1].begin) {
        return true;
      }
    }
    return false;
  };

  std::vector<std::vector<std::size_t>> out(1);
  for (std::size_t k = 0; k < run.size(); ++k) {
    out.back().push_back(run[k]);
    if (k + 1 < run.size() && is_cut(token_end[k])) out.emplace_back();
  }
  return out;
}

}  // namespace

std::vector<std::string> SplitMergedWord(std::string_view word) {
  const CodePoints cps = text::ToCodePoints(word);
  std::vector<std::string> out;
  for (const Fragment& f : Fragments(cps)) {
    if (f.end > f.begin) out.push_back(Slice(cps, f.begin, f.end));
  }
  if (out.empty()) out.emplace_back(word);
  return out;
}

NormalizedWord NormalizeWord(std::string_view word) {
  const CodePoints cps = text::ToCodePoints(word);
  std::size_t begin = 0;
  std::size_t end = cps.size();
  auto strippable = [](char32_t cp) {
    return text::IsPunctuation(cp) || text::IsSpace(cp);
  };
  while (begin < end && strippable(cps[begin])) ++begin;
  while (end > begin && strippable(cps[end - 1])) --end;

  NormalizedWord out;
  if (begin == end) {
    out.display = std::string(word);
    out.key = text::CaseFold(word);
    out.punctuation_only = true;
    return out;
  }
  begin += ArtifactPrefixLength(cps, begin, end);
  out.display = Slice(cps, begin, end);
  out.key = text::CaseFold(out.display);
  return out;
}

std::vector<WordGroup> GroupTokens(const TokenSequence& seq) {
  std::vector<WordGroup> groups;
  std::size_t i = 0;
  while (i < seq.size()) {
    std::vector<std::size_t> base{i};
    for (++i; i < seq.size() && !seq.StartsWord(i); ++i) base.push_back(i);

    // Runs of punctuation-only and other tokens.
    std::vector<std::pair<bool, std::vector<std::size_t>>> runs;
    for (std::size_t p : base) {
      const bool punct = text::IsPunctuationOnly(seq.Piece(p));
      if (runs.empty() || runs.back().first != punct) runs.push_back({punct, {}});
      runs.back().second.push_back(p);
    }

    std::vector<WordGroup> parts;
    for (auto& [punct, run] : runs) {
      if (punct) {
        WordGroup g;
        g.token_positions = run;
        parts.push_back(std::move(g));
        continue;
      }
      for (auto& positions : SplitRun(seq, run)) {
        WordGroup g;
        g.token_positions = std::move(positions);
        parts.push_back(std::move(g));
      }
    }

    std::size_t word_parts = 0;
    for (WordGroup& g : parts) {
      const NormalizedWord norm = NormalizeWord(ConcatPieces(seq, g.token_positions));
      g.word = norm.display;
      g.key = norm.key;
      g.punctuation_only = norm.punctuation_only;
      word_parts += g.punctuation_only ? 0 : 1;
    }
    const std::string base_surface = ConcatPieces(seq, base);
    if (word_parts > 1 && HasHyphen(base_surface)) {
      const std::string compound = NormalizeWord(base_surface).key;
      for (WordGroup& g : parts) {
        if (!g.punctuation_only) g.compound = compound;
      }
    }
    for (WordGroup& g : parts) groups.push_back(std::move(g));
  }
  return groups;
}

std::vector<WordAttribution> Aggregate(
    const std::vector<TokenAttribution>& token_attrs,
    const std::vector<WordGroup>& groups) {
  std::size_t next = 0;
  for (const WordGroup& g : groups) {
    if (g.token_positions.empty()) {
      throw ContractViolation("Aggregate: empty word group");
    }
    for (std::size_t p : g.token_positions) {
      if (p != next) {
        throw ContractViolation(
            "Aggregate: groups do not partition the tokens in order (expected "
            "position " + std::to_string(next) + ", got " +
            std::to_string(p) + ")");
      }
      ++next;
    }
  }
  if (next != token_attrs.size()) {
    throw ContractViolation("Aggregate: groups cover " + std::to_string(next) +
                            " of " + std::to_string(token_attrs.size()) +
                            " tokens");
  }
  for (std::size_t k = 0; k < token_attrs.size(); ++k) {
    if (token_attrs[k].position != k) {
      throw ContractViolation("Aggregate: token attributions out of order");
    }
  }

  std::map<std::string, std::size_t> seen;
  std::vector<WordAttribution> words;
  words.reserve(groups.size());
  for (const WordGroup& g : groups) {
    WordAttribution w;
    w.word = g.word;
    w.key = g.key;
    w.punctuation_only = g.punctuation_only;
    w.compound = g.compound;
    w.token_positions = g.token_positions;
    for (std::size_t p : g.token_positions) w.phi += token_attrs[p].phi;
    w.occurrence_index = seen[g.key]++;
    words.push_back(std::move(w));
  }
  return words;
}

}  // namespace shapaudit
