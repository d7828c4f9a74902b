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

#include <random>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "shapaudit/errors.h"
#include "shapaudit/explainer/explainer.h"
#include "shapaudit/text/utf8.h"
#include "shapaudit/words/word_aggregation.h"

namespace shapaudit {
namespace {

using ::testing::ElementsAre;

const std::string kG(kBpeWordStart);

std::vector<std::string> Words(const std::vector<WordGroup>& groups) {
  std::vector<std::string> out;
  for (const auto& g : groups) out.push_back(g.word);
  return out;
}

std::vector<TokenAttribution> Attrs(const std::vector<double>& phi) {
  std::vector<TokenAttribution> out;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    out.push_back({"t" + std::to_string(i), i, phi[i], 0.0});
  }
  return out;
}

TEST(SplitMergedWordTest, CaseTransition) {
  EXPECT_THAT(SplitMergedWord("tuesdayQuoting"),
              ElementsAre("tuesday", "Quoting"));
}

TEST(SplitMergedWordTest, NoRuleFires) {
  EXPECT_THAT(SplitMergedWord("cat"), ElementsAre("cat"));
  EXPECT_THAT(SplitMergedWord("walking"), ElementsAre("walking"));
  EXPECT_THAT(SplitMergedWord("shameful"), ElementsAre("shameful"));
  EXPECT_THAT(SplitMergedWord("strength"), ElementsAre("strength"));
  EXPECT_THAT(SplitMergedWord("don't"), ElementsAre("don't"));
}

TEST(SplitMergedWordTest, CommonEnding) {
  EXPECT_THAT(SplitMergedWord("nationalismfueled"),
              ElementsAre("nationalism", "fueled"));
  EXPECT_THAT(SplitMergedWord("mondaysources"),
              ElementsAre("monday", "sources"));
}

TEST(SplitMergedWordTest, ArtifactPrefix) {
  EXPECT_THAT(SplitMergedWord("dmnboasted"), ElementsAre("dmn", "boasted"));
}

TEST(SplitMergedWordTest, Separators) {
  EXPECT_THAT(SplitMergedWord("well-known"), ElementsAre("well", "known"));
  EXPECT_THAT(SplitMergedWord("left/right"), ElementsAre("left", "right"));
}

TEST(NormalizeWordTest, Examples) {
  EXPECT_EQ(NormalizeWord("\"boasted,\"").display, "boasted");
  EXPECT_EQ(NormalizeWord("dmnboasted").display, "boasted");
  EXPECT_EQ(NormalizeWord("dmnboasted").key, "boasted");
  const NormalizedWord d = NormalizeWord("Dubious");
  EXPECT_EQ(d.key, "dubious");
  EXPECT_EQ(d.display, "Dubious");
  const NormalizedWord dash = NormalizeWord("\xE2\x80\x94");
  EXPECT_TRUE(dash.punctuation_only);
  EXPECT_EQ(dash.display, "\xE2\x80\x94");
}

std::string RandomWord(std::mt19937_64& rng) {
  static const std::string kAlphabet =
      "abcdefghijklmnopqrstuvwxyzAEIOUBDT-'.,!\"";
  std::uniform_int_distribution<std::size_t> len(1, 14);
  std::uniform_int_distribution<std::size_t> ch(0, kAlphabet.size() - 1);
  std::string w;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) w += kAlphabet[ch(rng)];
  return w;
}

TEST(NormalizeWordTest, Idempotent) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 5000; ++i) {
    const std::string w = RandomWord(rng);
    const NormalizedWord once = NormalizeWord(w);
    const NormalizedWord twice = NormalizeWord(once.display);
    EXPECT_EQ(once.display, twice.display) << w;
    EXPECT_EQ(once.key, twice.key) << w;
    EXPECT_EQ(once.punctuation_only, twice.punctuation_only) << w;
  }
}

TEST(SplitMergedWordTest, StableConcatenation) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 5000; ++i) {
    const std::string w = RandomWord(rng);
    const std::vector<std::string> parts = SplitMergedWord(w);
    std::string joined;
    for (const std::string& p : parts) {
      EXPECT_FALSE(p.empty()) << w;
      joined += p;
    }
    // Input minus separators: everything but letters and in-word apostrophes
    // is a separator, so compare letter content.
    std::string letters_in;
    std::string letters_out;
    for (char c : w) {
      if (std::isalpha(static_cast<unsigned char>(c))) letters_in += c;
    }
    for (char c : joined) {
      if (std::isalpha(static_cast<unsigned char>(c))) letters_out += c;
    }
    EXPECT_EQ(text::CaseFold(letters_in), text::CaseFold(letters_out)) << w;
  }
}

TEST(GroupTokensTest, ContinuationJoins) {
  TokenSequence seq({kG + "boast", "ed"}, "boasted", kG);
  const auto groups = GroupTokens(seq);
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].word, "boasted");
  EXPECT_THAT(groups[0].token_positions, ElementsAre(0, 1));
}

TEST(GroupTokensTest, TwoMarkersTwoGroups) {
  TokenSequence seq({kG + "The", kG + "cat"}, "The cat", kG);
  EXPECT_THAT(Words(GroupTokens(seq)), ElementsAre("The", "cat"));
}

TEST(GroupTokensTest, MergedWordSplitAtTokenBoundary) {
  TokenSequence seq({kG + "national", "ism", "fueled"}, "nationalismfueled",
                    kG);
  const auto groups = GroupTokens(seq);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].word, "nationalism");
  EXPECT_THAT(groups[0].token_positions, ElementsAre(0, 1));
  EXPECT_EQ(groups[1].word, "fueled");
  EXPECT_THAT(groups[1].token_positions, ElementsAre(2));
}

TEST(GroupTokensTest, CaseTransitionInsideTokenDoesNotSplit) {
  TokenSequence seq({kG + "tuesd", "ayQuo", "ting"}, "tuesdayQuoting", kG);
  const auto groups = GroupTokens(seq);
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].key, "tuesdayquoting");
}

TEST(GroupTokensTest, CaseTransitionAtTokenBoundarySplits) {
  TokenSequence seq({kG + "tuesday", "Quoting"}, "tuesdayQuoting", kG);
  EXPECT_THAT(Words(GroupTokens(seq)), ElementsAre("tuesday", "Quoting"));
}

TEST(GroupTokensTest, ArtifactPrefixRelabelsOnly) {
  TokenSequence seq({kG + "dmn", "boast", "ed"}, "dmnboasted", kG);
  const auto groups = GroupTokens(seq);
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].word, "boasted");
  EXPECT_THAT(groups[0].token_positions, ElementsAre(0, 1, 2));
}

TEST(GroupTokensTest, PunctuationTokensStandAlone) {
  TokenSequence seq({kG + "Hello", ",", kG + "world", "."}, "Hello, world.",
                    kG);
  const auto groups = GroupTokens(seq);
  EXPECT_THAT(Words(groups), ElementsAre("Hello", ",", "world", "."));
  EXPECT_FALSE(groups[0].punctuation_only);
  EXPECT_TRUE(groups[1].punctuation_only);
}

TEST(GroupTokensTest, HyphenatedCompoundKeepsJoinedKey) {
  TokenSequence seq({kG + "Well", "-", "known"}, "Well-known", kG);
  const auto groups = GroupTokens(seq);
  ASSERT_EQ(groups.size(), 3u);
  EXPECT_EQ(groups[0].key, "well");
  EXPECT_EQ(groups[2].key, "known");
  EXPECT_EQ(groups[0].compound, "well-known");
  EXPECT_EQ(groups[2].compound, "well-known");
}

TEST(AggregateTest, Examples) {
  WordGroup g{"w", "w", {0, 1}, false, ""};
  EXPECT_DOUBLE_EQ(Aggregate(Attrs({0.2, 0.1}), {g})[0].phi, 0.2 + 0.1);
  EXPECT_EQ(Aggregate(Attrs({0.2, -0.2}), {g})[0].phi, 0.0);

  const std::vector<WordGroup> three = {{"a", "a", {0}, false, ""},
                                        {"b", "b", {1, 2}, false, ""},
                                        {"c", "c", {3}, false, ""}};
  const std::vector<double> phi = {SnapToGrid(0.1), SnapToGrid(-0.02),
                                   SnapToGrid(-0.03), SnapToGrid(0.3)};
  const auto words = Aggregate(Attrs(phi), three);
  double word_total = 0;
  for (const auto& w : words) word_total += w.phi;
  double token_total = 0;
  for (double p : phi) token_total += p;
  EXPECT_EQ(word_total, token_total);
  EXPECT_NEAR(word_total, 0.35, 1e-12);
}

TEST(AggregateTest, OccurrenceIndexCountsRepeats) {
  const std::vector<WordGroup> groups = {{"The", "the", {0}, false, ""},
                                         {"cat", "cat", {1}, false, ""},
                                         {"the", "the", {2}, false, ""}};
  const auto words = Aggregate(Attrs({0.1, 0.2, 0.3}), groups);
  EXPECT_EQ(words[0].occurrence_index, 0u);
  EXPECT_EQ(words[2].occurrence_index, 1u);
}

TEST(AggregateTest, RejectsNonPartition) {
  const std::vector<WordGroup> gap = {{"a", "a", {0}, false, ""},
                                      {"c", "c", {2}, false, ""}};
  EXPECT_THROW(Aggregate(Attrs({0.1, 0.2, 0.3}), gap), ContractViolation);
  const std::vector<WordGroup> overlap = {{"a", "a", {0, 1}, false, ""},
                                          {"b", "b", {1, 2}, false, ""}};
  EXPECT_THROW(Aggregate(Attrs({0.1, 0.2, 0.3}), overlap), ContractViolation);
}

// Random subword sequences: grouping is a partition and word sums conserve
// token sums bitwise.
TEST(AggregateTest, PartitionAndConservationProperty) {
  std::mt19937_64 rng(8);
  const std::vector<std::string> pieces = {
      "the", "ed", "ing", "Quo", "ting", "dmn", "boast", "-", ",", ".",
      "national", "ism", "ly", "day", "New", "s", "'s", "\xE2\x80\x94"};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> len(1, 25);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::bernoulli_distribution starts(0.5);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::string> tokens;
    std::string source;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      const std::string& p = pieces[pick(rng)];
      const bool ws = i == 0 || starts(rng);
      tokens.push_back(ws ? kG + p : p);
      if (ws && i > 0) source += ' ';
      source += p;
    }
    TokenSequence seq(tokens, source, kG);
    const auto groups = GroupTokens(seq);
    std::vector<int> seen(n, 0);
    std::size_t expect = 0;
    for (const auto& g : groups) {
      ASSERT_FALSE(g.token_positions.empty());
      for (std::size_t p : g.token_positions) {
        EXPECT_EQ(p, expect++);
        ++seen[p];
      }
    }
    for (int s : seen) EXPECT_EQ(s, 1);

    std::vector<double> phi(n);
    for (double& p : phi) p = SnapToGrid(u(rng));
    const auto words = Aggregate(Attrs(phi), groups);
    double word_total = 0;
    for (const auto& w : words) word_total += w.phi;
    double token_total = 0;
    for (double p : phi) token_total += p;
    EXPECT_EQ(word_total, token_total);
  }
}

}  // namespace
}  // namespace shapaudit
