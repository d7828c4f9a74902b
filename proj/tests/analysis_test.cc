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

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "shapaudit/analysis/analysis.h"
#include "shapaudit/errors.h"
#include "test_util.h"

namespace shapaudit {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;

std::vector<PredictionRecord> SyntheticRecords(int tp, int fp, int tn, int fn) {
  std::vector<PredictionRecord> out;
  auto add = [&](int count, int pred, int label) {
    for (int i = 0; i < count; ++i) {
      PredictionRecord r;
      r.pred_label = pred;
      r.true_label = label;
      r.p_biased = pred ? 0.8 : 0.2;
      r.p_non_biased = 1 - r.p_biased;
      out.push_back(r);
    }
  };
  add(tp, 1, 1);
  add(fp, 1, 0);
  add(tn, 0, 0);
  add(fn, 0, 1);
  std::mt19937_64 rng(5);
  std::shuffle(out.begin(), out.end(), rng);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].instance_id = "r" + std::to_string(i);
  }
  return out;
}

ExplainedInstance Explained(const std::string& id, OutcomeCategory cat,
                            const std::vector<std::pair<std::string, double>>& words) {
  ExplainedInstance e;
  e.instance_id = id;
  e.category = cat;
  double sum_abs = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    WordAttribution w;
    w.word = words[i].first;
    w.key = text::CaseFold(words[i].first);
    w.phi = words[i].second;
    w.punctuation_only = text::IsPunctuationOnly(w.word);
    w.token_positions = {i};
    sum_abs += std::abs(w.phi);
    e.word_attrs.push_back(w);
  }
  e.mean_abs_phi = words.empty() ? 0 : sum_abs / words.size();
  return e;
}

TEST(StratifiedSampleTest, CapsEachCategory) {
  const auto records = SyntheticRecords(150, 37, 200, 20);
  const SamplingResult s = StratifiedSample(records, 100);
  EXPECT_EQ(s.selected.at(OutcomeCategory::kTP), 100u);
  EXPECT_EQ(s.selected.at(OutcomeCategory::kFP), 37u);
  EXPECT_EQ(s.selected.at(OutcomeCategory::kTN), 100u);
  EXPECT_EQ(s.records.size(), 237u);
  EXPECT_EQ(s.selected.count(OutcomeCategory::kFN), 0u);

  const SamplingResult t = StratifiedSample(SyntheticRecords(100, 12, 300, 0), 100);
  EXPECT_EQ(t.records.size(), 212u);
  EXPECT_EQ(t.selected.at(OutcomeCategory::kTP), 100u);
}

TEST(StratifiedSampleTest, DeterministicWithoutReplacement) {
  const auto records = SyntheticRecords(150, 37, 200, 20);
  const SamplingResult a = StratifiedSample(records, 100, kDefaultSampleCategories, 42);
  const SamplingResult b = StratifiedSample(records, 100, kDefaultSampleCategories, 42);
  const SamplingResult c = StratifiedSample(records, 100, kDefaultSampleCategories, 43);
  std::vector<std::string> ia, ib, ic;
  for (const auto& r : a.records) ia.push_back(r.instance_id);
  for (const auto& r : b.records) ib.push_back(r.instance_id);
  for (const auto& r : c.records) ic.push_back(r.instance_id);
  EXPECT_EQ(ia, ib);
  EXPECT_NE(ia, ic);
  EXPECT_EQ(std::set<std::string>(ia.begin(), ia.end()).size(), ia.size());
}

TEST(StratifiedSampleTest, CategoryMajorDatasetOrderWithin) {
  const auto records = SyntheticRecords(30, 10, 30, 0);
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < records.size(); ++i) pos[records[i].instance_id] = i;
  const SamplingResult s = StratifiedSample(records, 5);
  ASSERT_EQ(s.records.size(), 15u);
  for (std::size_t i = 0; i < 15; ++i) {
    const OutcomeCategory expect = kDefaultSampleCategories[i / 5];
    EXPECT_EQ(Categorize(s.records[i].pred_label, s.records[i].true_label), expect);
    if (i % 5 != 0) {
      EXPECT_LT(pos[s.records[i - 1].instance_id], pos[s.records[i].instance_id]);
    }
  }
}

TEST(StratifiedSampleTest, EmptyCategoryWarns) {
  const SamplingResult s = StratifiedSample(SyntheticRecords(3, 0, 3, 0), 100);
  EXPECT_EQ(s.selected.at(OutcomeCategory::kFP), 0u);
  EXPECT_THAT(s.warnings, ::testing::Contains(::testing::HasSubstr("FP")));
}

TEST(StratifiedSampleTest, CategoriesPartitionRecords) {
  const auto records = SyntheticRecords(13, 7, 21, 4);
  std::map<OutcomeCategory, int> counts;
  for (const auto& r : records) ++counts[Categorize(r.pred_label, r.true_label)];
  EXPECT_EQ(counts[OutcomeCategory::kTP] + counts[OutcomeCategory::kFP] +
                counts[OutcomeCategory::kTN] + counts[OutcomeCategory::kFN],
            static_cast<int>(records.size()));
  EXPECT_EQ(Categorize(1, 1), OutcomeCategory::kTP);
  EXPECT_EQ(Categorize(1, 0), OutcomeCategory::kFP);
  EXPECT_EQ(Categorize(0, 1), OutcomeCategory::kFN);
  EXPECT_THROW(Categorize(2, 1), ContractViolation);
}

TEST(GlobalWordImportanceTest, Examples) {
  const std::vector<ExplainedInstance> ex = {
      Explained("1", OutcomeCategory::kTP, {{"dubious", 0.2}, {"claims", 0.5}}),
      Explained("2", OutcomeCategory::kFP, {{"Dubious", -0.4}, {",", 0.9}})};
  const auto stats = GlobalWordImportance(ex);
  ASSERT_EQ(stats.size(), 2u);
  EXPECT_EQ(stats[0].word_key, "claims");
  EXPECT_DOUBLE_EQ(stats[0].mean_abs_phi, 0.5);
  EXPECT_DOUBLE_EQ(stats[0].mean_signed_phi, 0.5);
  EXPECT_EQ(stats[1].word_key, "dubious");
  EXPECT_DOUBLE_EQ(stats[1].mean_abs_phi, 0.3);
  EXPECT_DOUBLE_EQ(stats[1].mean_signed_phi, -0.1);
  EXPECT_EQ(stats[1].count, 2u);
  EXPECT_THROW(GlobalWordImportance({}), ContractViolation);
  EXPECT_EQ(GlobalWordImportance(ex, 2).size(), 1u);
}

TEST(GlobalWordImportanceTest, MatchesOracleOnRandomData) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> word(0, 30);
  std::uniform_int_distribution<int> len(1, 12);
  std::uniform_real_distribution<double> phi(-0.3, 0.3);
  std::vector<ExplainedInstance> ex;
  std::map<std::string, std::vector<double>> oracle;
  std::size_t occurrences = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<std::pair<std::string, double>> words;
    const int n = len(rng);
    for (int k = 0; k < n; ++k) {
      const std::string w = "w" + std::to_string(word(rng));
      const double p = phi(rng);
      words.emplace_back(w, p);
      oracle[w].push_back(p);
      ++occurrences;
    }
    ex.push_back(Explained(std::to_string(i), OutcomeCategory::kTP, words));
  }
  const auto stats = GlobalWordImportance(ex);
  std::size_t total = 0;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const auto& v = oracle.at(stats[i].word_key);
    double a = 0, s = 0;
    for (double p : v) a += std::abs(p), s += p;
    EXPECT_NEAR(stats[i].mean_abs_phi, a / v.size(), 1e-12);
    EXPECT_NEAR(stats[i].mean_signed_phi, s / v.size(), 1e-12);
    EXPECT_EQ(stats[i].count, v.size());
    total += stats[i].count;
    if (i > 0) EXPECT_TRUE(RanksBefore(stats[i - 1], stats[i]));
  }
  EXPECT_EQ(total, occurrences);
}

TEST(CategoryStatsTest, Examples) {
  const std::vector<ExplainedInstance> ex = {
      Explained("1", OutcomeCategory::kFP, {{"a", 0.02}, {"b", 0.02}}),
      Explained("2", OutcomeCategory::kFP, {{"claims", 0.04}}),
      Explained("3", OutcomeCategory::kTP, {{"c", -0.5}})};
  const CategoryReport r = CategoryStats(ex, OutcomeCategory::kFP);
  EXPECT_EQ(r.n_instances, 2u);
  EXPECT_DOUBLE_EQ(r.mean_abs_phi_per_instance, 0.03);
  EXPECT_DOUBLE_EQ(r.positive_fraction, 1.0);
  EXPECT_EQ(r.top_words[0].word_key, "claims");
  EXPECT_EQ(r.word_occurrences, 3u);

  const CategoryReport empty = CategoryStats(ex, OutcomeCategory::kTN);
  EXPECT_EQ(empty.n_instances, 0u);
  EXPECT_THAT(empty.top_words, IsEmpty());
}

TEST(CategoryStatsTest, MeanIsRecomputableFromMembers) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> phi(-0.3, 0.3);
  std::vector<ExplainedInstance> ex;
  for (int i = 0; i < 60; ++i) {
    ex.push_back(Explained(std::to_string(i), kAllCategories[i % 4],
                           {{"x", phi(rng)}, {"y", phi(rng)}, {".", phi(rng)}}));
  }
  for (OutcomeCategory c : kAllCategories) {
    double sum = 0;
    int n = 0;
    for (const auto& e : ex) {
      if (e.category == c) sum += e.mean_abs_phi, ++n;
    }
    EXPECT_DOUBLE_EQ(CategoryStats(ex, c).mean_abs_phi_per_instance, sum / n);
  }
}

TEST(CompositionTest, Examples) {
  const std::vector<WordStats> top = {{"dubious", 0.3, 0.3, 1}};
  const Composition c = WordCategoryComposition(top, {{"dubious", "evaluative"}});
  EXPECT_DOUBLE_EQ(c.fractions.at("evaluative"), 1.0);
  const Composition o = WordCategoryComposition(top, {});
  EXPECT_DOUBLE_EQ(o.fractions.at(kOtherCategory), 1.0);
  EXPECT_FALSE(o.warnings.empty());
  const Composition none = WordCategoryComposition({}, {{"a", "b"}});
  EXPECT_EQ(none.total, 0u);
  EXPECT_THAT(none.counts, IsEmpty());
}

ModelSummary Summary(const std::string& name, double tp_mag, double fp_mag,
                     const std::vector<std::string>& words) {
  ModelSummary m;
  m.name = name;
  m.instance_ids = {"1", "2", "3"};
  double v = 1.0;
  for (const auto& w : words) m.global_words.push_back({w, v -= 0.05, 0.1, 2});
  CategoryReport tp;
  tp.category = OutcomeCategory::kTP;
  tp.n_instances = 5;
  tp.mean_abs_phi_per_instance = tp_mag;
  CategoryReport fp;
  fp.category = OutcomeCategory::kFP;
  fp.n_instances = 3;
  fp.mean_abs_phi_per_instance = fp_mag;
  m.categories = {{OutcomeCategory::kTP, tp}, {OutcomeCategory::kFP, fp}};
  return m;
}

TEST(CompareModelsTest, MisalignmentAndOverlap) {
  const ModelSummary a =
      Summary("a", 0.05, 0.08, {"dubious", "antisemitic", "lashed", "slammed"});
  const ModelSummary b =
      Summary("b", 0.07, 0.04, {"antisemitic", "radical", "dubious", "lashed"});
  const ComparisonReport r = CompareModels(a, b, 10);
  EXPECT_TRUE(r.misaligned_a);
  EXPECT_FALSE(r.misaligned_b);
  EXPECT_THAT(r.shared_indicators, ElementsAre("dubious", "antisemitic", "lashed"));
  EXPECT_THAT(r.only_a, ElementsAre("slammed"));
  EXPECT_THAT(r.only_b, ElementsAre("radical"));
  ASSERT_EQ(r.specific_b.size(), 1u);
  EXPECT_EQ(r.specific_b[0].rank_in_other, 0u);
}

TEST(CompareModelsTest, SelfComparisonIsEmpty) {
  const ModelSummary a = Summary("a", 0.05, 0.08, {"x", "y", "z"});
  const ComparisonReport r = CompareModels(a, a, 10);
  EXPECT_THAT(r.only_a, IsEmpty());
  EXPECT_THAT(r.only_b, IsEmpty());
  EXPECT_THAT(r.fp_only_a, IsEmpty());
  for (const auto& m : r.magnitude) EXPECT_EQ(m.delta, 0.0);
}

TEST(CompareModelsTest, RejectsDifferentSplits) {
  ModelSummary a = Summary("a", 0.1, 0.1, {"x"});
  ModelSummary b = a;
  b.instance_ids.push_back("4");
  EXPECT_THROW(CompareModels(a, b), ContractViolation);
}

TEST(AssembleExplainedInstanceTest, GroupsAndConserves) {
  const std::string g(kBpeWordStart);
  InstanceExplanation expl;
  expl.instance_id = "i";
  expl.ok = true;
  expl.pred_label = 1;
  expl.p_biased = 0.9;
  expl.tokens = TokenSequence({g + "dmn", "boast", "ed", ","}, "dmnboasted,", g);
  expl.shapley.attributions = {{g + "dmn", 0, SnapToGrid(0.1), 0},
                               {"boast", 1, SnapToGrid(0.2), 0},
                               {"ed", 2, SnapToGrid(-0.05), 0},
                               {",", 3, SnapToGrid(0.01), 0}};
  const ExplainedInstance e =
      AssembleExplainedInstance(Instance{"i", "dmnboasted,", 0}, expl);
  EXPECT_EQ(e.category, OutcomeCategory::kFP);
  ASSERT_EQ(e.word_attrs.size(), 2u);
  EXPECT_EQ(e.word_attrs[0].word, "boasted");
  EXPECT_EQ(e.word_attrs[0].phi,
            SnapToGrid(0.1) + SnapToGrid(0.2) + SnapToGrid(-0.05));
  EXPECT_TRUE(e.word_attrs[1].punctuation_only);
  EXPECT_DOUBLE_EQ(e.mean_abs_phi, (e.word_attrs[0].phi + SnapToGrid(0.01)) / 2);

  expl.ok = false;
  EXPECT_THROW(AssembleExplainedInstance(Instance{"i", "x", 0}, expl),
               ContractViolation);
}

}  // namespace
}  // namespace shapaudit
