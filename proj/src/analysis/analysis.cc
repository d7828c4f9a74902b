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

#include "shapaudit/analysis/analysis.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "shapaudit/errors.h"
#include "shapaudit/text/utf8.h"

namespace shapaudit {

namespace {

struct Accumulator {
  double sum_abs = 0.0;
  double sum_signed = 0.0;
  std::size_t count = 0;
};

template <typename Filter>
std::map<std::string, Accumulator> AccumulateWords(
    std::span<const ExplainedInstance> explained, Filter keep) {
  std::map<std::string, Accumulator> acc;
  for (const ExplainedInstance& inst : explained) {
    if (!keep(inst)) continue;
    for (const WordAttribution& w : inst.word_attrs) {
      if (w.punctuation_only) continue;
      Accumulator& a = acc[w.key];
      a.sum_abs += std::abs(w.phi);
      a.sum_signed += w.phi;
      ++a.count;
    }
  }
  return acc;
}

std::vector<WordStats> ToStats(const std::map<std::string, Accumulator>& acc,
                               std::size_t min_count) {
  std::vector<WordStats> out;
  for (const auto& [key, a] : acc) {
    if (a.count < min_count) continue;
    WordStats s;
    s.word_key = key;
    s.count = a.count;
    s.mean_abs_phi = a.sum_abs / static_cast<double>(a.count);
    s.mean_signed_phi = a.sum_signed / static_cast<double>(a.count);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), RanksBefore);
  return out;
}

std::vector<std::string> TopKeys(const std::vector<WordStats>& words,
                                 std::size_t k) {
  std::vector<std::string> keys;
  for (std::size_t i = 0; i < words.size() && i < k; ++i) {
    keys.push_back(words[i].word_key);
  }
  return keys;
}

// Splits two key lists into (shared, only in a, only in b), each in the rank
// order of the list it comes from.
void Contrast(const std::vector<std::string>& a,
              const std::vector<std::string>& b,
              std::vector<std::string>& shared,
              std::vector<std::string>& only_a,
              std::vector<std::string>& only_b) {
  const std::set<std::string> set_a(a.begin(), a.end());
  const std::set<std::string> set_b(b.begin(), b.end());
  for (const auto& k : a) (set_b.count(k) ? shared : only_a).push_back(k);
  for (const auto& k : b) {
    if (!set_a.count(k)) only_b.push_back(k);
  }
}

std::vector<ModelSpecificWord> Specific(const std::vector<std::string>& keys,
                                        const std::vector<WordStats>& self,
                                        const std::vector<WordStats>& other) {
  std::vector<ModelSpecificWord> out;
  for (const std::string& key : keys) {
    ModelSpecificWord w;
    w.word_key = key;
    for (const WordStats& s : self) {
      if (s.word_key == key) {
        w.mean_abs_phi = s.mean_abs_phi;
        break;
      }
    }
    for (std::size_t r = 0; r < other.size(); ++r) {
      if (other[r].word_key == key) {
        w.rank_in_other = r + 1;
        break;
      }
    }
    out.push_back(std::move(w));
  }
  return out;
}

const CategoryReport* Find(const ModelSummary& m, OutcomeCategory c) {
  auto it = m.categories.find(c);
  return it == m.categories.end() ? nullptr : &it->second;
}

}  // namespace

ExplainedInstance AssembleExplainedInstance(const Instance& instance,
                                            const InstanceExplanation& expl) {
  if (!expl.ok) {
    throw ContractViolation("AssembleExplainedInstance: explanation of " +
                            expl.instance_id + " failed: " + expl.error);
  }
  ExplainedInstance out;
  out.instance_id = instance.instance_id;
  out.text = instance.text;
  out.true_label = instance.label;
  out.pred_label = expl.pred_label;
  out.p_biased = expl.p_biased;
  out.category = Categorize(out.pred_label, out.true_label);
  out.token_attrs = expl.shapley.attributions;
  out.word_attrs = Aggregate(out.token_attrs, GroupTokens(expl.tokens));
  double sum_abs = 0.0;
  for (const WordAttribution& w : out.word_attrs) sum_abs += std::abs(w.phi);
  out.mean_abs_phi =
      out.word_attrs.empty()
          ? 0.0
          : sum_abs / static_cast<double>(out.word_attrs.size());
  out.estimator = expl.shapley.estimator;
  out.base_value = expl.shapley.base_value;
  out.full_value = expl.shapley.full_value;
  out.original_token_count = expl.original_token_count;
  return out;
}

bool RanksBefore(const WordStats& lhs, const WordStats& rhs) {
  if (lhs.mean_abs_phi != rhs.mean_abs_phi) {
    return lhs.mean_abs_phi > rhs.mean_abs_phi;
  }
  return lhs.word_key < rhs.word_key;
}

std::vector<WordStats> GlobalWordImportance(
    std::span<const ExplainedInstance> explained, std::size_t min_count) {
  if (explained.empty()) {
    throw ContractViolation("GlobalWordImportance: no explained instances");
  }
  return ToStats(
      AccumulateWords(explained, [](const ExplainedInstance&) { return true; }),
      std::max<std::size_t>(min_count, 1));
}

CategoryReport CategoryStats(std::span<const ExplainedInstance> explained,
                             OutcomeCategory category, std::size_t top_k) {
  CategoryReport r;
  r.category = category;
  double sum_instance_abs = 0.0;
  double sum_p = 0.0;
  for (const ExplainedInstance& inst : explained) {
    if (inst.category != category) continue;
    ++r.n_instances;
    sum_instance_abs += inst.mean_abs_phi;
    sum_p += inst.p_biased;
    for (const WordAttribution& w : inst.word_attrs) {
      if (w.punctuation_only) continue;
      ++r.word_occurrences;
      if (w.phi > 0.0) {
        ++r.positive_count;
      } else if (w.phi < 0.0) {
        ++r.negative_count;
      } else {
        ++r.zero_count;
      }
    }
  }
  if (r.n_instances == 0) return r;
  r.mean_abs_phi_per_instance =
      sum_instance_abs / static_cast<double>(r.n_instances);
  r.mean_p_biased = sum_p / static_cast<double>(r.n_instances);
  r.positive_fraction =
      r.word_occurrences == 0
          ? 0.0
          : static_cast<double>(r.positive_count) /
                static_cast<double>(r.word_occurrences);

  std::vector<WordStats> words = ToStats(
      AccumulateWords(explained,
                      [category](const ExplainedInstance& inst) {
                        return inst.category == category;
                      }),
      1);
  r.distinct_words = words.size();
  r.frequent_words = words;
  std::sort(r.frequent_words.begin(), r.frequent_words.end(),
            [](const WordStats& x, const WordStats& y) {
              if (x.count != y.count) return x.count > y.count;
              return x.word_key < y.word_key;
            });
  if (r.frequent_words.size() > top_k) r.frequent_words.resize(top_k);
  if (words.size() > top_k) words.resize(top_k);
  r.top_words = std::move(words);
  return r;
}

SamplingResult StratifiedSample(std::span<const PredictionRecord> records,
                                std::size_t cap,
                                const std::vector<OutcomeCategory>& categories,
                                std::uint64_t seed) {
  if (cap < 1) throw ContractViolation("StratifiedSample: cap must be >= 1");
  SamplingResult out;
  std::map<OutcomeCategory, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < records.size(); ++i) {
    members[Categorize(records[i].pred_label, records[i].true_label)]
        .push_back(i);
  }
  std::set<OutcomeCategory> done;
  for (OutcomeCategory c : categories) {
    if (!done.insert(c).second) continue;
    std::vector<std::size_t>& pool = members[c];
    out.available[c] = pool.size();
    if (pool.empty()) {
      out.selected[c] = 0;
      out.warnings.push_back("category " + std::string(CategoryName(c)) +
                             " has no instances");
      continue;
    }
    const std::size_t take = std::min(cap, pool.size());
    // Partial Fisher-Yates with a per-category stream.
    std::mt19937_64 rng(seed ^ text::Fnv1a64(CategoryName(c)));
    for (std::size_t k = 0; k < take; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
      std::swap(pool[k], pool[pick(rng)]);
    }
    std::vector<std::size_t> chosen(pool.begin(), pool.begin() + take);
    std::sort(chosen.begin(), chosen.end());
    for (std::size_t idx : chosen) out.records.push_back(records[idx]);
    out.selected[c] = take;
  }
  return out;
}

Composition WordCategoryComposition(
    std::span<const WordStats> top_words,
    const std::map<std::string, std::string>& lexicon) {
  Composition comp;
  if (lexicon.empty()) {
    comp.warnings.push_back(
        "empty word-category lexicon; every word counted as \"other\"");
  }
  for (const WordStats& w : top_words) {
    auto it = lexicon.find(w.word_key);
    ++comp.counts[it == lexicon.end() ? kOtherCategory : it->second];
    ++comp.total;
  }
  if (comp.total == 0) {
    comp.warnings.push_back("no words to categorize");
    return comp;
  }
  for (const auto& [category, count] : comp.counts) {
    comp.fractions[category] =
        static_cast<double>(count) / static_cast<double>(comp.total);
  }
  return comp;
}

ComparisonReport CompareModels(const ModelSummary& a, const ModelSummary& b,
                               std::size_t top_k) {
  {
    std::vector<std::string> ids_a = a.instance_ids;
    std::vector<std::string> ids_b = b.instance_ids;
    std::sort(ids_a.begin(), ids_a.end());
    std::sort(ids_b.begin(), ids_b.end());
    if (ids_a != ids_b) {
      throw ContractViolation("CompareModels: models " + a.name + " and " +
                              b.name + " were evaluated on different instances");
    }
  }
  ComparisonReport r;
  r.model_a = a.name;
  r.model_b = b.name;
  r.top_k = top_k;

  const auto top_a = TopKeys(a.global_words, top_k);
  const auto top_b = TopKeys(b.global_words, top_k);
  Contrast(top_a, top_b, r.shared_indicators, r.only_a, r.only_b);
  r.specific_a = Specific(r.only_a, a.global_words, b.global_words);
  r.specific_b = Specific(r.only_b, b.global_words, a.global_words);

  r.false_positives_a = a.metrics.counts.fp;
  r.false_positives_b = b.metrics.counts.fp;
  r.false_positive_rate_a = a.metrics.false_positive_rate;
  r.false_positive_rate_b = b.metrics.false_positive_rate;
  const CategoryReport* fp_a = Find(a, OutcomeCategory::kFP);
  const CategoryReport* fp_b = Find(b, OutcomeCategory::kFP);
  Contrast(fp_a ? TopKeys(fp_a->top_words, top_k) : std::vector<std::string>{},
           fp_b ? TopKeys(fp_b->top_words, top_k) : std::vector<std::string>{},
           r.fp_shared_words, r.fp_only_a, r.fp_only_b);

  for (OutcomeCategory c : kAllCategories) {
    const CategoryReport* ca = Find(a, c);
    const CategoryReport* cb = Find(b, c);
    if (ca == nullptr && cb == nullptr) continue;
    MagnitudeDelta d;
    d.category = c;
    if (ca) {
      d.mean_abs_phi_a = ca->mean_abs_phi_per_instance;
      d.n_a = ca->n_instances;
    }
    if (cb) {
      d.mean_abs_phi_b = cb->mean_abs_phi_per_instance;
      d.n_b = cb->n_instances;
    }
    d.delta = d.mean_abs_phi_a - d.mean_abs_phi_b;
    r.magnitude.push_back(d);
  }

  auto misaligned = [](const ModelSummary& m) {
    const CategoryReport* tp = Find(m, OutcomeCategory::kTP);
    const CategoryReport* fp = Find(m, OutcomeCategory::kFP);
    return tp && fp && tp->n_instances > 0 && fp->n_instances > 0 &&
           fp->mean_abs_phi_per_instance > tp->mean_abs_phi_per_instance;
  };
  r.misaligned_a = misaligned(a);
  r.misaligned_b = misaligned(b);
  return r;
}

}  // namespace shapaudit
