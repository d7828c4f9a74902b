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

#include "shapaudit/pipeline/report.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "shapaudit/errors.h"
#include "shapaudit/pipeline/csv.h"

namespace shapaudit::report {

std::string FormatDouble(double value) {
  if (value == 0.0) return "0";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

std::string FormatFixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

Json ToJson(const MetricsBundle& m) {
  Json j;
  j["accuracy"] = m.accuracy;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1_binary"] = m.f1_binary;
  j["f1_macro"] = m.f1_macro;
  j["f1_weighted"] = m.f1_weighted;
  j["f1_class0"] = m.f1_class0;
  j["f1_class1"] = m.f1_class1;
  j["false_positive_rate"] = m.false_positive_rate;
  j["counts"] = {{"tp", m.counts.tp},
                 {"fp", m.counts.fp},
                 {"tn", m.counts.tn},
                 {"fn", m.counts.fn},
                 {"total", m.counts.total()}};
  j["undefined"] = {{"no_predicted_positives", m.no_predicted_positives},
                    {"no_actual_positives", m.no_actual_positives},
                    {"no_predicted_negatives", m.no_predicted_negatives},
                    {"no_actual_negatives", m.no_actual_negatives}};
  return j;
}

Json ToJson(const PredictionRecord& r) {
  Json j;
  j["instance_id"] = r.instance_id;
  j["p_non_biased"] = r.p_non_biased;
  j["p_biased"] = r.p_biased;
  j["pred_label"] = r.pred_label;
  j["true_label"] = r.true_label;
  j["category"] = CategoryName(Categorize(r.pred_label, r.true_label));
  return j;
}

Json ToJson(const ExplainedInstance& e) {
  Json j;
  j["instance_id"] = e.instance_id;
  j["text"] = e.text;
  j["true_label"] = e.true_label;
  j["pred_label"] = e.pred_label;
  j["p_biased"] = e.p_biased;
  j["category"] = CategoryName(e.category);
  j["mean_abs_phi"] = e.mean_abs_phi;
  j["estimator"] = EstimatorName(e.estimator);
  j["base_value"] = e.base_value;
  j["full_value"] = e.full_value;
  j["original_token_count"] = e.original_token_count;
  Json tokens = Json::array();
  for (const TokenAttribution& t : e.token_attrs) {
    tokens.push_back({{"token", t.token},
                      {"position", t.position},
                      {"phi", t.phi},
                      {"std_error", t.std_error}});
  }
  j["token_attrs"] = std::move(tokens);
  Json words = Json::array();
  for (const WordAttribution& w : e.word_attrs) {
    Json wj;
    wj["word"] = w.word;
    wj["key"] = w.key;
    wj["phi"] = w.phi;
    wj["occurrence_index"] = w.occurrence_index;
    wj["punctuation_only"] = w.punctuation_only;
    if (!w.compound.empty()) wj["compound"] = w.compound;
    wj["token_positions"] = w.token_positions;
    words.push_back(std::move(wj));
  }
  j["word_attrs"] = std::move(words);
  return j;
}

Json ToJson(const WordStats& s) {
  return {{"word", s.word_key},
          {"mean_abs_phi", s.mean_abs_phi},
          {"mean_signed_phi", s.mean_signed_phi},
          {"count", s.count}};
}

namespace {

Json WordList(const std::vector<WordStats>& words) {
  Json out = Json::array();
  for (const WordStats& w : words) out.push_back(ToJson(w));
  return out;
}

}  // namespace

Json ToJson(const CategoryReport& r) {
  Json j;
  j["category"] = CategoryName(r.category);
  j["n_instances"] = r.n_instances;
  j["mean_abs_phi_per_instance"] = r.mean_abs_phi_per_instance;
  j["mean_p_biased"] = r.mean_p_biased;
  j["sign_distribution"] = {{"positive", r.positive_count},
                            {"negative", r.negative_count},
                            {"zero", r.zero_count},
                            {"positive_fraction", r.positive_fraction}};
  j["word_occurrences"] = r.word_occurrences;
  j["distinct_words"] = r.distinct_words;
  j["top_words"] = WordList(r.top_words);
  j["frequent_words"] = WordList(r.frequent_words);
  return j;
}

Json ToJson(const Composition& c) {
  Json j;
  j["total"] = c.total;
  Json rows = Json::array();
  for (const auto& [category, count] : c.counts) {
    rows.push_back({{"category", category},
                    {"count", count},
                    {"fraction", c.fractions.at(category)}});
  }
  j["categories"] = std::move(rows);
  j["warnings"] = c.warnings;
  return j;
}

Json ToJson(const ContingencyTable& t) {
  return {{"both_correct", t.a},
          {"only_second_correct", t.b},
          {"only_first_correct", t.c},
          {"both_wrong", t.d},
          {"total", t.total()}};
}

Json ToJson(const McNemarResult& r) {
  Json j;
  j["applicable"] = r.applicable;
  if (r.applicable) {
    j["chi2"] = r.chi2;
    j["p_value"] = r.p_value;
  } else {
    j["chi2"] = nullptr;
    j["p_value"] = nullptr;
  }
  j["continuity_corrected"] = true;
  j["small_sample"] = r.small_sample;
  return j;
}

Json ToJson(const ComparisonReport& r) {
  auto specific = [](const std::vector<ModelSpecificWord>& words) {
    Json out = Json::array();
    for (const ModelSpecificWord& w : words) {
      Json wj;
      wj["word"] = w.word_key;
      wj["mean_abs_phi"] = w.mean_abs_phi;
      if (w.rank_in_other > 0) {
        wj["rank_in_other"] = w.rank_in_other;
      } else {
        wj["rank_in_other"] = nullptr;
      }
      out.push_back(std::move(wj));
    }
    return out;
  };
  Json j;
  j["model_a"] = r.model_a;
  j["model_b"] = r.model_b;
  j["top_k"] = r.top_k;
  j["top_indicators"] = {{"shared", r.shared_indicators},
                         {"only_a", r.only_a},
                         {"only_b", r.only_b}};
  j["false_positives"] = {{"count_a", r.false_positives_a},
                          {"count_b", r.false_positives_b},
                          {"rate_a", r.false_positive_rate_a},
                          {"rate_b", r.false_positive_rate_b},
                          {"shared_words", r.fp_shared_words},
                          {"only_a", r.fp_only_a},
                          {"only_b", r.fp_only_b}};
  Json mag = Json::array();
  for (const MagnitudeDelta& m : r.magnitude) {
    mag.push_back({{"category", CategoryName(m.category)},
                   {"mean_abs_phi_a", m.mean_abs_phi_a},
                   {"mean_abs_phi_b", m.mean_abs_phi_b},
                   {"delta", m.delta},
                   {"n_a", m.n_a},
                   {"n_b", m.n_b}});
  }
  j["magnitude_by_category"] = std::move(mag);
  j["misalignment"] = {{"a", r.misaligned_a}, {"b", r.misaligned_b}};
  j["model_specific"] = {{"a", specific(r.specific_a)},
                         {"b", specific(r.specific_b)}};
  return j;
}

std::string WordStatsCsv(std::span<const WordStats> words) {
  std::string out = "rank,word,mean_abs_phi,mean_signed_phi,count\n";
  for (std::size_t i = 0; i < words.size(); ++i) {
    out += csv::JoinRow({std::to_string(i + 1), words[i].word_key,
                         FormatDouble(words[i].mean_abs_phi),
                         FormatDouble(words[i].mean_signed_phi),
                         std::to_string(words[i].count)});
    out += '\n';
  }
  return out;
}

std::string CompositionCsv(const Composition& c) {
  std::string out = "category,count,fraction\n";
  for (const auto& [category, count] : c.counts) {
    out += csv::JoinRow({category, std::to_string(count),
                         FormatDouble(c.fractions.at(category))});
    out += '\n';
  }
  return out;
}

std::string SanitizeName(std::string_view name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    out.push_back(ok ? c : '_');
  }
  if (out.empty()) out = "model";
  return out;
}

void WriteFile(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace shapaudit::report
