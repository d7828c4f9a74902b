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


// Acceptance battery. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "shapaudit/analysis/analysis.h"
#include "shapaudit/explainer/explainer.h"
#include "shapaudit/pipeline/mock_model.h"
#include "shapaudit/stats/stats.h"
#include "shapaudit/words/word_aggregation.h"
#include "test_util.h"

namespace shapaudit {
namespace {

using testing_util::InteractionGame;
using testing_util::RandomWords;
using testing_util::TempDir;
using testing_util::WordTokens;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* format, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

PredictFn MockPredict(const MockModel& model) {
  return [&model](const std::vector<std::string>& texts) {
    std::vector<double> out;
    out.reserve(texts.size());
    for (const std::string& t : texts) out.push_back(model.PredictOne(t)[1]);
    return out;
  };
}

// Each instance carries some words the lexicon does not know (dummies) and
// two words with equal weight (a symmetric pair).
Outcome Axioms() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> gauss(0.0, 1.5);
  std::uniform_int_distribution<int> len(2, 12);
  double worst_eff = 0, worst_dummy = 0, worst_sym = 0;
  int dummies = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = static_cast<std::size_t>(len(rng));
    const auto words = RandomWords(rng, n);
    MockLexicon lex;
    lex.intercept = gauss(rng);
    const double shared = gauss(rng);
    lex.weights[words[0]] = shared;
    lex.weights[words[1]] = shared;
    std::vector<bool> is_dummy(n, false);
    for (std::size_t i = 2; i < n; ++i) {
      if (i % 3 == 2) {
        is_dummy[i] = true;
        ++dummies;
      } else {
        lex.weights[words[i]] = gauss(rng);
      }
    }
    const MockModel model(lex);
    ExplainerConfig cfg;
    const auto r = ExactShapley(WordTokens(words), MockPredict(model), cfg);
    double sum = 0;
    for (const auto& a : r.attributions) sum += a.phi;
    worst_eff = std::max(worst_eff,
                         std::abs(sum - (r.full_value - r.base_value)));
    for (std::size_t i = 0; i < n; ++i) {
      if (is_dummy[i]) {
        worst_dummy = std::max(worst_dummy, std::abs(r.attributions[i].phi));
      }
    }
    worst_sym = std::max(
        worst_sym, std::abs(r.attributions[0].phi - r.attributions[1].phi));
  }
  const double secs = Seconds(start);
  Outcome o;
  o.pass = worst_eff <= 1e-9 && worst_dummy == 0.0 && worst_sym <= 1e-12 &&
           dummies > 0 && secs < 60;
  o.detail = Fmt("max efficiency gap %.3g, max |dummy phi| %.3g, ", worst_eff,
                 worst_dummy) +
             Fmt("max symmetric gap %.3g, %.2f s", worst_sym, secs);
  return o;
}

Outcome OracleEquivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> len(2, 10);
  int violations = 0, checked = 0;
  double worst_ratio = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto words = RandomWords(rng, static_cast<std::size_t>(len(rng)));
    InteractionGame game(words, 9000 + trial, 0.5);
    ExplainerConfig cfg;
    cfg.n_permutations = 2000;
    cfg.seed = 1000 + trial;
    const auto exact = ExactShapley(WordTokens(words), game.AsPredictFn(), cfg);
    const auto sampled =
        SampledShapley(WordTokens(words), game.AsPredictFn(), cfg);
    for (std::size_t i = 0; i < words.size(); ++i) {
      const double err =
          std::abs(sampled.attributions[i].phi - exact.attributions[i].phi);
      const double tol = std::max(0.01, 3 * sampled.attributions[i].std_error);
      worst_ratio = std::max(worst_ratio, err / tol);
      if (err > tol) ++violations;
      ++checked;
    }
  }
  const double secs = Seconds(start);
  Outcome o;
  o.pass = violations == 0 && secs < 300;
  o.detail = Fmt("%.0f of %.0f tokens outside tolerance, ", violations,
                 checked) +
             Fmt("worst err/tol %.3f, %.2f s", worst_ratio, secs);
  return o;
}

std::string RandomSentence(std::mt19937_64& rng) {
  static const char* kPool[] = {
      "tuesdayQuoting", "dmnboasted", "nationalismfueled", "well-known",
      "the",           "senator",    "claimed",           "\"outrageous,\"",
      "reform",        "it's",       "-",                 "mondaysources",
      "radical",       "plan!",      "economy",           "walking"};
  std::uniform_int_distribution<int> pick(0, 15);
  std::uniform_int_distribution<int> len(1, 8);
  std::string s;
  for (int i = len(rng); i > 0; --i) {
    if (!s.empty()) s += ' ';
    s += kPool[pick(rng)];
  }
  return s;
}

Outcome Conservation() {
  MockLexicon lex;
  lex.weights = {{"senator", 0.8}, {"radical", 1.7}, {"outrageous", 2.1},
                 {"boasted", 1.2}, {"economy", -0.6}, {"reform", -0.3}};
  const MockModel model(lex);
  std::mt19937_64 rng(5);
  int mismatches = 0, instances = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::string text = RandomSentence(rng);
    const TokenSequence seq(model.TokenizeOne(text), text,
                            std::string(kBpeWordStart));
    ExplainerConfig cfg;
    cfg.n_permutations = 50;
    cfg.seed = trial;
    const auto r = seq.size() <= 12
                       ? ExactShapley(seq, MockPredict(model), cfg)
                       : SampledShapley(seq, MockPredict(model), cfg);
    const auto words = Aggregate(r.attributions, GroupTokens(seq));
    double token_sum = 0, word_sum = 0;
    for (const auto& a : r.attributions) token_sum += a.phi;
    for (const auto& w : words) word_sum += w.phi;
    if (token_sum != word_sum) ++mismatches;
    ++instances;
  }
  const auto split = SplitMergedWord("tuesdayQuoting");
  const bool split_ok = split == std::vector<std::string>{"tuesday", "Quoting"};
  const auto norm = NormalizeWord("dmnboasted");
  const bool norm_ok = norm.display == "boasted" && norm.key == "boasted";
  Outcome o;
  o.pass = mismatches == 0 && split_ok && norm_ok;
  o.detail = Fmt("%.0f of %.0f instances with word sum != token sum, ",
                 mismatches, instances) +
             "tuesdayQuoting " + (split_ok ? "ok" : "WRONG") +
             ", dmnboasted -> " + norm.display;
  return o;
}

Outcome McNemarCriterion() {
  const McNemarResult r = McNemar({0, 10, 25, 0});
  const double p = ChiSquare1Survival(5.723);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> cell(0, 400);
  int asymmetric = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::int64_t a = cell(rng), b = cell(rng), c = cell(rng),
                       d = cell(rng);
    const McNemarResult x = McNemar({a, b, c, d});
    const McNemarResult y = McNemar({a, c, b, d});
    if (x.chi2 != y.chi2 || x.p_value != y.p_value ||
        x.applicable != y.applicable) {
      ++asymmetric;
    }
  }
  Outcome o;
  o.pass = r.applicable && r.chi2 == 5.6 && std::abs(p - 0.0167) <= 0.0005 &&
           asymmetric == 0;
  o.detail = Fmt("chi2(10,25) = %.17g, p(5.723) = %.6f, ", r.chi2, p) +
             Fmt("%.0f asymmetric tables of 1000", asymmetric);
  return o;
}

Outcome MetricsCriterion() {
  const MetricsBundle m = MetricsFromCounts({8, 2, 7, 3});
  const double recall = 8.0 / 11.0;
  const double f1 = 2 * 0.8 * recall / (0.8 + recall);
  const double npv = 7.0 / 10.0, spec = 7.0 / 9.0;
  const double f1_0 = 2 * npv * spec / (npv + spec);
  const bool hand = std::abs(m.precision - 0.8) <= 1e-9 &&
                    std::abs(m.recall - recall) <= 1e-9 &&
                    std::abs(m.f1_class1 - f1) <= 1e-9 &&
                    std::abs(m.f1_class0 - f1_0) <= 1e-9 &&
                    std::abs(m.accuracy - 0.75) <= 1e-9 &&
                    std::abs(m.false_positive_rate - 2.0 / 9.0) <= 1e-9;
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> size(1, 60);
  std::bernoulli_distribution coin(0.5);
  int out_of_range = 0;
  for (int k = 0; k < 2000; ++k) {
    std::vector<int> preds, labels;
    for (int i = size(rng); i > 0; --i) {
      preds.push_back(coin(rng));
      labels.push_back(coin(rng));
    }
    const MetricsBundle b = ClassificationMetrics(preds, labels);
    for (double v : {b.accuracy, b.precision, b.recall, b.f1_class0,
                     b.f1_class1, b.false_positive_rate}) {
      if (!(v >= 0.0 && v <= 1.0)) ++out_of_range;
    }
  }
  Outcome o;
  o.pass = hand && out_of_range == 0;
  o.detail = Fmt("precision %.10f, recall %.10f, F1 %.10f, ", m.precision,
                 m.recall, m.f1_class1) +
             Fmt("%.0f fuzz values outside [0,1]", out_of_range);
  return o;
}

std::map<std::string, std::string> Snapshot(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    files[std::filesystem::relative(e.path(), dir).string()] =
        std::string(std::istreambuf_iterator<char>(in), {});
  }
  return files;
}

Outcome Determinism() {
  const std::filesystem::path data = SHAPAUDIT_DATA_DIR;
  const auto root = TempDir("acceptance_run");
  std::vector<std::map<std::string, std::string>> snaps;
  int worst_exit = 0;
  for (const char* name : {"first", "second"}) {
    std::ostringstream cmd;
    cmd << '"' << SHAPAUDIT_CLI << "\" run --quiet --seed 42"
        << " --dataset \"" << (data / "demo_split.jsonl").string() << '"'
        << " --model a=mock:\"" << (data / "mock_lexicon_a.txt").string()
        << '"' << " --model b=mock:\""
        << (data / "mock_lexicon_b.txt").string() << '"'
        << " --word-categories \"" << (data / "word_categories.csv").string()
        << '"' << " --cache-dir \"" << (root / "cache").string() << '"'
        << " --out \"" << (root / name).string() << '"';
    const int status = std::system(cmd.str().c_str());
    worst_exit = std::max(worst_exit, status);
    snaps.push_back(status == 0 ? Snapshot(root / name)
                                : std::map<std::string, std::string>{});
  }
  std::filesystem::remove_all(root);
  Outcome o;
  o.pass = worst_exit == 0 && !snaps[0].empty() && snaps[0] == snaps[1];
  o.detail = Fmt("%.0f files, exit status %.0f, directories ",
                 snaps[0].size(), worst_exit) +
             (snaps[0] == snaps[1] ? "identical" : "DIFFER");
  return o;
}

Outcome Stratified() {
  std::vector<PredictionRecord> records;
  auto add = [&records](int count, int pred, int label) {
    for (int i = 0; i < count; ++i) {
      PredictionRecord r;
      r.instance_id = "r" + std::to_string(records.size());
      r.pred_label = pred;
      r.true_label = label;
      r.p_biased = pred == kBiased ? 0.9 : 0.1;
      r.p_non_biased = 1.0 - r.p_biased;
      records.push_back(r);
    }
  };
  add(150, kBiased, kBiased);
  add(37, kBiased, kNonBiased);
  add(200, kNonBiased, kNonBiased);
  const SamplingResult s = StratifiedSample(
      records, 100,
      {OutcomeCategory::kTP, OutcomeCategory::kFP, OutcomeCategory::kTN}, 42);
  const auto count = [&s](OutcomeCategory c) {
    const auto it = s.selected.find(c);
    return it == s.selected.end() ? std::size_t{0} : it->second;
  };
  const std::size_t tp = count(OutcomeCategory::kTP);
  const std::size_t fp = count(OutcomeCategory::kFP);
  const std::size_t tn = count(OutcomeCategory::kTN);
  Outcome o;
  o.pass = tp == 100 && fp == 37 && tn == 100 && s.records.size() == 237;
  o.detail = Fmt("TP %.0f, FP %.0f, TN %.0f", tp, fp, tn) +
             Fmt(", total %.0f", s.records.size());
  return o;
}

}  // namespace
}  // namespace shapaudit

int main() {
  using namespace shapaudit;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria =
      {{"shapley-axioms", Axioms},
       {"sampled-vs-exact", OracleEquivalence},
       {"word-aggregation", Conservation},
       {"mcnemar", McNemarCriterion},
       {"metrics", MetricsCriterion},
       {"run-determinism", Determinism},
       {"stratified-sampling", Stratified}};
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
