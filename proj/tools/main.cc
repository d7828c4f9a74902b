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

// Command-line front end: evaluate, explain, report, compare, run, and a
// protocol server backed by the mock model.

#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "shapaudit/errors.h"
#include "shapaudit/pipeline/mock_model.h"
#include "shapaudit/pipeline/protocol.h"
#include "shapaudit/pipeline/run.h"

namespace {

using namespace shapaudit;

struct CliOptions {
  RunConfig cfg;
  std::vector<std::string> models;
  std::string dataset_format = "auto";
  std::string categories = "TP,FP,TN";
  std::string mask_policy = "delete";
  std::string baseline = "empty_input";
  std::string global_scope = "sample";
  bool no_cache = false;
  bool quiet = false;
};

void AddRunOptions(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--dataset", o.cfg.dataset_path,
                  "Labelled split (.jsonl or .csv)")
      ->required();
  cmd->add_option("--dataset-format", o.dataset_format, "auto, jsonl or csv");
  cmd->add_option("--model", o.models,
                  "[name=]http://host:port or [name=]mock:<lexicon>; repeat "
                  "for a comparison")
      ->required();
  cmd->add_option("--out", o.cfg.out_dir, "Run directory")->required();
  cmd->add_option("--cache-dir", o.cfg.cache_dir,
                  "Prediction cache (default $SHAPAUDIT_CACHE_DIR or "
                  "~/.cache/shapaudit)");
  cmd->add_flag("--no-cache", o.no_cache, "Do not read or write the cache");
  cmd->add_option("--seed", o.cfg.seed, "Sampling and explainer seed")
      ->capture_default_str();
  cmd->add_option("--cap", o.cfg.cap, "Instances sampled per category")
      ->capture_default_str();
  cmd->add_option("--categories", o.categories,
                  "Comma-separated outcome categories to sample")
      ->capture_default_str();
  cmd->add_option("--global-scope", o.global_scope,
                  "Global word ranking over the 'sample' or the 'full' split")
      ->capture_default_str();
  cmd->add_option("--top-k", o.cfg.top_k, "Indicator list length")
      ->capture_default_str();
  cmd->add_option("--category-top-k", o.cfg.category_top_k,
                  "Per-category word list length")
      ->capture_default_str();
  cmd->add_option("--min-count", o.cfg.min_count,
                  "Minimum occurrences for the global ranking")
      ->capture_default_str();
  cmd->add_option("--word-categories", o.cfg.word_categories,
                  "word,category table for composition histograms");
  cmd->add_option("--workers", o.cfg.workers,
                  "Concurrent explanations (0 = all cores)")
      ->capture_default_str();

  ExplainerConfig& e = o.cfg.explainer;
  cmd->add_option("--exact-max-tokens", e.exact_max_tokens,
                  "Longest sequence explained exactly")
      ->capture_default_str();
  cmd->add_option("--n-permutations", e.n_permutations,
                  "Antithetic permutation pairs for longer sequences")
      ->capture_default_str();
  cmd->add_option("--mask-policy", o.mask_policy, "delete or replace")
      ->capture_default_str();
  cmd->add_option("--mask-string", e.mask_string, "Replacement for masked tokens")
      ->capture_default_str();
  cmd->add_option("--baseline", o.baseline, "empty_input or background_mean")
      ->capture_default_str();
  cmd->add_option("--background-size", e.background_size,
                  "Background texts for background_mean")
      ->capture_default_str();
  cmd->add_option("--batch-size", e.batch_size, "Texts per predict request")
      ->capture_default_str();
  cmd->add_option("--max-sequence-tokens", e.max_sequence_tokens,
                  "Token cap per instance")
      ->capture_default_str();
  cmd->add_flag("--quiet", o.quiet, "No progress output");
}

// Converts the string-valued options into the typed config.
void Finalize(CliOptions& o) {
  for (const std::string& m : o.models) {
    o.cfg.models.push_back(ParseModelSpec(m));
  }
  const auto format = ParseDatasetFormat(o.dataset_format);
  if (!format) throw ContractViolation("unknown dataset format " + o.dataset_format);
  o.cfg.dataset_format = *format;
  o.cfg.categories.clear();
  std::stringstream ss(o.categories);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto cat = ParseCategory(item);
    if (!cat) throw ContractViolation("unknown category " + item);
    o.cfg.categories.push_back(*cat);
  }
  const auto policy = ParseMaskPolicy(o.mask_policy);
  if (!policy) throw ContractViolation("unknown mask policy " + o.mask_policy);
  o.cfg.explainer.mask_policy = *policy;
  const auto baseline = ParseBaselineKind(o.baseline);
  if (!baseline) throw ContractViolation("unknown baseline " + o.baseline);
  o.cfg.explainer.baseline = *baseline;
  if (o.global_scope == "sample") {
    o.cfg.global_scope = GlobalScope::kSample;
  } else if (o.global_scope == "full") {
    o.cfg.global_scope = GlobalScope::kFull;
  } else {
    throw ContractViolation("unknown global scope " + o.global_scope);
  }
  o.cfg.use_cache = !o.no_cache;
}

int Execute(CliOptions& o, const std::set<Stage>& stages) {
  try {
    Finalize(o);
    const RunOutcome outcome =
        RunAudit(o.cfg, stages, o.quiet ? nullptr : &std::cerr);
    for (const std::string& p : outcome.problems) {
      std::cerr << "problem: " << p << "\n";
    }
    if (!o.quiet) {
      std::cerr << "wrote " << outcome.files_written.size() << " files to "
                << o.cfg.out_dir.string() << "\n";
    }
    return outcome.exit_code;
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DatasetError& e) {
    std::cerr << "dataset error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPartial;
  }
}

int ServeMock(const std::string& lexicon_path, const std::string& host,
              int port, std::size_t max_batch) {
  try {
    MockModel model(MockLexicon::Load(lexicon_path));
    httplib::Server server;
    protocol::MountProtocol(server, model, max_batch);
    std::cerr << "serving " << model.Identity() << " on http://" << host << ":"
              << port << "\n";
    if (!server.listen(host, port)) {
      std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
      return kExitTransport;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shapley-value audit of binary text classifiers"};
  app.require_subcommand(1);

  struct Verb {
    const char* name;
    const char* help;
    std::set<Stage> stages;
  };
  const Verb verbs[] = {
      {"evaluate", "Predict the full split and compute metrics",
       {Stage::kEvaluate}},
      {"explain", "Evaluate, sample by outcome, and explain the sample",
       {Stage::kEvaluate, Stage::kExplain}},
      {"report", "Explain and write word, category and composition reports",
       {Stage::kEvaluate, Stage::kExplain, Stage::kReport}},
      {"compare", "Compare two models: McNemar test and attribution contrasts",
       {Stage::kEvaluate, Stage::kExplain, Stage::kCompare}},
      {"run", "All stages",
       {Stage::kEvaluate, Stage::kExplain, Stage::kReport, Stage::kCompare}},
  };
  std::vector<CliOptions> options(std::size(verbs));
  std::vector<CLI::App*> commands;
  for (std::size_t i = 0; i < std::size(verbs); ++i) {
    CLI::App* cmd = app.add_subcommand(verbs[i].name, verbs[i].help);
    AddRunOptions(cmd, options[i]);
    commands.push_back(cmd);
  }

  std::string lexicon;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t max_batch = 64;
  CLI::App* serve =
      app.add_subcommand("serve-mock", "Serve the mock model over HTTP");
  serve->add_option("--lexicon", lexicon, "Mock lexicon file")->required();
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--max-batch", max_batch)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (serve->parsed()) return ServeMock(lexicon, host, port, max_batch);
  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (commands[i]->parsed()) return Execute(options[i], verbs[i].stages);
  }
  return kExitUsage;
}
