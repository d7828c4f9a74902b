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

#ifndef SHAPAUDIT_PIPELINE_RUN_H_
#define SHAPAUDIT_PIPELINE_RUN_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "shapaudit/analysis/analysis.h"
#include "shapaudit/explainer/explainer.h"
#include "shapaudit/pipeline/dataset.h"
#include "shapaudit/pipeline/report.h"

namespace shapaudit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitTransport = 2;
inline constexpr int kExitPartial = 3;

struct ModelSpec {
  // Used in artifact file names.
  std::string name;
  // "http://host:port[/prefix]" or "mock:<lexicon path>".
  std::string endpoint;
};

// "[name=]endpoint". Without a name, mock endpoints are named after the
// lexicon file stem and HTTP endpoints after host and port.
ModelSpec ParseModelSpec(const std::string& spec);

enum class GlobalScope { kSample, kFull };

enum class Stage { kEvaluate, kExplain, kReport, kCompare };

struct RunConfig {
  std::filesystem::path dataset_path;
  DatasetFormat dataset_format = DatasetFormat::kAuto;
  std::vector<ModelSpec> models;
  ExplainerConfig explainer;
  // Seeds both the stratified sample and the permutation sampler.
  std::uint64_t seed = 42;
  std::size_t cap = 100;
  std::vector<OutcomeCategory> categories = kDefaultSampleCategories;
  // Instances feeding the global word ranking: the stratified sample or
  // every instance of the split.
  GlobalScope global_scope = GlobalScope::kSample;
  // Length of the indicator lists and of the comparison's top sets.
  std::size_t top_k = 10;
  // Length of per-category word lists and of the lists fed to composition.
  std::size_t category_top_k = 100;
  std::size_t min_count = 1;
  // Optional "word,category" table for composition histograms.
  std::filesystem::path word_categories;
  std::filesystem::path out_dir;
  // Empty means PredictionCache::DefaultDirectory().
  std::filesystem::path cache_dir;
  bool use_cache = true;
  // Concurrent instance explanations; 0 uses the OpenMP default.
  int workers = 0;

  // Throws ContractViolation.
  void Validate() const;
  // Result-affecting fields only: output, cache and worker settings are left
  // out so they cannot make otherwise identical runs differ.
  report::Json ToJson() const;
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::vector<std::string> files_written;
  std::vector<std::string> problems;
};

// Runs the requested stages and their prerequisites, writing artifacts into
// cfg.out_dir. Stage failures are recorded in manifest.json and reflected in
// the exit code rather than thrown; configuration, dataset and output
// directory errors are thrown. Progress goes to `log` when given.
RunOutcome RunAudit(const RunConfig& cfg, const std::set<Stage>& stages,
                    std::ostream* log = nullptr);

}  // namespace shapaudit

#endif  // SHAPAUDIT_PIPELINE_RUN_H_
