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

#ifndef SHAPAUDIT_PIPELINE_REPORT_H_
#define SHAPAUDIT_PIPELINE_REPORT_H_

#include <filesystem>
#include <span>
#include <string>

#include "json.hpp"
#include "shapaudit/analysis/analysis.h"
#include "shapaudit/stats/stats.h"
#include "shapaudit/types.h"

// Serialization of run artifacts. Every writer is a pure function of its
// inputs, so identical runs produce identical bytes.
namespace shapaudit::report {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

// Shortest decimal that round-trips to the same double.
std::string FormatDouble(double value);
// Fixed notation with `digits` decimals, for human-readable tables.
std::string FormatFixed(double value, int digits = 4);

Json ToJson(const MetricsBundle& metrics);
Json ToJson(const PredictionRecord& record);
Json ToJson(const ExplainedInstance& explained);
Json ToJson(const WordStats& stats);
Json ToJson(const CategoryReport& report);
Json ToJson(const Composition& composition);
Json ToJson(const ContingencyTable& table);
Json ToJson(const McNemarResult& result);
Json ToJson(const ComparisonReport& report);

// rank,word,mean_abs_phi,mean_signed_phi,count
std::string WordStatsCsv(std::span<const WordStats> words);
// category,count,fraction
std::string CompositionCsv(const Composition& composition);

// Replaces anything outside [A-Za-z0-9._-] so the name is usable in file
// names.
std::string SanitizeName(std::string_view name);

// Writes `content` verbatim. Throws IoError naming the path.
void WriteFile(const std::filesystem::path& path, std::string_view content);

}  // namespace shapaudit::report

#endif  // SHAPAUDIT_PIPELINE_REPORT_H_
