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

#ifndef SHAPAUDIT_PIPELINE_DATASET_H_
#define SHAPAUDIT_PIPELINE_DATASET_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shapaudit/types.h"

namespace shapaudit {

enum class DatasetFormat { kAuto, kJsonl, kCsv };

std::optional<DatasetFormat> ParseDatasetFormat(std::string_view name);

// 0/1 or "non-biased"/"biased", case-insensitive, surrounding space ignored.
std::optional<int> ParseLabel(std::string_view raw);

// Reads a labelled split. Every row needs "text" and "label"; "id" or
// "instance_id" is optional and defaults to the 0-based row index. kAuto
// picks the format from the file extension (.csv, anything else is JSONL).
// Throws DatasetError listing every rejected row by number, and on empty
// datasets, duplicate ids, or unreadable files.
std::vector<Instance> LoadDataset(const std::filesystem::path& path,
                                  DatasetFormat format = DatasetFormat::kAuto);

std::vector<Instance> ParseJsonlDataset(std::string_view content);
std::vector<Instance> ParseCsvDataset(std::string_view content);

// Two-column "word,category" table; a leading header row is skipped. Keys
// are casefolded.
std::map<std::string, std::string> LoadWordCategories(
    const std::filesystem::path& path);

std::string ReadFile(const std::filesystem::path& path);

}  // namespace shapaudit

#endif  // SHAPAUDIT_PIPELINE_DATASET_H_
