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

#include "shapaudit/pipeline/dataset.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "shapaudit/errors.h"
#include "shapaudit/pipeline/csv.h"
#include "shapaudit/text/utf8.h"

namespace shapaudit {

using nlohmann::json;

namespace {

std::string Trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Collects per-row problems and raises them together.
class RowErrors {
 public:
  void Add(int row, const std::string& what) {
    errors_.push_back("row " + std::to_string(row) + ": " + what);
  }
  void ThrowIfAny(std::size_t rows_read) const {
    if (errors_.empty()) return;
    std::string msg = std::to_string(errors_.size()) + " of " +
                      std::to_string(rows_read) + " rows rejected";
    for (const std::string& e : errors_) msg += "\n  " + e;
    throw DatasetError(msg);
  }

 private:
  std::vector<std::string> errors_;
};

void CheckUniqueIds(const std::vector<Instance>& instances) {
  std::set<std::string> seen;
  for (const Instance& inst : instances) {
    if (!seen.insert(inst.instance_id).second) {
      throw DatasetError("duplicate instance id '" + inst.instance_id + "'");
    }
  }
  if (instances.empty()) throw DatasetError("dataset is empty");
}

}  // namespace

std::optional<DatasetFormat> ParseDatasetFormat(std::string_view name) {
  if (name == "auto") return DatasetFormat::kAuto;
  if (name == "jsonl") return DatasetFormat::kJsonl;
  if (name == "csv") return DatasetFormat::kCsv;
  return std::nullopt;
}

std::optional<int> ParseLabel(std::string_view raw) {
  const std::string v = text::CaseFold(Trim(raw));
  if (v == "1" || v == "biased") return kBiased;
  if (v == "0" || v == "non-biased") return kNonBiased;
  return std::nullopt;
}

std::vector<Instance> ParseJsonlDataset(std::string_view content) {
  std::vector<Instance> out;
  RowErrors errors;
  std::istringstream in{std::string(content)};
  std::string line;
  int line_no = 0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const std::size_t index = rows++;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::exception&) {
      errors.Add(line_no, "not valid JSON");
      continue;
    }
    if (!row.is_object()) {
      errors.Add(line_no, "not a JSON object");
      continue;
    }
    Instance inst;
    if (!row.contains("text") || !row["text"].is_string()) {
      errors.Add(line_no, "missing text");
      continue;
    }
    inst.text = row["text"].get<std::string>();
    if (!row.contains("label") || row["label"].is_null()) {
      errors.Add(line_no, "missing label");
      continue;
    }
    const json& lab = row["label"];
    std::optional<int> label;
    if (lab.is_number_integer() || lab.is_number_unsigned()) {
      const auto v = lab.get<long long>();
      if (v == 0 || v == 1) label = static_cast<int>(v);
    } else if (lab.is_string()) {
      label = ParseLabel(lab.get<std::string>());
    }
    if (!label) {
      errors.Add(line_no, "unknown label " + lab.dump());
      continue;
    }
    inst.label = *label;
    const char* id_key = row.contains("instance_id") ? "instance_id" : "id";
    if (row.contains(id_key) && !row[id_key].is_null()) {
      const json& id = row[id_key];
      inst.instance_id = id.is_string() ? id.get<std::string>() : id.dump();
    } else {
      inst.instance_id = std::to_string(index);
    }
    out.push_back(std::move(inst));
  }
  errors.ThrowIfAny(rows);
  CheckUniqueIds(out);
  return out;
}

std::vector<Instance> ParseCsvDataset(std::string_view content) {
  const std::vector<csv::Row> rows = csv::Parse(content);
  if (rows.empty()) throw DatasetError("dataset is empty");
  int text_col = -1;
  int label_col = -1;
  int id_col = -1;
  const std::vector<std::string>& header = rows[0].fields;
  for (int i = 0; i < static_cast<int>(header.size()); ++i) {
    const std::string name = text::CaseFold(Trim(header[i]));
    if (name == "text") text_col = i;
    if (name == "label") label_col = i;
    if (name == "instance_id" || (name == "id" && id_col < 0)) id_col = i;
  }
  if (text_col < 0 || label_col < 0) {
    throw DatasetError("CSV header must name 'text' and 'label' columns");
  }
  std::vector<Instance> out;
  RowErrors errors;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    auto field = [&](int col) -> std::optional<std::string> {
      if (col < 0 || col >= static_cast<int>(row.fields.size())) {
        return std::nullopt;
      }
      return row.fields[col];
    };
    Instance inst;
    const auto txt = field(text_col);
    if (!txt) {
      errors.Add(row.line, "missing text");
      continue;
    }
    inst.text = *txt;
    const auto lab = field(label_col);
    if (!lab || Trim(*lab).empty()) {
      errors.Add(row.line, "missing label");
      continue;
    }
    const std::optional<int> label = ParseLabel(*lab);
    if (!label) {
      errors.Add(row.line, "unknown label \"" + *lab + "\"");
      continue;
    }
    inst.label = *label;
    const auto id = field(id_col);
    inst.instance_id =
        (id && !Trim(*id).empty()) ? Trim(*id) : std::to_string(r - 1);
    out.push_back(std::move(inst));
  }
  errors.ThrowIfAny(rows.size() - 1);
  CheckUniqueIds(out);
  return out;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<Instance> LoadDataset(const std::filesystem::path& path,
                                  DatasetFormat format) {
  std::string content;
  try {
    content = ReadFile(path);
  } catch (const IoError& e) {
    throw DatasetError(e.what());
  }
  if (format == DatasetFormat::kAuto) {
    format = text::CaseFold(path.extension().string()) == ".csv"
                 ? DatasetFormat::kCsv
                 : DatasetFormat::kJsonl;
  }
  try {
    return format == DatasetFormat::kCsv ? ParseCsvDataset(content)
                                         : ParseJsonlDataset(content);
  } catch (const DatasetError& e) {
    throw DatasetError(path.string() + ": " + e.what());
  }
}

std::map<std::string, std::string> LoadWordCategories(
    const std::filesystem::path& path) {
  std::map<std::string, std::string> lexicon;
  const std::vector<csv::Row> rows = csv::Parse(ReadFile(path));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    if (f.size() < 2) continue;
    const std::string word = text::CaseFold(Trim(f[0]));
    const std::string category = Trim(f[1]);
    if (r == 0 && word == "word") continue;
    if (word.empty() || word[0] == '#' || category.empty()) continue;
    lexicon[word] = category;
  }
  return lexicon;
}

}  // namespace shapaudit
