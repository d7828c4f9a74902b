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

#ifndef SHAPAUDIT_PIPELINE_CSV_H_
#define SHAPAUDIT_PIPELINE_CSV_H_

#include <string>
#include <string_view>
#include <vector>

namespace shapaudit::csv {

struct Row {
  // 1-based line on which the record starts.
  int line = 0;
  std::vector<std::string> fields;
};

// RFC 4180 records: comma separated, optional double quotes with "" escapes,
// quoted fields may span lines. Accepts LF or CRLF. Throws DatasetError on
// an unterminated quote.
std::vector<Row> Parse(std::string_view content);

// Quotes the field when it contains a comma, quote, or line break.
std::string Escape(std::string_view field);

std::string JoinRow(const std::vector<std::string>& fields);

}  // namespace shapaudit::csv

#endif  // SHAPAUDIT_PIPELINE_CSV_H_
