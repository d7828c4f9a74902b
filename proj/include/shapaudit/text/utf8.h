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

#ifndef SHAPAUDIT_TEXT_UTF8_H_
#define SHAPAUDIT_TEXT_UTF8_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Minimal UTF-8 utilities. Case mapping and character classes cover ASCII
// and Latin-1; everything else outside the listed punctuation blocks is
// treated as a letter.
namespace shapaudit::text {

// Decodes the code point starting at `pos` and advances `pos` past it.
// Malformed sequences decode as U+FFFD and consume one byte.
char32_t DecodeAt(std::string_view s, std::size_t& pos);

void AppendUtf8(char32_t cp, std::string& out);

std::vector<char32_t> ToCodePoints(std::string_view s);
std::string FromCodePoints(const std::vector<char32_t>& cps);

bool IsSpace(char32_t cp);
bool IsPunctuation(char32_t cp);
bool IsUpper(char32_t cp);
bool IsLower(char32_t cp);
bool IsLetter(char32_t cp);
bool IsApostrophe(char32_t cp);
char32_t ToLower(char32_t cp);

std::string CaseFold(std::string_view s);

// True when `s` is nonempty and every code point is punctuation or space.
bool IsPunctuationOnly(std::string_view s);

// Trims both ends and collapses internal whitespace runs to one space.
std::string CollapseWhitespace(std::string_view s);

// Splits on whitespace runs; no empty pieces.
std::vector<std::string> SplitWhitespace(std::string_view s);

// 64-bit FNV-1a. Stable across platforms and runs.
std::uint64_t Fnv1a64(std::string_view s);
std::string Hex64(std::uint64_t value);

}  // namespace shapaudit::text

#endif  // SHAPAUDIT_TEXT_UTF8_H_
