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

#ifndef SHAPAUDIT_ERRORS_H_
#define SHAPAUDIT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace shapaudit {

// A caller broke a documented precondition (length mismatch, non-binary
// label, oversized exact request, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The model endpoint could not be reached after all retries.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The model endpoint answered, but the answer breaks the wire protocol.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dataset file is unreadable, empty, or has rejected rows.
class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Output or cache file could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace shapaudit

#endif  // SHAPAUDIT_ERRORS_H_
