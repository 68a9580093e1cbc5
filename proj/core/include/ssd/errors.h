// Copyright 2026 The ssdecode Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SSD_ERRORS_H_
#define SSD_ERRORS_H_

#include <stdexcept>

namespace ssd {

// Invalid arguments are reported with std::invalid_argument. The types below
// cover the remaining failure kinds raised by the library.

// Attempt to overwrite a position that is not masked (prompt or already
// decoded). Generated positions are write-once.
class IllegalWriteError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Operation requires a state it was not given, e.g. drafting a sequence that
// has no masked positions left.
class InvalidStateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A table-backed model was queried with a sequence it has no entry for.
class FixtureMissError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed serialized input (fixtures, traces, reports, configs).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ssd

#endif  // SSD_ERRORS_H_
