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

#ifndef SSD_TABLE_MODEL_H_
#define SSD_TABLE_MODEL_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ssd/model.h"

namespace ssd {

// Lookup-table model keyed by the exact token list of a sequence. Used for
// small hand-checkable fixtures.
//
// File format (plain text, one record per line, '#' starts a comment line):
//
//   table-fixture 1 <vocab>
//   <n> <tok_0> ... <tok_n-1> <logit_0_0> ... <logit_0_V-1> ... <logit_n-1_V-1>
//
// Logits are written in shortest round-trip decimal form, so Save followed by
// Load reproduces every value exactly.
class TableModel final : public MaskedModel {
 public:
  explicit TableModel(std::size_t vocab_size);

  std::size_t vocab_size() const override { return vocab_; }
  std::size_t num_entries() const { return table_.size(); }

  // Adds or replaces the entry for `tokens`. Shape must be tokens.size() x V.
  void Add(std::vector<TokenId> tokens, SequenceLogits logits);
  bool Contains(const std::vector<TokenId>& tokens) const {
    return table_.count(tokens) > 0;
  }

  void Save(std::ostream& out) const;
  std::string ToString() const;
  static TableModel Load(std::istream& in);
  static TableModel Parse(const std::string& text);
  static TableModel LoadFile(const std::filesystem::path& path);
  void SaveFile(const std::filesystem::path& path) const;

 protected:
  // Throws FixtureMissError for unlisted sequences.
  SequenceLogits Evaluate(const SequenceState& state) const override;

 private:
  std::size_t vocab_;
  std::map<std::vector<TokenId>, SequenceLogits> table_;
};

}  // namespace ssd

#endif  // SSD_TABLE_MODEL_H_
