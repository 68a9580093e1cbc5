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

#ifndef SSD_SEQUENCE_H_
#define SSD_SEQUENCE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ssd {

using TokenId = std::int32_t;

// Absolute, 0-indexed position in the full sequence (prompt + generation).
using Position = std::size_t;

// A contiguous range of generation positions, stored 0-indexed and half-open.
// The 1-indexed accessors follow the block formula convention where the first
// generated token sits at position P + 1.
struct BlockRange {
  Position begin = 0;
  Position end = 0;

  std::size_t size() const { return end - begin; }
  bool contains(Position pos) const { return pos >= begin && pos < end; }
  Position first_one_indexed() const { return begin + 1; }
  Position last_one_indexed() const { return end; }

  friend bool operator==(const BlockRange&, const BlockRange&) = default;
};

class BlockSchedule {
 public:
  BlockSchedule() = default;
  BlockSchedule(std::size_t prompt_len, std::size_t block_len,
                std::vector<BlockRange> blocks);

  std::span<const BlockRange> blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }
  const BlockRange& operator[](std::size_t j) const { return blocks_[j]; }

  // Index of the block holding `pos`; nullopt for prompt positions or
  // positions past the generation region.
  std::optional<std::size_t> BlockOf(Position pos) const;

 private:
  std::size_t prompt_len_ = 0;
  std::size_t block_len_ = 1;
  std::vector<BlockRange> blocks_;
};

// Splits the generation region P .. P+L-1 into ceil(L/B) blocks of size B,
// the last one possibly shorter. Throws std::invalid_argument when L or B is 0.
BlockSchedule BlockPartition(std::size_t prompt_len, std::size_t gen_len,
                             std::size_t block_len);

// Prompt followed by L generation slots. A slot is masked iff it holds
// mask_id. Copies are independent snapshots.
class SequenceState {
 public:
  // Empty sequence with no generation region.
  SequenceState() = default;

  // x0 = [prompt, mask x L]. The prompt must not contain mask_id.
  static SequenceState Initial(std::span<const TokenId> prompt,
                               std::size_t gen_len, TokenId mask_id,
                               std::size_t block_len);

  // Rebuilds a state from a full token list, e.g. when loading fixtures.
  // Generation slots may already be filled.
  SequenceState(std::vector<TokenId> tokens, std::size_t prompt_len,
                TokenId mask_id, std::size_t block_len);

  std::span<const TokenId> tokens() const { return tokens_; }
  TokenId at(Position pos) const { return tokens_.at(pos); }
  std::size_t size() const { return tokens_.size(); }
  std::size_t prompt_len() const { return prompt_len_; }
  std::size_t gen_len() const { return tokens_.size() - prompt_len_; }
  TokenId mask_id() const { return mask_id_; }
  std::size_t block_len() const { return block_len_; }
  const BlockSchedule& schedule() const { return schedule_; }

  bool is_masked(Position pos) const { return tokens_.at(pos) == mask_id_; }
  std::size_t num_masked() const { return num_masked_; }
  bool complete() const { return num_masked_ == 0; }
  std::vector<Position> MaskedPositions() const;
  std::span<const TokenId> generated() const {
    return std::span<const TokenId>(tokens_).subspan(prompt_len_);
  }

  // Writes `tok` at a masked position. Throws IllegalWriteError when the
  // position is not masked (prompt, already decoded, or out of range) and
  // std::invalid_argument when tok == mask_id.
  void Place(Position pos, TokenId tok);

  friend bool operator==(const SequenceState& a, const SequenceState& b) {
    return a.prompt_len_ == b.prompt_len_ && a.mask_id_ == b.mask_id_ &&
           a.block_len_ == b.block_len_ && a.tokens_ == b.tokens_;
  }

 private:
  std::vector<TokenId> tokens_;
  std::size_t prompt_len_ = 0;
  TokenId mask_id_ = 0;
  std::size_t block_len_ = 1;
  std::size_t num_masked_ = 0;
  BlockSchedule schedule_;
};

// Snapshot form of Place: returns a copy with tokens[pos] = tok.
SequenceState PlaceToken(const SequenceState& state, Position pos, TokenId tok);

// Lowest-indexed block that still has a masked position; nullopt once the
// sequence is complete.
std::optional<std::size_t> CurrentBlock(const SequenceState& state,
                                        const BlockSchedule& schedule);
std::optional<std::size_t> CurrentBlock(const SequenceState& state);

// One-line record: {"prompt_len":P,"mask_id":M,"block_len":B,"tokens":[...]}.
std::string ToRecord(const SequenceState& state);
SequenceState FromRecord(std::string_view line);

}  // namespace ssd

#endif  // SSD_SEQUENCE_H_
