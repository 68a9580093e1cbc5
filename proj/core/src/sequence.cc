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

#include "ssd/sequence.h"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "ssd/errors.h"

namespace ssd {

BlockSchedule::BlockSchedule(std::size_t prompt_len, std::size_t block_len,
                             std::vector<BlockRange> blocks)
    : prompt_len_(prompt_len), block_len_(block_len), blocks_(std::move(blocks)) {}

std::optional<std::size_t> BlockSchedule::BlockOf(Position pos) const {
  if (pos < prompt_len_ || blocks_.empty() || pos >= blocks_.back().end) {
    return std::nullopt;
  }
  return (pos - prompt_len_) / block_len_;
}

BlockSchedule BlockPartition(std::size_t prompt_len, std::size_t gen_len,
                             std::size_t block_len) {
  if (gen_len == 0) throw std::invalid_argument("gen_len must be >= 1");
  if (block_len == 0) throw std::invalid_argument("block_len must be >= 1");
  // Block j covers generation offsets [jB, min((j+1)B, L)), shifted by P.
  const std::size_t count = (gen_len + block_len - 1) / block_len;
  std::vector<BlockRange> blocks;
  blocks.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    blocks.push_back({prompt_len + j * block_len,
                      prompt_len + std::min((j + 1) * block_len, gen_len)});
  }
  return BlockSchedule(prompt_len, block_len, std::move(blocks));
}

SequenceState SequenceState::Initial(std::span<const TokenId> prompt,
                                     std::size_t gen_len, TokenId mask_id,
                                     std::size_t block_len) {
  std::vector<TokenId> tokens(prompt.begin(), prompt.end());
  tokens.resize(prompt.size() + gen_len, mask_id);
  return SequenceState(std::move(tokens), prompt.size(), mask_id, block_len);
}

SequenceState::SequenceState(std::vector<TokenId> tokens, std::size_t prompt_len,
                             TokenId mask_id, std::size_t block_len)
    : tokens_(std::move(tokens)),
      prompt_len_(prompt_len),
      mask_id_(mask_id),
      block_len_(block_len) {
  if (prompt_len_ > tokens_.size()) {
    throw std::invalid_argument("prompt_len exceeds sequence length");
  }
  if (std::find(tokens_.begin(), tokens_.begin() + prompt_len_, mask_id_) !=
      tokens_.begin() + prompt_len_) {
    throw std::invalid_argument("prompt contains the mask token");
  }
  schedule_ = BlockPartition(prompt_len_, tokens_.size() - prompt_len_, block_len_);
  num_masked_ = static_cast<std::size_t>(
      std::count(tokens_.begin() + prompt_len_, tokens_.end(), mask_id_));
}

std::vector<Position> SequenceState::MaskedPositions() const {
  std::vector<Position> out;
  out.reserve(num_masked_);
  for (Position i = prompt_len_; i < tokens_.size(); ++i) {
    if (tokens_[i] == mask_id_) out.push_back(i);
  }
  return out;
}

void SequenceState::Place(Position pos, TokenId tok) {
  if (pos >= tokens_.size() || tokens_[pos] != mask_id_) {
    throw IllegalWriteError("position " + std::to_string(pos) +
                            " is not masked");
  }
  if (tok == mask_id_) {
    throw std::invalid_argument("cannot place the mask token");
  }
  tokens_[pos] = tok;
  --num_masked_;
}

SequenceState PlaceToken(const SequenceState& state, Position pos, TokenId tok) {
  SequenceState next = state;
  next.Place(pos, tok);
  return next;
}

std::optional<std::size_t> CurrentBlock(const SequenceState& state,
                                        const BlockSchedule& schedule) {
  if (state.complete()) return std::nullopt;
  const auto tokens = state.tokens();
  for (Position i = state.prompt_len(); i < tokens.size(); ++i) {
    if (tokens[i] == state.mask_id()) return schedule.BlockOf(i);
  }
  return std::nullopt;
}

std::optional<std::size_t> CurrentBlock(const SequenceState& state) {
  return CurrentBlock(state, state.schedule());
}

std::string ToRecord(const SequenceState& state) {
  nlohmann::ordered_json j;
  j["prompt_len"] = state.prompt_len();
  j["mask_id"] = state.mask_id();
  j["block_len"] = state.block_len();
  j["tokens"] = std::vector<TokenId>(state.tokens().begin(), state.tokens().end());
  return j.dump();
}

SequenceState FromRecord(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    return SequenceState(j.at("tokens").get<std::vector<TokenId>>(),
                         j.at("prompt_len").get<std::size_t>(),
                         j.at("mask_id").get<TokenId>(),
                         j.at("block_len").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad sequence record: ") + e.what());
  }
}

}  // namespace ssd
