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

#ifndef SSD_TRACE_H_
#define SSD_TRACE_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ssd/model.h"
#include "ssd/sequence.h"

namespace ssd {

// Top-K (token, probability) at one masked position, descending.
struct PositionCandidates {
  Position pos = 0;
  std::vector<TokenProb> top;

  friend bool operator==(const PositionCandidates&, const PositionCandidates&) = default;
};

// One accepted token. `candidates` holds the top-K at every masked position of
// the state the token was chosen from, sorted by position.
struct StepRecord {
  Position pos = 0;
  TokenId token = 0;
  double confidence = 0.0;
  std::vector<PositionCandidates> candidates;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct DecodeTrace {
  std::size_t prompt_len = 0;
  std::size_t gen_len = 0;
  std::size_t block_len = 1;
  TokenId mask_id = 0;
  std::size_t vocab_size = 0;
  // Candidates recorded per position: min(requested top-K, vocab_size).
  std::size_t topk = 0;
  std::vector<StepRecord> steps;

  friend bool operator==(const DecodeTrace&, const DecodeTrace&) = default;
};

DecodeTrace MakeTrace(const SequenceState& initial, std::size_t vocab_size,
                      std::size_t topk);

// Replays the accepted positions and returns a description of the first step
// that finalizes a position outside the then-current block, or of a position
// accepted twice. nullopt when the trace honours the block order.
std::optional<std::string> FindBlockOrderViolation(const DecodeTrace& trace);

// Line-delimited form: a header record, then one record per step.
void WriteTrace(std::ostream& out, const DecodeTrace& trace);
std::string TraceToString(const DecodeTrace& trace);
DecodeTrace ReadTrace(std::istream& in);
DecodeTrace ParseTrace(const std::string& text);

}  // namespace ssd

#endif  // SSD_TRACE_H_
