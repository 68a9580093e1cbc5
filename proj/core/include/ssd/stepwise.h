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

#ifndef SSD_STEPWISE_H_
#define SSD_STEPWISE_H_

#include <cstddef>
#include <optional>

#include "ssd/model.h"
#include "ssd/sequence.h"
#include "ssd/trace.h"

namespace ssd {

inline constexpr std::size_t kDefaultTopK = 5;

struct StepChoice {
  Position pos = 0;
  TokenId token = 0;
  double confidence = 0.0;

  friend bool operator==(const StepChoice&, const StepChoice&) = default;
};

// The baseline rule applied to one forward output: among masked positions of
// the current block, the one with the highest max-softmax confidence (lowest
// position on ties), with its argmax token. nullopt for a complete state.
// Throws InvalidStateError if the model's argmax is the mask token.
std::optional<StepChoice> StepwiseChoice(const SequenceState& state,
                                         const SequenceLogits& logits);

StepRecord MakeStepRecord(const SequenceState& state, const SequenceLogits& logits,
                          const StepChoice& choice, std::size_t topk);

// One forward, one accepted token. `state` must have a masked position.
StepRecord StepwiseStep(const MaskedModel& model, SequenceState& state,
                        std::size_t topk);

struct StepwiseResult {
  SequenceState final_state;
  DecodeTrace trace;
  std::size_t forward_passes = 0;
};

// Decodes until no mask remains, one token per forward pass.
StepwiseResult StepwiseDecode(const MaskedModel& model, SequenceState state,
                              std::size_t topk = kDefaultTopK);

}  // namespace ssd

#endif  // SSD_STEPWISE_H_
