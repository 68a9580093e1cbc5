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

#include "ssd/stepwise.h"

#include <stdexcept>
#include <string>
#include <utility>

#include "ssd/errors.h"

namespace ssd {

std::optional<StepChoice> StepwiseChoice(const SequenceState& state,
                                         const SequenceLogits& logits) {
  const std::optional<std::size_t> block = CurrentBlock(state);
  if (!block) return std::nullopt;
  if (logits.positions() != state.size()) {
    throw std::invalid_argument("logits do not match sequence length");
  }
  const BlockRange& range = state.schedule()[*block];
  std::optional<StepChoice> best;
  for (Position pos = range.begin; pos < range.end; ++pos) {
    if (!state.is_masked(pos)) continue;
    const Prediction p = PredictWithConfidence(logits.row(pos));
    // Strict comparison keeps the lowest position on ties.
    if (!best || p.confidence > best->confidence) {
      best = StepChoice{pos, p.token, p.confidence};
    }
  }
  if (best && best->token == state.mask_id()) {
    throw InvalidStateError("model predicted the mask token at position " +
                            std::to_string(best->pos));
  }
  return best;
}

StepRecord MakeStepRecord(const SequenceState& state, const SequenceLogits& logits,
                          const StepChoice& choice, std::size_t topk) {
  StepRecord record{choice.pos, choice.token, choice.confidence, {}};
  if (topk == 0) return record;
  record.candidates.reserve(state.num_masked());
  for (Position pos : state.MaskedPositions()) {
    record.candidates.push_back({pos, TopK(logits.row(pos), topk)});
  }
  return record;
}

StepRecord StepwiseStep(const MaskedModel& model, SequenceState& state,
                        std::size_t topk) {
  if (state.complete()) throw InvalidStateError("no masked position left");
  const SequenceLogits logits = model.ForwardOne(state);
  const std::optional<StepChoice> choice = StepwiseChoice(state, logits);
  StepRecord record = MakeStepRecord(state, logits, *choice, topk);
  state.Place(choice->pos, choice->token);
  return record;
}

StepwiseResult StepwiseDecode(const MaskedModel& model, SequenceState state,
                              std::size_t topk) {
  if (state.complete()) throw InvalidStateError("nothing to decode");
  StepwiseResult result{state, MakeTrace(state, model.vocab_size(), topk), 0};
  while (!state.complete()) {
    result.trace.steps.push_back(StepwiseStep(model, state, topk));
    ++result.forward_passes;
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace ssd
