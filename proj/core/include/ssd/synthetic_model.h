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

#ifndef SSD_SYNTHETIC_MODEL_H_
#define SSD_SYNTHETIC_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <memory>

#include "ssd/model.h"

namespace ssd {

struct SynthModelConfig {
  std::uint64_t seed = 0;
  std::size_t vocab_size = 32;
  // Multiplies every logit; larger values give more peaked softmax rows.
  double sharpness = 4.0;
  // Non-mask tokens at distance <= context_window (including the position
  // itself) feed the hash for a position. 0 makes logits depend on the
  // position alone.
  std::size_t context_window = 2;

  friend bool operator==(const SynthModelConfig&, const SynthModelConfig&) = default;
};

// Hash-based stand-in for a trained denoiser. Logits at position i are a
// function of (seed, i, {(offset, token)} for revealed tokens in the window),
// so revealing tokens changes neighbouring predictions and confidence order.
class SyntheticModel final : public MaskedModel {
 public:
  // Throws std::invalid_argument unless sharpness > 0 and vocab_size >= 2.
  explicit SyntheticModel(const SynthModelConfig& config);

  std::size_t vocab_size() const override { return config_.vocab_size; }
  const SynthModelConfig& config() const { return config_; }

 protected:
  SequenceLogits Evaluate(const SequenceState& state) const override;

 private:
  SynthModelConfig config_;
};

std::unique_ptr<MaskedModel> MakeSyntheticModel(const SynthModelConfig& config);

}  // namespace ssd

#endif  // SSD_SYNTHETIC_MODEL_H_
