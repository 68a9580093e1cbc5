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

#ifndef SSD_MODEL_H_
#define SSD_MODEL_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ssd/sequence.h"

namespace ssd {

// Logits for one sequence: `positions` rows of `vocab` reals, row-major.
class SequenceLogits {
 public:
  SequenceLogits() = default;
  SequenceLogits(std::size_t positions, std::size_t vocab)
      : positions_(positions), vocab_(vocab), values_(positions * vocab, 0.0) {}
  SequenceLogits(std::size_t positions, std::size_t vocab,
                 std::vector<double> values);

  std::size_t positions() const { return positions_; }
  std::size_t vocab() const { return vocab_; }
  std::span<const double> row(Position pos) const {
    return std::span<const double>(values_).subspan(pos * vocab_, vocab_);
  }
  std::span<double> mutable_row(Position pos) {
    return std::span<double>(values_).subspan(pos * vocab_, vocab_);
  }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const SequenceLogits&, const SequenceLogits&) = default;

 private:
  std::size_t positions_ = 0;
  std::size_t vocab_ = 0;
  std::vector<double> values_;
};

// One entry per input sequence, in input order.
using LogitsBatch = std::vector<SequenceLogits>;

// Masked denoiser f(x) -> per-position logits over the vocabulary.
// Implementations must be pure: the same sequence always produces
// bit-identical logits, independent of what else is in the batch.
class MaskedModel {
 public:
  virtual ~MaskedModel() = default;

  virtual std::size_t vocab_size() const = 0;

  // One forward pass over a batch. Throws std::invalid_argument when the
  // batch is empty.
  virtual LogitsBatch Forward(std::span<const SequenceState> batch) const;
  SequenceLogits ForwardOne(const SequenceState& state) const;

 protected:
  virtual SequenceLogits Evaluate(const SequenceState& state) const = 0;
};

struct Prediction {
  TokenId token = 0;
  double confidence = 0.0;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

struct TokenProb {
  TokenId token = 0;
  double prob = 0.0;

  friend bool operator==(const TokenProb&, const TokenProb&) = default;
};

// Max-subtracted softmax. Throws std::invalid_argument on non-finite input.
std::vector<double> Softmax(std::span<const double> logits);

// Argmax token (lowest id on ties) and its softmax probability.
Prediction PredictWithConfidence(std::span<const double> logits);

// The k most probable tokens, descending by probability, lowest id first on
// ties. Returns min(k, row size) entries.
std::vector<TokenProb> TopK(std::span<const double> logits, std::size_t k);

}  // namespace ssd

#endif  // SSD_MODEL_H_
