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

#include "ssd/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ssd {

SequenceLogits::SequenceLogits(std::size_t positions, std::size_t vocab,
                               std::vector<double> values)
    : positions_(positions), vocab_(vocab), values_(std::move(values)) {
  if (values_.size() != positions_ * vocab_) {
    throw std::invalid_argument("logit buffer has " +
                                std::to_string(values_.size()) +
                                " values, expected positions * vocab");
  }
}

LogitsBatch MaskedModel::Forward(std::span<const SequenceState> batch) const {
  if (batch.empty()) throw std::invalid_argument("empty forward batch");
  LogitsBatch out;
  out.reserve(batch.size());
  for (const SequenceState& state : batch) out.push_back(Evaluate(state));
  return out;
}

SequenceLogits MaskedModel::ForwardOne(const SequenceState& state) const {
  return Forward(std::span<const SequenceState>(&state, 1)).front();
}

namespace {

void RequireFinite(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("empty logit row");
  for (double v : logits) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite logit");
  }
}

}  // namespace

std::vector<double> Softmax(std::span<const double> logits) {
  RequireFinite(logits);
  const double max = *std::max_element(logits.begin(), logits.end());
  std::vector<double> probs(logits.size());
  double sum = 0.0;
  for (std::size_t v = 0; v < logits.size(); ++v) {
    probs[v] = std::exp(logits[v] - max);
    sum += probs[v];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

Prediction PredictWithConfidence(std::span<const double> logits) {
  RequireFinite(logits);
  // max_element returns the first maximum, i.e. the lowest token id.
  const auto best = std::max_element(logits.begin(), logits.end());
  const double max = *best;
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - max);
  return {static_cast<TokenId>(best - logits.begin()), 1.0 / sum};
}

std::vector<TokenProb> TopK(std::span<const double> logits, std::size_t k) {
  const std::vector<double> probs = Softmax(logits);
  std::vector<TokenId> ids(logits.size());
  std::iota(ids.begin(), ids.end(), TokenId{0});
  k = std::min(k, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k),
                    ids.end(), [&](TokenId a, TokenId b) {
                      if (logits[a] != logits[b]) return logits[a] > logits[b];
                      return a < b;
                    });
  std::vector<TokenProb> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back({ids[i], probs[ids[i]]});
  return out;
}

}  // namespace ssd
