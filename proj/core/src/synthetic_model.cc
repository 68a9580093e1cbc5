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

#include "ssd/synthetic_model.h"

#include <algorithm>
#include <stdexcept>

namespace ssd {
namespace {

// splitmix64 finalizer.
constexpr std::uint64_t Mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from the top 53 bits.
constexpr double Unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace

SyntheticModel::SyntheticModel(const SynthModelConfig& config) : config_(config) {
  if (!(config_.sharpness > 0.0)) {
    throw std::invalid_argument("sharpness must be > 0");
  }
  if (config_.vocab_size < 2) {
    throw std::invalid_argument("vocab_size must be >= 2");
  }
}

SequenceLogits SyntheticModel::Evaluate(const SequenceState& state) const {
  const auto tokens = state.tokens();
  const std::size_t n = tokens.size();
  const std::size_t vocab = config_.vocab_size;
  const std::size_t window = config_.context_window;
  SequenceLogits out(n, vocab);
  for (Position i = 0; i < n; ++i) {
    std::uint64_t h = Mix(config_.seed ^ Mix(i + 1));
    const Position lo = i >= window ? i - window : 0;
    const Position hi = std::min(n - 1, i + window);
    // Neighbours are visited in offset order, which is a canonical ordering
    // of the (offset, token) multiset.
    for (Position j = lo; j <= hi; ++j) {
      if (j == i || tokens[j] == state.mask_id()) continue;
      const auto offset = static_cast<std::int64_t>(j) - static_cast<std::int64_t>(i);
      const std::uint64_t key =
          (static_cast<std::uint64_t>(offset + (std::int64_t{1} << 20)) << 32) ^
          static_cast<std::uint32_t>(tokens[j]);
      h = Mix(h ^ Mix(key));
    }
    const double scale = config_.sharpness * (0.5 + Unit(Mix(h ^ 0x5bd1e995ULL)));
    auto row = out.mutable_row(i);
    for (std::size_t v = 0; v < vocab; ++v) {
      row[v] = scale * (2.0 * Unit(Mix(h + 0x632be59bd9b4e019ULL * (v + 1))) - 1.0);
    }
  }
  return out;
}

std::unique_ptr<MaskedModel> MakeSyntheticModel(const SynthModelConfig& config) {
  return std::make_unique<SyntheticModel>(config);
}

}  // namespace ssd
