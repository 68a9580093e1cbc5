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

#include "ssd/analyzer.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "ssd/ssd.h"
#include "ssd/stepwise.h"
#include "ssd/synthetic_model.h"

namespace ssd {
namespace {

using ::testing::HasSubstr;

DecodeTrace DecodeSynthetic(const SynthModelConfig& config, std::size_t gen_len,
                            std::size_t block_len, std::size_t topk) {
  const SyntheticModel model(config);
  const auto mask = static_cast<TokenId>(config.vocab_size);
  return StepwiseDecode(model,
                        SequenceState::Initial(std::vector<TokenId>{1, 2, 3}, gen_len, mask,
                                               block_len),
                        topk)
      .trace;
}

// Straight re-reading of the windowed match rule, with linear lookups.
double BruteForceReduction(const DecodeTrace& trace, std::size_t n, std::size_t k) {
  const std::size_t total = trace.steps.size();
  std::vector<std::size_t> matched((total + n) / (n + 1), 0);
  for (std::size_t i = 0; i < total; ++i) {
    const StepRecord& start = trace.steps[i - i % (n + 1)];
    for (const PositionCandidates& pc : start.candidates) {
      if (pc.pos != trace.steps[i].pos) continue;
      for (std::size_t j = 0; j < k && j < pc.top.size(); ++j) {
        if (pc.top[j].token == trace.steps[i].token) ++matched[i / (n + 1)];
      }
    }
  }
  double saved = 0;
  for (std::size_t m : matched) saved += m > 0 ? static_cast<double>(m - 1) : 0.0;
  return total == 0 ? 0.0 : saved / static_cast<double>(total);
}

// Windows never save more than one forward per step after the first.
double WindowCeiling(std::size_t total, std::size_t n) {
  const std::size_t windows = (total + n) / (n + 1);
  return static_cast<double>(total - windows) / static_cast<double>(total);
}

TEST(UpperBoundTest, Values) {
  EXPECT_DOUBLE_EQ(UpperBound(3), 0.75);
  EXPECT_DOUBLE_EQ(UpperBound(4), 0.8);
  EXPECT_NEAR(UpperBound(5), 0.8333, 5e-5);
  EXPECT_THROW(UpperBound(0), std::invalid_argument);
}

TEST(KaryTreeSizeTest, Values) {
  EXPECT_EQ(KaryTreeSize(2, 3), 15u);
  EXPECT_EQ(KaryTreeSize(1, 3), 4u);
  EXPECT_EQ(KaryTreeSize(3, 2), 13u);
  EXPECT_EQ(KaryTreeSize(5, 0), 1u);
}

TEST(KaryTreeSizeTest, UnaryTreeIsTheGreedyChain) {
  for (std::size_t n = 1; n <= 8; ++n) {
    EXPECT_EQ(KaryTreeSize(1, n), n + 1);
    EXPECT_EQ(KaryTreeSize(1, n), TreeShape::Greedy().NodeCount(n));
    for (std::uint64_t k = 1; k <= 4; ++k) {
      EXPECT_EQ(KaryTreeSize(k, n), TreeShape::Kary(k).NodeCount(n));
    }
  }
}

// Five steps, two candidates per position.
DecodeTrace HandTrace() {
  DecodeTrace t;
  t.gen_len = 5;
  t.block_len = 5;
  t.mask_id = 10;
  t.vocab_size = 10;
  t.topk = 2;
  auto pc = [](Position p, TokenId a, TokenId b) {
    return PositionCandidates{p, {{a, 0.6}, {b, 0.3}}};
  };
  t.steps = {
      {0, 1, 0.6, {pc(0, 1, 3), pc(1, 2, 0), pc(2, 6, 5), pc(3, 4, 2), pc(4, 0, 9)}},
      {1, 0, 0.6, {pc(1, 0, 2), pc(2, 6, 5), pc(3, 4, 2), pc(4, 0, 9)}},
      {3, 4, 0.6, {pc(2, 5, 6), pc(3, 4, 1), pc(4, 7, 7)}},
      {2, 6, 0.6, {pc(2, 6, 5), pc(4, 7, 7)}},
      {4, 9, 0.6, {pc(4, 8, 9)}},
  };
  return t;
}

TEST(TopkMatchReductionTest, HandTrace) {
  const DecodeTrace t = HandTrace();
  // n=1: windows {0,1} {2,3} {4}. With k=1 each window matches only its first
  // step (or nothing); k=2 adds steps 1 and 3.
  EXPECT_DOUBLE_EQ(TopkMatchReduction(t, 1, 1), 0.0);
  EXPECT_DOUBLE_EQ(TopkMatchReduction(t, 1, 2), 2.0 / 5.0);
  // n=4: one window judged at step 0. Steps 0,2,3 are top-1; 1 and 4 top-2.
  EXPECT_DOUBLE_EQ(TopkMatchReduction(t, 4, 1), 2.0 / 5.0);
  EXPECT_DOUBLE_EQ(TopkMatchReduction(t, 4, 2), 4.0 / 5.0);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t k = 1; k <= 2; ++k) {
      EXPECT_DOUBLE_EQ(TopkMatchReduction(t, n, k), BruteForceReduction(t, n, k));
    }
  }
}

TEST(TopkMatchReductionTest, RejectsBadArguments) {
  const DecodeTrace t = HandTrace();
  EXPECT_THROW(TopkMatchReduction(t, 0, 1), std::invalid_argument);
  EXPECT_THROW(TopkMatchReduction(t, 3, 0), std::invalid_argument);
  try {
    TopkMatchReduction(t, 3, 3);
    FAIL() << "k above recorded K accepted";
  } catch (const std::invalid_argument& e) {
    EXPECT_THAT(e.what(), HasSubstr("k=3"));
  }
}

TEST(TopkMatchReductionTest, EmptyTraceIsZero) {
  DecodeTrace t;
  t.topk = 3;
  EXPECT_EQ(TopkMatchReduction(t, 3, 3), 0.0);
}

TEST(TopkMatchReductionTest, FullVocabularyReachesTheBound) {
  for (std::size_t n : {3, 4, 5}) {
    // n+1 divides 120, so every window is full.
    const DecodeTrace t = DecodeSynthetic({.seed = 5, .vocab_size = 12}, 120, 8, 12);
    EXPECT_DOUBLE_EQ(TopkMatchReduction(t, n, 12), UpperBound(n)) << n;
  }
}

TEST(TopkMatchReductionTest, FullVocabularyOnRaggedTraceHitsWindowCeiling) {
  const DecodeTrace t = DecodeSynthetic({.seed = 5, .vocab_size = 6}, 51, 8, 6);
  for (std::size_t n : {3, 4, 5}) {
    EXPECT_DOUBLE_EQ(TopkMatchReduction(t, n, 6), WindowCeiling(51, n)) << n;
    EXPECT_LT(TopkMatchReduction(t, n, 6), UpperBound(n));
  }
}

TEST(TopkMatchReductionTest, ContextFreeModelMatchesAtTopOne) {
  const DecodeTrace t =
      DecodeSynthetic({.seed = 17, .vocab_size = 32, .context_window = 0}, 240, 16, 1);
  for (std::size_t n : {3, 4, 5}) {
    EXPECT_DOUBLE_EQ(TopkMatchReduction(t, n, 1), UpperBound(n)) << n;
  }
}

TEST(TopkMatchReductionTest, PropertiesOnRandomTraces) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const SynthModelConfig config{.seed = rng(),
                                  .vocab_size = 4 + rng() % 12,
                                  .sharpness = 1.0 + static_cast<double>(rng() % 50) / 10.0,
                                  .context_window = rng() % 4};
    const std::size_t gen_len = 1 + rng() % 60;
    const DecodeTrace t = DecodeSynthetic(config, gen_len, 1 + rng() % 16, 5);
    for (std::size_t n = 1; n <= 6; ++n) {
      double previous = 0.0;
      for (std::size_t k = 1; k <= t.topk; ++k) {
        const double r = TopkMatchReduction(t, n, k);
        ASSERT_DOUBLE_EQ(r, BruteForceReduction(t, n, k));
        ASSERT_GE(r, 0.0);
        ASSERT_LE(r, UpperBound(n));
        ASSERT_LE(r, WindowCeiling(gen_len, n));
        ASSERT_GE(r, previous) << "nested top-k sets";
        previous = r;
      }
    }
  }
}

TEST(AnalyzeTraceTest, TableLayout) {
  const DecodeTrace t = DecodeSynthetic({.seed = 2, .vocab_size = 8}, 60, 6, 5);
  const std::vector<std::size_t> ns = {3, 4, 5};
  const std::vector<std::size_t> ks = {1, 2, 3, 4, 5};
  const ReductionTable table = AnalyzeTrace(t, ns, ks);
  ASSERT_EQ(table.cells.size(), 3u);
  for (std::size_t r = 0; r < 3; ++r) {
    ASSERT_EQ(table.cells[r].size(), 5u);
    EXPECT_EQ(table.upper_bounds[r], UpperBound(ns[r]));
    for (std::size_t c = 0; c < 5; ++c) {
      EXPECT_EQ(table.cells[r][c], TopkMatchReduction(t, ns[r], ks[c]));
    }
  }
  const std::string text = FormatReductionTable(table);
  EXPECT_THAT(text, HasSubstr("75.0%"));
  EXPECT_THAT(text, HasSubstr("80.0%"));
  EXPECT_THAT(text, HasSubstr("83.3%"));
  EXPECT_THAT(text, HasSubstr("k=5"));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

}  // namespace
}  // namespace ssd
