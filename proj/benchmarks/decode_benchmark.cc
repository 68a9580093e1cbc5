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

#include <cstdint>
#include <vector>

#include "benchmark/benchmark.h"
#include "ssd/analyzer.h"
#include "ssd/ssd.h"
#include "ssd/stepwise.h"
#include "ssd/synthetic_model.h"

namespace ssd {
namespace {

constexpr std::size_t kVocab = 64;

SequenceState Initial(std::size_t gen_len) {
  return SequenceState::Initial(std::vector<TokenId>{1, 2, 3, 4, 5, 6, 7, 8}, gen_len,
                                static_cast<TokenId>(kVocab), 8);
}

void BM_StepwiseDecode(benchmark::State& state) {
  const SyntheticModel model({.seed = 1, .vocab_size = kVocab});
  const SequenceState initial = Initial(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(StepwiseDecode(model, initial, 0));
  }
  state.counters["forwards"] = static_cast<double>(state.range(0));
}
BENCHMARK(BM_StepwiseDecode)->Arg(64)->Arg(256);

void BM_SsdDecode(benchmark::State& state) {
  const SyntheticModel model({.seed = 1, .vocab_size = kVocab});
  const SequenceState initial = Initial(256);
  const TreeShape shape = state.range(1) == 0 ? TreeShape::Greedy() : TreeShape::MixOrder();
  const SsdOptions options{static_cast<std::size_t>(state.range(0)), shape, 0};
  std::size_t forwards = 0;
  for (auto _ : state) {
    const SsdResult r = SsdDecode(model, initial, options);
    forwards = r.forward_passes;
    benchmark::DoNotOptimize(r);
  }
  state.counters["forwards"] = static_cast<double>(forwards);
  state.SetLabel(shape.name());
}
BENCHMARK(BM_SsdDecode)->ArgsProduct({{3, 4, 5}, {0, 1}});

void BM_BuildTree(benchmark::State& state) {
  const SyntheticModel model({.seed = 2, .vocab_size = kVocab});
  const SequenceState base = Initial(64);
  const std::size_t n = state.range(0);
  const DraftSet drafts = SelfDraft(model, base, 2);
  const CandidateList candidates = SelectCandidates(base, drafts, n);
  const TreeShape shapes[] = {TreeShape::Greedy(), TreeShape::MixOrder(), TreeShape::Kary(2)};
  const TreeShape shape = shapes[state.range(1)];
  for (auto _ : state) {
    benchmark::DoNotOptimize(BuildTree(base, candidates, drafts, shape));
  }
  state.SetLabel(shape.name());
}
BENCHMARK(BM_BuildTree)->ArgsProduct({{3, 5}, {0, 1, 2}});

void BM_SyntheticForward(benchmark::State& state) {
  const SyntheticModel model({.seed = 3, .vocab_size = kVocab});
  const std::vector<SequenceState> batch(state.range(0), Initial(64));
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.Forward(batch));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SyntheticForward)->Arg(1)->Arg(4)->Arg(10);

void BM_TopkMatchReduction(benchmark::State& state) {
  const SyntheticModel model({.seed = 4, .vocab_size = kVocab});
  const DecodeTrace trace = StepwiseDecode(model, Initial(256), 5).trace;
  for (auto _ : state) {
    benchmark::DoNotOptimize(TopkMatchReduction(trace, 4, 5));
  }
}
BENCHMARK(BM_TopkMatchReduction);

}  // namespace
}  // namespace ssd

// The packaged benchmark_main archive is LTO bytecode from another compiler.
BENCHMARK_MAIN();
