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

#include "ssd/report.h"

#include <stdexcept>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "nlohmann/json.hpp"
#include "ssd/errors.h"
#include "ssd/stepwise.h"

namespace ssd {
namespace {

using ::testing::HasSubstr;

RunConfig ContextFreeConfig(Strategy strategy, std::size_t gen_length) {
  RunConfig c;
  c.model.synth = {.seed = 11, .vocab_size = 32, .context_window = 0};
  c.prompt = {1, 2, 3};
  c.gen_length = gen_length;
  c.block_length = gen_length;
  c.strategy = strategy;
  return c;
}

RunConfig SeededConfig(Strategy strategy, std::uint64_t seed) {
  RunConfig c;
  c.model.synth = {.seed = seed, .vocab_size = 24};
  c.random_prompt_len = 6;
  c.gen_length = 64;
  c.block_length = 8;
  c.strategy = strategy;
  return c;
}

TEST(StrategyTest, Names) {
  for (Strategy s : {Strategy::kStepwise, Strategy::kGreedy, Strategy::kMixOrder}) {
    EXPECT_EQ(ParseStrategy(StrategyName(s)), s);
  }
  EXPECT_EQ(StrategyName(Strategy::kMixOrder), "mix_order");
  EXPECT_THROW(ParseStrategy("kary"), std::invalid_argument);
}

TEST(RunConfigTest, JsonRoundTrip) {
  RunConfig c = SeededConfig(Strategy::kMixOrder, 9);
  c.prompt = {4, 5};
  c.topk = 3;
  c.mask_id = 99;
  EXPECT_EQ(RunConfigFromJson(RunConfigToJson(c)), c);
  RunConfig table;
  table.model.backend = ModelSpec::Backend::kTable;
  table.model.table_fixture = "fixtures/x.table";
  EXPECT_EQ(RunConfigFromJson(RunConfigToJson(table)), table);
}

TEST(RunConfigTest, PartialJsonKeepsBase) {
  const RunConfig base = SeededConfig(Strategy::kGreedy, 4);
  const RunConfig c = RunConfigFromJson(R"({"draft_length": 5, "strategy": "mix_order"})", base);
  EXPECT_EQ(c.draft_length, 5u);
  EXPECT_EQ(c.strategy, Strategy::kMixOrder);
  EXPECT_EQ(c.model, base.model);
  EXPECT_EQ(c.gen_length, base.gen_length);
}

TEST(RunConfigTest, MalformedJson) {
  EXPECT_THROW(RunConfigFromJson("{"), FormatError);
  EXPECT_THROW(RunConfigFromJson(R"({"gen_len": 3})"), FormatError);
  EXPECT_THROW(RunConfigFromJson(R"({"gen_length": "many"})"), FormatError);
  EXPECT_THROW(RunConfigFromJson("[1]"), FormatError);
}

TEST(RunConfigTest, ValidationRejectsZeroCounts) {
  const RunConfig ok = SeededConfig(Strategy::kGreedy, 1);
  EXPECT_NO_THROW(ValidateConfig(ok));
  for (auto mutate : std::vector<void (*)(RunConfig&)>{
           [](RunConfig& c) { c.gen_length = 0; },
           [](RunConfig& c) { c.block_length = 0; },
           [](RunConfig& c) { c.draft_length = 0; },
           [](RunConfig& c) { c.topk = 0; },
           [](RunConfig& c) { c.model.synth.vocab_size = 1; },
           [](RunConfig& c) { c.prompt = {24}; },  // the default mask id
       }) {
    RunConfig bad = ok;
    mutate(bad);
    EXPECT_THROW(ValidateConfig(bad), std::invalid_argument);
  }
  RunConfig table = ok;
  table.model.backend = ModelSpec::Backend::kTable;
  EXPECT_THROW(ValidateConfig(table), std::invalid_argument);
}

TEST(RunDecodeTest, StepwiseUsesOneForwardPerToken) {
  const DecodeRun run = RunDecode(ContextFreeConfig(Strategy::kStepwise, 256));
  EXPECT_EQ(run.report.forward_passes, 256u);
  EXPECT_EQ(run.report.baseline_forward_passes, 256u);
  EXPECT_EQ(run.report.tokens.size(), 256u);
  EXPECT_EQ(run.report.rounds.size(), 256u);
  EXPECT_EQ(run.report.step_reduction, 0.0);
  EXPECT_EQ(run.report.estimated_speedup, 1.0);
  EXPECT_EQ(run.trace.steps.size(), 256u);
}

TEST(RunDecodeTest, GreedyOnContextFreeModelTakesSixtyFiveForwards) {
  const DecodeRun run = RunDecode(ContextFreeConfig(Strategy::kGreedy, 256));
  // One initial draft, then 64 rounds that each accept 4 tokens.
  EXPECT_EQ(run.report.forward_passes, 65u);
  ASSERT_EQ(run.report.rounds.size(), 64u);
  for (const RoundStats& r : run.report.rounds) EXPECT_EQ(r.accepted, 4u);
  EXPECT_DOUBLE_EQ(run.report.step_reduction, 1.0 - 65.0 / 256.0);
  EXPECT_DOUBLE_EQ(run.report.estimated_speedup, 256.0 / 65.0);
  EXPECT_EQ(run.report.tokens,
            RunDecode(ContextFreeConfig(Strategy::kStepwise, 256)).report.tokens);
}

TEST(RunDecodeTest, RandomPromptComesFromSeed) {
  const RunConfig c = SeededConfig(Strategy::kGreedy, 3);
  const auto model = BuildModel(c.model);
  const SequenceState a = InitialState(c, *model);
  EXPECT_EQ(a.prompt_len(), 6u);
  EXPECT_EQ(a, InitialState(c, *model));
  RunConfig other = c;
  other.model.synth.seed = 4;
  EXPECT_NE(a.tokens().front(), InitialState(other, *BuildModel(other.model)).tokens().front());
}

TEST(ReportTest, EmitIsDeterministicAndParses) {
  const RunConfig c = SeededConfig(Strategy::kMixOrder, 5);
  const std::string first = EmitReport(RunDecode(c).report);
  EXPECT_EQ(first, EmitReport(RunDecode(c).report));
  const Report parsed = ParseReport(first);
  EXPECT_EQ(parsed, RunDecode(c).report);
  EXPECT_EQ(EmitReport(parsed), first);
}

TEST(ReportTest, RecordsAreOrderedJsonLines) {
  const Report r = RunDecode(SeededConfig(Strategy::kGreedy, 5)).report;
  const std::string text = EmitReport(r);
  std::vector<nlohmann::json> records;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    records.push_back(nlohmann::json::parse(text.substr(start, end - start)));
    start = end + 1;
  }
  ASSERT_EQ(records.size(), 2 + r.rounds.size());
  EXPECT_EQ(records[0]["record"], "config");
  EXPECT_EQ(records[1]["record"], "summary");
  EXPECT_EQ(records[1]["forward_passes"], r.forward_passes);
  EXPECT_THAT(records[1]["speedup_basis"].get<std::string>(), HasSubstr("memory-bound"));
  EXPECT_EQ(records[2]["record"], "round");
  EXPECT_LT(text.find("\"tokens\""), text.find("\"forward_passes\""));
}

TEST(ReportTest, ParseRejectsGarbage) {
  EXPECT_THROW(ParseReport(""), FormatError);
  EXPECT_THROW(ParseReport("{\"record\":\"summary\"}\n"), FormatError);
  EXPECT_THROW(ParseReport("not json\n"), FormatError);
}

TEST(CompareTest, GreedyAndMixOrderAreLossless) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (Strategy s : {Strategy::kGreedy, Strategy::kMixOrder}) {
      const CompareReport cmp =
          RunCompare(SeededConfig(Strategy::kStepwise, seed), SeededConfig(s, seed));
      EXPECT_TRUE(cmp.lossless);
      EXPECT_EQ(cmp.first_mismatch, std::nullopt);
      EXPECT_GT(cmp.step_reduction, 0.0);
      EXPECT_LE(cmp.step_reduction, UpperBound(3));
      EXPECT_DOUBLE_EQ(cmp.step_reduction,
                       1.0 - static_cast<double>(cmp.candidate.forward_passes) /
                                 static_cast<double>(cmp.baseline.forward_passes));
      EXPECT_EQ(ParseCompareReport(EmitCompareReport(cmp)), cmp);
    }
  }
}

TEST(CompareTest, MismatchedConfigsAreRejected) {
  const RunConfig base = SeededConfig(Strategy::kStepwise, 2);
  RunConfig other = SeededConfig(Strategy::kGreedy, 2);
  other.gen_length = 32;
  EXPECT_THROW(RunCompare(base, other), std::invalid_argument);
  other = SeededConfig(Strategy::kGreedy, 3);
  EXPECT_THROW(RunCompare(base, other), std::invalid_argument);
  other = SeededConfig(Strategy::kGreedy, 2);
  other.block_length = 4;
  EXPECT_THROW(RunCompare(base, other), std::invalid_argument);
}

TEST(SweepTest, RowsPerCombination) {
  SweepSpec spec{SeededConfig(Strategy::kGreedy, 0), {1, 2}, {3, 4, 5},
                 {Strategy::kGreedy, Strategy::kMixOrder}};
  const std::vector<SweepRow> rows = RunSweep(spec);
  ASSERT_EQ(rows.size(), 12u);
  for (const SweepRow& row : rows) {
    EXPECT_TRUE(row.lossless);
    EXPECT_EQ(row.batch_size, row.strategy == Strategy::kGreedy ? row.draft_length + 1
                                                                : 2 * row.draft_length);
    EXPECT_EQ(row.baseline_forward_passes, 64u);
    EXPECT_LE(row.step_reduction, UpperBound(row.draft_length));
    EXPECT_GE(row.mean_accepted, 1.0);
  }
  const std::string text = EmitSweep(rows);
  EXPECT_THAT(text, HasSubstr("\"record\":\"sweep_summary\""));
  EXPECT_EQ(text, EmitSweep(RunSweep(spec)));
}

TEST(AnalysisTest, EmitsHeaderAndRows) {
  const DecodeRun run = RunDecode(SeededConfig(Strategy::kStepwise, 3));
  const std::vector<std::size_t> ns = {3, 4, 5};
  const std::vector<std::size_t> ks = {1, 5};
  const std::string text = EmitAnalysis(AnalyzeTrace(run.trace, ns, ks));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  EXPECT_THAT(text, HasSubstr("\"upper_bound\":0.75"));
}

}  // namespace
}  // namespace ssd
