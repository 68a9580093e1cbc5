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

#ifndef SSD_REPORT_H_
#define SSD_REPORT_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssd/analyzer.h"
#include "ssd/model.h"
#include "ssd/ssd.h"
#include "ssd/synthetic_model.h"
#include "ssd/trace.h"

namespace ssd {

enum class Strategy { kStepwise, kGreedy, kMixOrder };

std::string StrategyName(Strategy s);
// Throws std::invalid_argument for anything but stepwise/greedy/mix_order.
Strategy ParseStrategy(std::string_view name);

struct ModelSpec {
  enum class Backend { kSynthetic, kTable };

  Backend backend = Backend::kSynthetic;
  SynthModelConfig synth;
  std::string table_fixture;  // table backend only

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Everything that determines a run. Two equal configs produce byte-identical
// reports.
struct RunConfig {
  ModelSpec model;
  std::vector<TokenId> prompt;
  // When > 0, this many prompt tokens are drawn from the model seed and
  // appended to `prompt`.
  std::size_t random_prompt_len = 0;
  std::size_t gen_length = 256;
  std::size_t block_length = 8;
  std::size_t draft_length = 3;
  Strategy strategy = Strategy::kGreedy;
  std::size_t topk = kDefaultTopK;
  // Defaults to the model's vocabulary size, an id the model never predicts.
  std::optional<TokenId> mask_id;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Config files use the same JSON object that reports echo.
std::string RunConfigToJson(const RunConfig& config);
// Keys absent from `json` keep their value from `base`. Throws FormatError on
// malformed JSON or unknown keys.
RunConfig RunConfigFromJson(std::string_view json, const RunConfig& base = {});

// Throws std::invalid_argument describing the first problem found.
void ValidateConfig(const RunConfig& config);

std::unique_ptr<MaskedModel> BuildModel(const ModelSpec& spec);

// Initial state for a config and the model it runs against.
SequenceState InitialState(const RunConfig& config, const MaskedModel& model);

inline constexpr std::string_view kSpeedupBasis =
    "forward-pass ratio; assumes memory-bound batch verification, no wall-clock timing";

struct Report {
  RunConfig config;
  std::vector<TokenId> tokens;  // generated region
  std::size_t forward_passes = 0;
  // Forwards a stepwise decode of the same config takes (= gen_length).
  std::size_t baseline_forward_passes = 0;
  double step_reduction = 0.0;
  double estimated_speedup = 0.0;
  std::vector<RoundStats> rounds;

  friend bool operator==(const Report&, const Report&) = default;
};

struct DecodeRun {
  Report report;
  DecodeTrace trace;
};

DecodeRun RunDecode(const RunConfig& config);
DecodeRun RunDecode(const RunConfig& config, const MaskedModel& model);

// Line-delimited: a config record, a summary record, one record per round.
std::string EmitReport(const Report& report);
Report ParseReport(std::string_view text);

struct CompareReport {
  Report baseline;
  Report candidate;
  bool lossless = false;
  // Position of the first differing generated token, when not lossless.
  std::optional<std::size_t> first_mismatch;
  double step_reduction = 0.0;
  double estimated_speedup = 0.0;

  friend bool operator==(const CompareReport&, const CompareReport&) = default;
};

// Both configs must share model, prompt, gen_length, block_length and
// mask_id; otherwise std::invalid_argument.
CompareReport RunCompare(const RunConfig& baseline, const RunConfig& candidate);

std::string EmitCompareReport(const CompareReport& report);
CompareReport ParseCompareReport(std::string_view text);

struct SweepSpec {
  RunConfig base;
  std::vector<std::uint64_t> seeds;
  std::vector<std::size_t> draft_lengths;
  std::vector<Strategy> strategies;
};

struct SweepRow {
  std::uint64_t seed = 0;
  std::size_t draft_length = 0;
  Strategy strategy = Strategy::kGreedy;
  std::size_t batch_size = 0;
  std::size_t forward_passes = 0;
  std::size_t baseline_forward_passes = 0;
  double step_reduction = 0.0;
  double estimated_speedup = 0.0;
  double mean_accepted = 0.0;
  bool lossless = false;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

// Every (seed, draft length, strategy) run paired with a stepwise baseline.
std::vector<SweepRow> RunSweep(const SweepSpec& spec);
std::string EmitSweep(const std::vector<SweepRow>& rows);

// Line-delimited form of an analyzer grid: one header record, one per row.
std::string EmitAnalysis(const ReductionTable& table);

}  // namespace ssd

#endif  // SSD_REPORT_H_
