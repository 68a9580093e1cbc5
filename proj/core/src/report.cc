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

#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

#include <nlohmann/json.hpp>

#include "ssd/errors.h"
#include "ssd/stepwise.h"
#include "ssd/table_model.h"

namespace ssd {

using nlohmann::json;
using nlohmann::ordered_json;

std::string StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kStepwise:
      return "stepwise";
    case Strategy::kGreedy:
      return "greedy";
    case Strategy::kMixOrder:
      return "mix_order";
  }
  return "unknown";
}

Strategy ParseStrategy(std::string_view name) {
  if (name == "stepwise") return Strategy::kStepwise;
  if (name == "greedy") return Strategy::kGreedy;
  if (name == "mix_order") return Strategy::kMixOrder;
  throw std::invalid_argument("unknown strategy '" + std::string(name) +
                              "' (expected stepwise, greedy or mix_order)");
}

namespace {

std::string BackendName(ModelSpec::Backend b) {
  return b == ModelSpec::Backend::kTable ? "table" : "synthetic";
}

ModelSpec::Backend ParseBackend(const std::string& name) {
  if (name == "synthetic") return ModelSpec::Backend::kSynthetic;
  if (name == "table") return ModelSpec::Backend::kTable;
  throw FormatError("unknown model backend '" + name + "'");
}

ordered_json ConfigObject(const RunConfig& c) {
  ordered_json j;
  j["model"] = BackendName(c.model.backend);
  j["seed"] = c.model.synth.seed;
  j["vocab_size"] = c.model.synth.vocab_size;
  j["sharpness"] = c.model.synth.sharpness;
  j["context_window"] = c.model.synth.context_window;
  j["table_fixture"] = c.model.table_fixture;
  j["prompt"] = c.prompt;
  j["random_prompt_len"] = c.random_prompt_len;
  j["gen_length"] = c.gen_length;
  j["block_length"] = c.block_length;
  j["draft_length"] = c.draft_length;
  j["strategy"] = StrategyName(c.strategy);
  j["topk"] = c.topk;
  j["mask_id"] = c.mask_id ? ordered_json(*c.mask_id) : ordered_json(nullptr);
  return j;
}

RunConfig ConfigFromObject(const json& j, RunConfig c) {
  if (!j.is_object()) throw FormatError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "record") continue;
    if (key == "model") {
      c.model.backend = ParseBackend(value.get<std::string>());
    } else if (key == "seed") {
      c.model.synth.seed = value.get<std::uint64_t>();
    } else if (key == "vocab_size") {
      c.model.synth.vocab_size = value.get<std::size_t>();
    } else if (key == "sharpness") {
      c.model.synth.sharpness = value.get<double>();
    } else if (key == "context_window") {
      c.model.synth.context_window = value.get<std::size_t>();
    } else if (key == "table_fixture") {
      c.model.table_fixture = value.get<std::string>();
    } else if (key == "prompt") {
      c.prompt = value.get<std::vector<TokenId>>();
    } else if (key == "random_prompt_len") {
      c.random_prompt_len = value.get<std::size_t>();
    } else if (key == "gen_length") {
      c.gen_length = value.get<std::size_t>();
    } else if (key == "block_length") {
      c.block_length = value.get<std::size_t>();
    } else if (key == "draft_length") {
      c.draft_length = value.get<std::size_t>();
    } else if (key == "strategy") {
      try {
        c.strategy = ParseStrategy(value.get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
      }
    } else if (key == "topk") {
      c.topk = value.get<std::size_t>();
    } else if (key == "mask_id") {
      c.mask_id = value.is_null() ? std::nullopt
                                  : std::optional<TokenId>(value.get<TokenId>());
    } else {
      throw FormatError("unknown config key '" + key + "'");
    }
  }
  return c;
}

json ParseJson(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad JSON: ") + e.what());
  }
}

}  // namespace

std::string RunConfigToJson(const RunConfig& config) {
  return ConfigObject(config).dump();
}

RunConfig RunConfigFromJson(std::string_view text, const RunConfig& base) {
  try {
    return ConfigFromObject(ParseJson(text), base);
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad config value: ") + e.what());
  }
}

void ValidateConfig(const RunConfig& c) {
  if (c.gen_length == 0) throw std::invalid_argument("gen_length must be >= 1");
  if (c.block_length == 0) throw std::invalid_argument("block_length must be >= 1");
  if (c.draft_length == 0) throw std::invalid_argument("draft_length must be >= 1");
  if (c.topk == 0) throw std::invalid_argument("topk must be >= 1");
  if (c.model.backend == ModelSpec::Backend::kSynthetic) {
    if (!(c.model.synth.sharpness > 0.0)) {
      throw std::invalid_argument("sharpness must be > 0");
    }
    if (c.model.synth.vocab_size < 2) {
      throw std::invalid_argument("vocab_size must be >= 2");
    }
  } else if (c.model.table_fixture.empty()) {
    throw std::invalid_argument("table backend needs a table_fixture path");
  }
  std::optional<TokenId> mask = c.mask_id;
  if (!mask && c.model.backend == ModelSpec::Backend::kSynthetic) {
    mask = static_cast<TokenId>(c.model.synth.vocab_size);
  }
  for (TokenId t : c.prompt) {
    if (t < 0) throw std::invalid_argument("prompt token ids must be >= 0");
    if (mask && t == *mask) {
      throw std::invalid_argument("prompt contains the mask token");
    }
  }
}

std::unique_ptr<MaskedModel> BuildModel(const ModelSpec& spec) {
  if (spec.backend == ModelSpec::Backend::kTable) {
    return std::make_unique<TableModel>(TableModel::LoadFile(spec.table_fixture));
  }
  return MakeSyntheticModel(spec.synth);
}

SequenceState InitialState(const RunConfig& config, const MaskedModel& model) {
  const auto vocab = static_cast<TokenId>(model.vocab_size());
  const TokenId mask = config.mask_id.value_or(vocab);
  std::vector<TokenId> prompt = config.prompt;
  if (config.random_prompt_len > 0) {
    // Raw engine output only: distribution objects are not portable.
    std::mt19937_64 engine(config.model.synth.seed ^ 0x7072'6f6d'7074ULL);
    for (std::size_t i = 0; i < config.random_prompt_len; ++i) {
      auto tok = static_cast<TokenId>(engine() % static_cast<std::uint64_t>(vocab));
      if (tok == mask) tok = (tok + 1) % vocab;
      prompt.push_back(tok);
    }
  }
  return SequenceState::Initial(prompt, config.gen_length, mask, config.block_length);
}

DecodeRun RunDecode(const RunConfig& config) {
  ValidateConfig(config);
  const std::unique_ptr<MaskedModel> model = BuildModel(config.model);
  return RunDecode(config, *model);
}

DecodeRun RunDecode(const RunConfig& config, const MaskedModel& model) {
  ValidateConfig(config);
  SequenceState state = InitialState(config, model);
  DecodeRun run;
  Report& report = run.report;
  report.config = config;
  report.baseline_forward_passes = state.num_masked();
  if (config.strategy == Strategy::kStepwise) {
    StepwiseResult result = StepwiseDecode(model, std::move(state), config.topk);
    for (std::size_t i = 0; i < result.forward_passes; ++i) {
      report.rounds.push_back({i, 1, 1, i + 1, false});
    }
    report.forward_passes = result.forward_passes;
    report.tokens.assign(result.final_state.generated().begin(),
                         result.final_state.generated().end());
    run.trace = std::move(result.trace);
  } else {
    SsdOptions options;
    options.draft_length = config.draft_length;
    options.shape = config.strategy == Strategy::kMixOrder ? TreeShape::MixOrder()
                                                           : TreeShape::Greedy();
    options.topk = config.topk;
    SsdResult result = SsdDecode(model, std::move(state), options);
    report.rounds = std::move(result.rounds);
    report.forward_passes = result.forward_passes;
    report.tokens.assign(result.final_state.generated().begin(),
                         result.final_state.generated().end());
    run.trace = std::move(result.trace);
  }
  const auto baseline = static_cast<double>(report.baseline_forward_passes);
  const auto actual = static_cast<double>(report.forward_passes);
  report.step_reduction = 1.0 - actual / baseline;
  report.estimated_speedup = baseline / actual;
  return run;
}

namespace {

void AppendReportLines(std::string& out, const Report& r) {
  ordered_json config = ConfigObject(r.config);
  ordered_json head;
  head["record"] = "config";
  head.update(config);
  out += head.dump() + "\n";

  ordered_json summary;
  summary["record"] = "summary";
  summary["tokens"] = r.tokens;
  summary["forward_passes"] = r.forward_passes;
  summary["baseline_forward_passes"] = r.baseline_forward_passes;
  summary["rounds"] = r.rounds.size();
  summary["step_reduction"] = r.step_reduction;
  summary["estimated_speedup"] = r.estimated_speedup;
  summary["speedup_basis"] = kSpeedupBasis;
  out += summary.dump() + "\n";

  for (const RoundStats& s : r.rounds) {
    ordered_json round;
    round["record"] = "round";
    round["iteration"] = s.iteration;
    round["batch_size"] = s.batch_size;
    round["accepted"] = s.accepted;
    round["cumulative_forwards"] = s.cumulative_forwards;
    round["fallback"] = s.fallback;
    out += round.dump() + "\n";
  }
}

std::vector<json> SplitRecords(std::string_view text) {
  std::vector<json> records;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    if (!line.empty()) records.push_back(ParseJson(line));
    start = end + 1;
  }
  return records;
}

std::string RecordKind(const json& j) {
  if (!j.is_object() || !j.contains("record")) throw FormatError("record without kind");
  return j.at("record").get<std::string>();
}

// Consumes one report starting at records[i]; advances i past it.
Report ReadReport(const std::vector<json>& records, std::size_t& i) {
  if (i >= records.size() || RecordKind(records[i]) != "config") {
    throw FormatError("report must start with a config record");
  }
  Report r;
  r.config = ConfigFromObject(records[i++], RunConfig{});
  if (i >= records.size() || RecordKind(records[i]) != "summary") {
    throw FormatError("report is missing its summary record");
  }
  const json& summary = records[i++];
  r.tokens = summary.at("tokens").get<std::vector<TokenId>>();
  r.forward_passes = summary.at("forward_passes").get<std::size_t>();
  r.baseline_forward_passes = summary.at("baseline_forward_passes").get<std::size_t>();
  r.step_reduction = summary.at("step_reduction").get<double>();
  r.estimated_speedup = summary.at("estimated_speedup").get<double>();
  const auto rounds = summary.at("rounds").get<std::size_t>();
  for (std::size_t n = 0; n < rounds; ++n, ++i) {
    if (i >= records.size() || RecordKind(records[i]) != "round") {
      throw FormatError("report has fewer round records than announced");
    }
    const json& j = records[i];
    r.rounds.push_back({j.at("iteration").get<std::size_t>(),
                        j.at("batch_size").get<std::size_t>(),
                        j.at("accepted").get<std::size_t>(),
                        j.at("cumulative_forwards").get<std::size_t>(),
                        j.at("fallback").get<bool>()});
  }
  return r;
}

}  // namespace

std::string EmitReport(const Report& report) {
  std::string out;
  AppendReportLines(out, report);
  return out;
}

Report ParseReport(std::string_view text) {
  try {
    const std::vector<json> records = SplitRecords(text);
    std::size_t i = 0;
    Report r = ReadReport(records, i);
    if (i != records.size()) throw FormatError("trailing records after report");
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad report: ") + e.what());
  }
}

CompareReport RunCompare(const RunConfig& baseline, const RunConfig& candidate) {
  ValidateConfig(baseline);
  ValidateConfig(candidate);
  const auto same = [](const RunConfig& a, const RunConfig& b) {
    return std::tie(a.model, a.prompt, a.random_prompt_len, a.gen_length,
                    a.block_length, a.mask_id) ==
           std::tie(b.model, b.prompt, b.random_prompt_len, b.gen_length,
                    b.block_length, b.mask_id);
  };
  if (!same(baseline, candidate)) {
    throw std::invalid_argument(
        "compare needs the same model, prompt, gen_length and block_length in both configs");
  }
  const std::unique_ptr<MaskedModel> model = BuildModel(baseline.model);
  CompareReport out;
  out.baseline = RunDecode(baseline, *model).report;
  out.candidate = RunDecode(candidate, *model).report;
  out.lossless = out.baseline.tokens == out.candidate.tokens;
  if (!out.lossless) {
    std::size_t i = 0;
    while (i < out.baseline.tokens.size() && i < out.candidate.tokens.size() &&
           out.baseline.tokens[i] == out.candidate.tokens[i]) {
      ++i;
    }
    out.first_mismatch = i;
  }
  const auto base = static_cast<double>(out.baseline.forward_passes);
  const auto cand = static_cast<double>(out.candidate.forward_passes);
  out.step_reduction = 1.0 - cand / base;
  out.estimated_speedup = base / cand;
  return out;
}

std::string EmitCompareReport(const CompareReport& report) {
  std::string out;
  AppendReportLines(out, report.baseline);
  AppendReportLines(out, report.candidate);
  ordered_json j;
  j["record"] = "comparison";
  j["baseline_strategy"] = StrategyName(report.baseline.config.strategy);
  j["candidate_strategy"] = StrategyName(report.candidate.config.strategy);
  j["lossless"] = report.lossless;
  j["first_mismatch"] = report.first_mismatch ? ordered_json(*report.first_mismatch)
                                              : ordered_json(nullptr);
  j["step_reduction"] = report.step_reduction;
  j["estimated_speedup"] = report.estimated_speedup;
  j["speedup_basis"] = kSpeedupBasis;
  out += j.dump() + "\n";
  return out;
}

CompareReport ParseCompareReport(std::string_view text) {
  try {
    const std::vector<json> records = SplitRecords(text);
    std::size_t i = 0;
    CompareReport r;
    r.baseline = ReadReport(records, i);
    r.candidate = ReadReport(records, i);
    if (i + 1 != records.size() || RecordKind(records[i]) != "comparison") {
      throw FormatError("compare report must end with one comparison record");
    }
    const json& j = records[i];
    r.lossless = j.at("lossless").get<bool>();
    if (!j.at("first_mismatch").is_null()) {
      r.first_mismatch = j.at("first_mismatch").get<std::size_t>();
    }
    r.step_reduction = j.at("step_reduction").get<double>();
    r.estimated_speedup = j.at("estimated_speedup").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad compare report: ") + e.what());
  }
}

std::vector<SweepRow> RunSweep(const SweepSpec& spec) {
  std::vector<SweepRow> rows;
  for (std::uint64_t seed : spec.seeds) {
    RunConfig base = spec.base;
    base.model.synth.seed = seed;
    base.strategy = Strategy::kStepwise;
    ValidateConfig(base);
    const std::unique_ptr<MaskedModel> model = BuildModel(base.model);
    const Report baseline = RunDecode(base, *model).report;
    for (std::size_t n : spec.draft_lengths) {
      for (Strategy strategy : spec.strategies) {
        RunConfig config = base;
        config.draft_length = n;
        config.strategy = strategy;
        const Report r = strategy == Strategy::kStepwise
                             ? baseline
                             : RunDecode(config, *model).report;
        SweepRow row;
        row.seed = seed;
        row.draft_length = n;
        row.strategy = strategy;
        row.batch_size = strategy == Strategy::kStepwise ? 1
                         : strategy == Strategy::kGreedy ? TreeShape::Greedy().NodeCount(n)
                                                         : TreeShape::MixOrder().NodeCount(n);
        row.forward_passes = r.forward_passes;
        row.baseline_forward_passes = baseline.forward_passes;
        row.step_reduction = 1.0 - static_cast<double>(r.forward_passes) /
                                       static_cast<double>(baseline.forward_passes);
        row.estimated_speedup = static_cast<double>(baseline.forward_passes) /
                                static_cast<double>(r.forward_passes);
        std::size_t tree_rounds = 0;
        std::size_t tree_tokens = 0;
        for (const RoundStats& s : r.rounds) {
          if (s.fallback) continue;
          ++tree_rounds;
          tree_tokens += s.accepted;
        }
        row.mean_accepted = tree_rounds == 0 ? 1.0
                                             : static_cast<double>(tree_tokens) /
                                                   static_cast<double>(tree_rounds);
        row.lossless = r.tokens == baseline.tokens;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string EmitSweep(const std::vector<SweepRow>& rows) {
  std::string out;
  struct Aggregate {
    std::size_t runs = 0;
    std::size_t lossless = 0;
    std::size_t batch_size = 0;
    double reduction_sum = 0.0;
    double speedup_sum = 0.0;
  };
  std::map<std::pair<std::size_t, std::string>, Aggregate> groups;
  for (const SweepRow& r : rows) {
    ordered_json j;
    j["record"] = "sweep_run";
    j["seed"] = r.seed;
    j["draft_length"] = r.draft_length;
    j["strategy"] = StrategyName(r.strategy);
    j["batch_size"] = r.batch_size;
    j["forward_passes"] = r.forward_passes;
    j["baseline_forward_passes"] = r.baseline_forward_passes;
    j["step_reduction"] = r.step_reduction;
    j["estimated_speedup"] = r.estimated_speedup;
    j["mean_accepted"] = r.mean_accepted;
    j["lossless"] = r.lossless;
    out += j.dump() + "\n";
    Aggregate& a = groups[{r.draft_length, StrategyName(r.strategy)}];
    ++a.runs;
    a.lossless += r.lossless ? 1 : 0;
    a.batch_size = r.batch_size;
    a.reduction_sum += r.step_reduction;
    a.speedup_sum += r.estimated_speedup;
  }
  for (const auto& [key, a] : groups) {
    ordered_json j;
    j["record"] = "sweep_summary";
    j["draft_length"] = key.first;
    j["strategy"] = key.second;
    j["runs"] = a.runs;
    j["lossless_runs"] = a.lossless;
    j["batch_size"] = a.batch_size;
    j["mean_step_reduction"] = a.reduction_sum / static_cast<double>(a.runs);
    j["mean_estimated_speedup"] = a.speedup_sum / static_cast<double>(a.runs);
    j["upper_bound"] = static_cast<double>(key.first) / static_cast<double>(key.first + 1);
    out += j.dump() + "\n";
  }
  return out;
}

std::string EmitAnalysis(const ReductionTable& table) {
  ordered_json head;
  head["record"] = "analysis";
  head["draft_lengths"] = table.draft_lengths;
  head["ks"] = table.ks;
  std::string out = head.dump() + "\n";
  for (std::size_t r = 0; r < table.draft_lengths.size(); ++r) {
    ordered_json row;
    row["record"] = "row";
    row["draft_length"] = table.draft_lengths[r];
    row["reductions"] = table.cells[r];
    row["upper_bound"] = table.upper_bounds[r];
    out += row.dump() + "\n";
  }
  return out;
}

}  // namespace ssd
