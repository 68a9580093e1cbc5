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

// ssdecode: run stepwise and self speculative decodes, compare them, and
// analyze recorded traces.
//
//   ssdecode decode  --gen-length 256 --block-length 8 --draft-length 3 --strategy greedy
//   ssdecode compare --strategy mix_order --seed 7
//   ssdecode analyze --trace run.trace --draft-lengths 3,4,5 --ks 1,2,3,4,5
//   ssdecode sweep   --seeds 1-20 --draft-lengths 3,4,5 --strategies greedy,mix_order
//
// Exit codes: 0 success, 1 usage or input error, 2 losslessness violation.

#include <charconv>
#include <functional>
#include <utility>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssd/analyzer.h"
#include "ssd/errors.h"
#include "ssd/report.h"
#include "ssd/trace.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitLossless = 2;

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

template <typename T>
T ParseNumber(const std::string& field) {
  T value{};
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size()) {
    throw std::invalid_argument("bad number '" + field + "'");
  }
  return value;
}

template <typename T>
std::vector<T> ParseNumberList(const std::string& text) {
  std::vector<T> out;
  for (const std::string& field : SplitList(text)) out.push_back(ParseNumber<T>(field));
  return out;
}

// "1-5,9" -> 1 2 3 4 5 9
std::vector<std::uint64_t> ParseSeedList(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const std::string& field : SplitList(text)) {
    const std::size_t dash = field.find('-');
    if (dash == std::string::npos) {
      out.push_back(ParseNumber<std::uint64_t>(field));
      continue;
    }
    const auto lo = ParseNumber<std::uint64_t>(field.substr(0, dash));
    const auto hi = ParseNumber<std::uint64_t>(field.substr(dash + 1));
    if (hi < lo) throw std::invalid_argument("empty seed range '" + field + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
  }
  return out;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteOutput(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
}

// Flags shared by decode, compare and sweep. Values are applied on top of the
// config file only when given explicitly.
struct ConfigFlags {
  std::string config_file;
  std::string model;
  std::string table_fixture;
  std::uint64_t seed = 0;
  std::size_t vocab_size = 0;
  double sharpness = 0.0;
  std::size_t context_window = 0;
  std::string prompt;
  std::string prompt_file;
  std::size_t random_prompt_len = 0;
  std::size_t gen_length = 0;
  std::size_t block_length = 0;
  std::size_t draft_length = 0;
  std::string strategy;
  std::size_t topk = 0;
  ssd::TokenId mask_id = 0;

  std::vector<std::pair<CLI::Option*, std::function<void(ssd::RunConfig&)>>> setters;

  template <typename T>
  void Add(CLI::App* app, const std::string& name, T& target, const std::string& help,
           std::function<void(ssd::RunConfig&)> apply) {
    setters.emplace_back(app->add_option(name, target, help), std::move(apply));
  }

  void Register(CLI::App* app) {
    app->add_option("--config", config_file, "JSON run config; explicit flags override it")
        ->check(CLI::ExistingFile);
    Add(app, "--model", model, "Model backend: synthetic or table",
        [this](ssd::RunConfig& c) {
          if (model == "synthetic") {
            c.model.backend = ssd::ModelSpec::Backend::kSynthetic;
          } else if (model == "table") {
            c.model.backend = ssd::ModelSpec::Backend::kTable;
          } else {
            throw std::invalid_argument("unknown model backend '" + model + "'");
          }
        });
    Add(app, "--table-fixture", table_fixture, "Table-model fixture file",
        [this](ssd::RunConfig& c) { c.model.table_fixture = table_fixture; });
    Add(app, "--seed", seed, "Synthetic model seed (also seeds --random-prompt-len)",
        [this](ssd::RunConfig& c) { c.model.synth.seed = seed; });
    Add(app, "--vocab-size", vocab_size, "Synthetic model vocabulary size",
        [this](ssd::RunConfig& c) { c.model.synth.vocab_size = vocab_size; });
    Add(app, "--sharpness", sharpness, "Synthetic model logit scale",
        [this](ssd::RunConfig& c) { c.model.synth.sharpness = sharpness; });
    Add(app, "--context-window", context_window, "Synthetic model context radius",
        [this](ssd::RunConfig& c) { c.model.synth.context_window = context_window; });
    Add(app, "--prompt", prompt, "Inline prompt token ids, e.g. 1,2,3",
        [this](ssd::RunConfig& c) { c.prompt = ParseNumberList<ssd::TokenId>(prompt); });
    Add(app, "--prompt-file", prompt_file, "File of prompt token ids",
        [this](ssd::RunConfig& c) {
          c.prompt = ParseNumberList<ssd::TokenId>(ReadFile(prompt_file));
        });
    Add(app, "--random-prompt-len", random_prompt_len, "Append seeded random prompt tokens",
        [this](ssd::RunConfig& c) { c.random_prompt_len = random_prompt_len; });
    Add(app, "--gen-length", gen_length, "Tokens to generate (L)",
        [this](ssd::RunConfig& c) { c.gen_length = gen_length; });
    Add(app, "--block-length", block_length, "Semi-autoregressive block size (B)",
        [this](ssd::RunConfig& c) { c.block_length = block_length; });
    Add(app, "--draft-length", draft_length, "Candidates verified per round (N)",
        [this](ssd::RunConfig& c) { c.draft_length = draft_length; });
    Add(app, "--strategy", strategy, "stepwise, greedy or mix_order",
        [this](ssd::RunConfig& c) { c.strategy = ssd::ParseStrategy(strategy); });
    Add(app, "--topk", topk, "Candidates recorded per masked position in traces",
        [this](ssd::RunConfig& c) { c.topk = topk; });
    Add(app, "--mask-id", mask_id, "Mask token id (default: vocabulary size)",
        [this](ssd::RunConfig& c) { c.mask_id = mask_id; });
  }

  ssd::RunConfig Resolve() const {
    ssd::RunConfig config;
    if (!config_file.empty()) config = ssd::RunConfigFromJson(ReadFile(config_file));
    for (const auto& [option, apply] : setters) {
      if (option->count() > 0) apply(config);
    }
    ssd::ValidateConfig(config);
    return config;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stepwise and self speculative decoding for masked diffusion models"};
  app.require_subcommand(1);

  CLI::App* decode = app.add_subcommand("decode", "Run one decode and emit its report");
  ConfigFlags decode_flags;
  decode_flags.Register(decode);
  std::string decode_out;
  std::string trace_out;
  decode->add_option("--out", decode_out, "Report path (default stdout)");
  decode->add_option("--trace-out", trace_out, "Write the decode trace here");

  CLI::App* compare =
      app.add_subcommand("compare", "Run a baseline and a candidate and check they agree");
  ConfigFlags compare_flags;
  compare_flags.Register(compare);
  std::string baseline_config;
  std::string baseline_strategy = "stepwise";
  std::string compare_out;
  compare->add_option("--baseline-config", baseline_config,
                      "Baseline run config (default: candidate config)")
      ->check(CLI::ExistingFile);
  compare->add_option("--baseline-strategy", baseline_strategy,
                      "Strategy for the baseline run")
      ->capture_default_str();
  compare->add_option("--out", compare_out, "Report path (default stdout)");

  CLI::App* analyze =
      app.add_subcommand("analyze", "Top-k acceptance-limit analysis of a stepwise trace");
  std::string trace_path;
  std::string draft_lengths_text = "3,4,5";
  std::string ks_text = "1,2,3,4,5";
  std::string analyze_format = "table";
  std::string analyze_out;
  analyze->add_option("--trace", trace_path, "Trace written by decode --trace-out")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--draft-lengths", draft_lengths_text, "Draft lengths N")->capture_default_str();
  analyze->add_option("--ks", ks_text, "Top-k values")->capture_default_str();
  analyze->add_option("--format", analyze_format, "table or jsonl")
      ->capture_default_str()
      ->check(CLI::IsMember({"table", "jsonl"}));
  analyze->add_option("--out", analyze_out, "Output path (default stdout)");

  CLI::App* sweep =
      app.add_subcommand("sweep", "Grid of seeds x draft lengths x strategies vs stepwise");
  ConfigFlags sweep_flags;
  sweep_flags.Register(sweep);
  std::string seeds_text = "1-10";
  std::string sweep_draft_lengths = "3,4,5";
  std::string strategies_text = "greedy,mix_order";
  std::string sweep_out;
  sweep->add_option("--seeds", seeds_text, "Seeds, e.g. 1-10 or 3,5,8")->capture_default_str();
  sweep->add_option("--draft-lengths", sweep_draft_lengths, "Draft lengths N")->capture_default_str();
  sweep->add_option("--strategies", strategies_text, "Strategies to run")->capture_default_str();
  sweep->add_option("--out", sweep_out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (decode->parsed()) {
      const ssd::RunConfig config = decode_flags.Resolve();
      const ssd::DecodeRun run = ssd::RunDecode(config);
      if (!trace_out.empty()) WriteOutput(trace_out, ssd::TraceToString(run.trace));
      WriteOutput(decode_out, ssd::EmitReport(run.report));
      return kExitOk;
    }
    if (compare->parsed()) {
      const ssd::RunConfig candidate = compare_flags.Resolve();
      ssd::RunConfig baseline = candidate;
      if (!baseline_config.empty()) {
        baseline = ssd::RunConfigFromJson(ReadFile(baseline_config));
      } else {
        baseline.strategy = ssd::ParseStrategy(baseline_strategy);
      }
      const ssd::CompareReport report = ssd::RunCompare(baseline, candidate);
      WriteOutput(compare_out, ssd::EmitCompareReport(report));
      if (!report.lossless) {
        std::cerr << "losslessness violation: outputs differ at generated position "
                  << *report.first_mismatch << "\n";
        return kExitLossless;
      }
      return kExitOk;
    }
    if (analyze->parsed()) {
      std::ifstream in(trace_path);
      const ssd::DecodeTrace trace = ssd::ReadTrace(in);
      const auto ns = ParseNumberList<std::size_t>(draft_lengths_text);
      const auto ks = ParseNumberList<std::size_t>(ks_text);
      const ssd::ReductionTable table = ssd::AnalyzeTrace(trace, ns, ks);
      WriteOutput(analyze_out, analyze_format == "jsonl" ? ssd::EmitAnalysis(table)
                                                         : ssd::FormatReductionTable(table));
      return kExitOk;
    }
    if (sweep->parsed()) {
      ssd::SweepSpec spec;
      spec.base = sweep_flags.Resolve();
      spec.seeds = ParseSeedList(seeds_text);
      spec.draft_lengths = ParseNumberList<std::size_t>(sweep_draft_lengths);
      for (const std::string& name : SplitList(strategies_text)) {
        spec.strategies.push_back(ssd::ParseStrategy(name));
      }
      const std::vector<ssd::SweepRow> rows = ssd::RunSweep(spec);
      WriteOutput(sweep_out, ssd::EmitSweep(rows));
      for (const ssd::SweepRow& row : rows) {
        if (!row.lossless) {
          std::cerr << "losslessness violation: seed " << row.seed << ", "
                    << ssd::StrategyName(row.strategy) << ", N=" << row.draft_length << "\n";
          return kExitLossless;
        }
      }
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
