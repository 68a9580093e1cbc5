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

#include "ssd/trace.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ssd/errors.h"

namespace ssd {

using nlohmann::json;
using nlohmann::ordered_json;

DecodeTrace MakeTrace(const SequenceState& initial, std::size_t vocab_size,
                      std::size_t topk) {
  DecodeTrace trace;
  trace.prompt_len = initial.prompt_len();
  trace.gen_len = initial.gen_len();
  trace.block_len = initial.block_len();
  trace.mask_id = initial.mask_id();
  trace.vocab_size = vocab_size;
  trace.topk = std::min(topk, vocab_size);
  trace.steps.reserve(initial.num_masked());
  return trace;
}

std::optional<std::string> FindBlockOrderViolation(const DecodeTrace& trace) {
  std::vector<bool> filled(trace.gen_len, false);
  std::size_t first_open = 0;
  for (std::size_t s = 0; s < trace.steps.size(); ++s) {
    const Position pos = trace.steps[s].pos;
    const std::string where = "step " + std::to_string(s) + " (position " +
                              std::to_string(pos) + ")";
    if (pos < trace.prompt_len || pos >= trace.prompt_len + trace.gen_len) {
      return where + " is outside the generation region";
    }
    const std::size_t offset = pos - trace.prompt_len;
    if (filled[offset]) return where + " was already decoded";
    const std::size_t current = first_open / trace.block_len;
    if (offset / trace.block_len != current) {
      return where + " is in block " + std::to_string(offset / trace.block_len) +
             " while block " + std::to_string(current) + " still has masks";
    }
    filled[offset] = true;
    while (first_open < trace.gen_len && filled[first_open]) ++first_open;
  }
  return std::nullopt;
}

void WriteTrace(std::ostream& out, const DecodeTrace& trace) {
  ordered_json header;
  header["record"] = "trace";
  header["prompt_len"] = trace.prompt_len;
  header["gen_len"] = trace.gen_len;
  header["block_len"] = trace.block_len;
  header["mask_id"] = trace.mask_id;
  header["vocab_size"] = trace.vocab_size;
  header["topk"] = trace.topk;
  header["steps"] = trace.steps.size();
  out << header.dump() << '\n';
  for (const StepRecord& step : trace.steps) {
    ordered_json j;
    j["record"] = "step";
    j["pos"] = step.pos;
    j["token"] = step.token;
    j["confidence"] = step.confidence;
    ordered_json cands = ordered_json::array();
    for (const PositionCandidates& pc : step.candidates) {
      ordered_json top = ordered_json::array();
      for (const TokenProb& tp : pc.top) top.push_back({tp.token, tp.prob});
      cands.push_back({pc.pos, std::move(top)});
    }
    j["candidates"] = std::move(cands);
    out << j.dump() << '\n';
  }
}

std::string TraceToString(const DecodeTrace& trace) {
  std::ostringstream out;
  WriteTrace(out, trace);
  return out.str();
}

DecodeTrace ReadTrace(std::istream& in) {
  DecodeTrace trace;
  std::string line;
  bool have_header = false;
  std::size_t expected_steps = 0;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      const std::string kind = j.at("record").get<std::string>();
      if (kind == "trace") {
        if (have_header) throw FormatError("duplicate trace header");
        trace.prompt_len = j.at("prompt_len").get<std::size_t>();
        trace.gen_len = j.at("gen_len").get<std::size_t>();
        trace.block_len = j.at("block_len").get<std::size_t>();
        trace.mask_id = j.at("mask_id").get<TokenId>();
        trace.vocab_size = j.at("vocab_size").get<std::size_t>();
        trace.topk = j.at("topk").get<std::size_t>();
        expected_steps = j.at("steps").get<std::size_t>();
        have_header = true;
      } else if (kind == "step") {
        if (!have_header) throw FormatError("trace step before header");
        StepRecord step;
        step.pos = j.at("pos").get<Position>();
        step.token = j.at("token").get<TokenId>();
        step.confidence = j.at("confidence").get<double>();
        for (const json& pc : j.at("candidates")) {
          PositionCandidates cands;
          cands.pos = pc.at(0).get<Position>();
          for (const json& tp : pc.at(1)) {
            cands.top.push_back({tp.at(0).get<TokenId>(), tp.at(1).get<double>()});
          }
          step.candidates.push_back(std::move(cands));
        }
        trace.steps.push_back(std::move(step));
      } else {
        throw FormatError("unknown trace record '" + kind + "'");
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad trace: ") + e.what());
  }
  if (!have_header) throw FormatError("trace has no header");
  if (trace.steps.size() != expected_steps) {
    throw FormatError("trace is truncated: expected " + std::to_string(expected_steps) +
                      " steps, found " + std::to_string(trace.steps.size()));
  }
  return trace;
}

DecodeTrace ParseTrace(const std::string& text) {
  std::istringstream in(text);
  return ReadTrace(in);
}

}  // namespace ssd
