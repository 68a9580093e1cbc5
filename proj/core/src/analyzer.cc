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
#include <cstdio>
#include <stdexcept>

namespace ssd {
namespace {

bool InTopK(const StepRecord& window_start, Position pos, TokenId token, std::size_t k) {
  const auto& cands = window_start.candidates;
  const auto it = std::lower_bound(
      cands.begin(), cands.end(), pos,
      [](const PositionCandidates& pc, Position p) { return pc.pos < p; });
  if (it == cands.end() || it->pos != pos) return false;
  const std::size_t limit = std::min(k, it->top.size());
  for (std::size_t i = 0; i < limit; ++i) {
    if (it->top[i].token == token) return true;
  }
  return false;
}

}  // namespace

double TopkMatchReduction(const DecodeTrace& trace, std::size_t n, std::size_t k) {
  if (n == 0) throw std::invalid_argument("draft length must be >= 1");
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  if (k > trace.topk) {
    throw std::invalid_argument("k=" + std::to_string(k) + " exceeds the " +
                                std::to_string(trace.topk) +
                                " candidates recorded in the trace");
  }
  const std::size_t total = trace.steps.size();
  if (total == 0) return 0.0;
  std::size_t saved = 0;
  for (std::size_t start = 0; start < total; start += n + 1) {
    const std::size_t stop = std::min(start + n + 1, total);
    std::size_t matched = 0;
    for (std::size_t s = start; s < stop; ++s) {
      if (InTopK(trace.steps[start], trace.steps[s].pos, trace.steps[s].token, k)) {
        ++matched;
      }
    }
    if (matched > 0) saved += matched - 1;
  }
  return static_cast<double>(saved) / static_cast<double>(total);
}

double UpperBound(std::size_t n) {
  if (n == 0) throw std::invalid_argument("draft length must be >= 1");
  return static_cast<double>(n) / static_cast<double>(n + 1);
}

std::uint64_t KaryTreeSize(std::uint64_t k, std::uint64_t n) {
  std::uint64_t total = 0;
  std::uint64_t level = 1;
  for (std::uint64_t i = 0; i <= n; ++i) {
    total += level;
    level *= k;
  }
  return total;
}

ReductionTable AnalyzeTrace(const DecodeTrace& trace,
                            std::span<const std::size_t> draft_lengths,
                            std::span<const std::size_t> ks) {
  ReductionTable table;
  table.draft_lengths.assign(draft_lengths.begin(), draft_lengths.end());
  table.ks.assign(ks.begin(), ks.end());
  for (std::size_t n : draft_lengths) {
    std::vector<double> row;
    row.reserve(ks.size());
    for (std::size_t k : ks) row.push_back(TopkMatchReduction(trace, n, k));
    table.cells.push_back(std::move(row));
    table.upper_bounds.push_back(UpperBound(n));
  }
  return table;
}

std::string FormatReductionTable(const ReductionTable& table) {
  auto percent = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f%%", 100.0 * v);
    return std::string(buf);
  };
  auto pad = [](std::string s, std::size_t width) {
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
  };
  std::string out = pad("Draft Length", 12);
  for (std::size_t k : table.ks) out += " |" + pad("k=" + std::to_string(k), 8);
  out += " |" + pad("Upper Bound", 12) + "\n";
  for (std::size_t r = 0; r < table.draft_lengths.size(); ++r) {
    out += pad(std::to_string(table.draft_lengths[r]), 12);
    for (double v : table.cells[r]) out += " |" + pad(percent(v), 8);
    out += " |" + pad(percent(table.upper_bounds[r]), 12) + "\n";
  }
  return out;
}

}  // namespace ssd
