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

#ifndef SSD_ANALYZER_H_
#define SSD_ANALYZER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ssd/trace.h"

namespace ssd {

// Idealized forward-pass reduction of a stepwise trace. The trace is cut into
// consecutive windows of n+1 steps; a step counts as matched when its token is
// among the top-k candidates recorded at its position at the window's first
// step. Each window saves (matched - 1) forwards, floored at zero, and the
// result is total saved / total steps.
//
// Throws std::invalid_argument when n == 0, k == 0, or k exceeds the number of
// candidates the trace recorded.
double TopkMatchReduction(const DecodeTrace& trace, std::size_t n, std::size_t k);

// n / (n + 1). Throws std::invalid_argument when n == 0.
double UpperBound(std::size_t n);

// sum_{i=0..n} k^i, the node count of a complete k-ary verification tree.
std::uint64_t KaryTreeSize(std::uint64_t k, std::uint64_t n);

struct ReductionTable {
  std::vector<std::size_t> draft_lengths;
  std::vector<std::size_t> ks;
  // cells[row][col] for draft_lengths[row], ks[col].
  std::vector<std::vector<double>> cells;
  std::vector<double> upper_bounds;

  friend bool operator==(const ReductionTable&, const ReductionTable&) = default;
};

ReductionTable AnalyzeTrace(const DecodeTrace& trace,
                            std::span<const std::size_t> draft_lengths,
                            std::span<const std::size_t> ks);

// Percent grid: one row per draft length, one column per k, then the bound.
std::string FormatReductionTable(const ReductionTable& table);

}  // namespace ssd

#endif  // SSD_ANALYZER_H_
