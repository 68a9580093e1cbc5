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

#ifndef SSD_SSD_H_
#define SSD_SSD_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssd/model.h"
#include "ssd/sequence.h"
#include "ssd/stepwise.h"
#include "ssd/trace.h"

namespace ssd {

// Self speculative decoding: the model drafts every masked position from one
// forward, a verification tree of hypothetical states is scored in one batch
// forward, and the path on which each parent's stepwise choice matches its
// child's draft is accepted. Every accepted token is a stepwise choice made on
// the exact state stepwise decoding would be in, so the output is identical to
// StepwiseDecode.

struct Draft {
  TokenId token = 0;
  double confidence = 0.0;
  // Top tokens at this position, descending; alternatives[0] == token.
  std::vector<TokenId> alternatives;

  friend bool operator==(const Draft&, const Draft&) = default;
};

// Draft token and confidence for each masked position of one state.
class DraftSet {
 public:
  void Set(Position pos, Draft draft) { drafts_.insert_or_assign(pos, std::move(draft)); }
  const Draft* Find(Position pos) const;
  const Draft& at(Position pos) const;
  std::size_t size() const { return drafts_.size(); }
  std::vector<Position> Domain() const;

  auto begin() const { return drafts_.begin(); }
  auto end() const { return drafts_.end(); }

  friend bool operator==(const DraftSet&, const DraftSet&) = default;

 private:
  std::map<Position, Draft> drafts_;
};

// Drafts for the masked positions of `state` read from `logits`, which may
// come from a different (ancestor) state of the same length. `alternatives`
// top tokens are kept per position for k-ary trees.
DraftSet DraftFromLogits(const SequenceState& state, const SequenceLogits& logits,
                         std::size_t alternatives = 1);

// One forward pass. Throws InvalidStateError when nothing is masked.
DraftSet SelfDraft(const MaskedModel& model, const SequenceState& state,
                   std::size_t alternatives = 1);

struct Candidate {
  Position pos = 0;
  TokenId token = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

using CandidateList = std::vector<Candidate>;

// Up to n masked positions of the current block by descending draft
// confidence (lowest position on ties); if the block has fewer than n, the
// rest comes from the next block by the same rule.
CandidateList SelectCandidates(const SequenceState& state, const DraftSet& drafts,
                               std::size_t n);

struct TreeShape {
  enum class Kind { kGreedy, kMixOrder, kKary };

  Kind kind = Kind::kGreedy;
  std::size_t k = 1;  // branching factor, k-ary only

  static TreeShape Greedy() { return {Kind::kGreedy, 1}; }
  static TreeShape MixOrder() { return {Kind::kMixOrder, 1}; }
  static TreeShape Kary(std::size_t k) { return {Kind::kKary, k}; }

  // Top tokens each draft must carry for this shape.
  std::size_t alternatives() const { return kind == Kind::kKary ? k : 1; }
  // Node count for draft length n: N+1, 2N, or sum_{i<=N} k^i.
  std::size_t NodeCount(std::size_t n) const;

  std::string name() const;
  // "greedy", "mix_order", "kary:<k>".
  static TreeShape Parse(std::string_view name);

  friend bool operator==(const TreeShape&, const TreeShape&) = default;
};

struct TreeNode {
  SequenceState state;
  std::optional<std::size_t> parent;
  // The stepwise choice the parent must make for this node to be valid.
  std::optional<Candidate> expectation;
  // Grandchild-skip node of a mix-order tree. Always a leaf.
  bool branch = false;
  std::size_t depth = 0;
  std::vector<std::size_t> children;
};

class VerificationTree {
 public:
  VerificationTree(TreeShape shape, std::vector<TreeNode> nodes)
      : shape_(shape), nodes_(std::move(nodes)) {}

  TreeShape shape() const { return shape_; }
  std::size_t size() const { return nodes_.size(); }
  const TreeNode& node(std::size_t i) const { return nodes_[i]; }
  const TreeNode& root() const { return nodes_.front(); }
  std::span<const TreeNode> nodes() const { return nodes_; }

  // Node states in batch order.
  std::vector<SequenceState> States() const;

 private:
  TreeShape shape_;
  std::vector<TreeNode> nodes_;
};

// Greedy: chain root -> c1 -> c1c2 -> ... (N+1 nodes).
// Mix-order: the chain plus, for each chain node at depth d <= N-2, a leaf that
// places candidate d+2 with candidate d+1 left masked (2N nodes).
// K-ary: every node at depth d < N has one child per top-k draft token at
// candidate d+1's position (sum_{i<=N} k^i nodes).
// Throws std::invalid_argument for an empty candidate list, or for a k-ary
// shape whose drafts carry fewer than k alternatives.
VerificationTree BuildTree(const SequenceState& base, const CandidateList& candidates,
                           const DraftSet& drafts, TreeShape shape);

struct VerifyOutcome {
  // Accepted tokens in stepwise order: the placed candidates along the
  // validated path, then the deepest node's own stepwise choice.
  std::vector<StepChoice> accepted;
  // Same tokens as trace records (candidates filled when topk > 0).
  std::vector<StepRecord> steps;
  std::size_t deepest_node = 0;
  // Logits of the deepest validated node; they seed the next drafts.
  SequenceLogits deepest_logits;
  SequenceState final_state;
};

// Scores every node in one batch forward and walks the validated path.
VerifyOutcome BatchVerify(const MaskedModel& model, const VerificationTree& tree,
                          std::size_t topk = 0);

struct RoundStats {
  std::size_t iteration = 0;
  std::size_t batch_size = 0;
  std::size_t accepted = 0;
  std::size_t cumulative_forwards = 0;
  // Stepwise step taken because fewer than N candidates remained.
  bool fallback = false;

  friend bool operator==(const RoundStats&, const RoundStats&) = default;
};

struct SsdOptions {
  std::size_t draft_length = 3;
  TreeShape shape = TreeShape::Greedy();
  std::size_t topk = kDefaultTopK;
};

struct SsdResult {
  SequenceState final_state;
  std::vector<RoundStats> rounds;
  DecodeTrace trace;
  // Initial draft + one per verification round + one per fallback step.
  std::size_t forward_passes = 0;
};

SsdResult SsdDecode(const MaskedModel& model, SequenceState state,
                    const SsdOptions& options);

}  // namespace ssd

#endif  // SSD_SSD_H_
