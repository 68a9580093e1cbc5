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

#include "ssd/ssd.h"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <utility>

#include "ssd/errors.h"

namespace ssd {

const Draft* DraftSet::Find(Position pos) const {
  const auto it = drafts_.find(pos);
  return it == drafts_.end() ? nullptr : &it->second;
}

const Draft& DraftSet::at(Position pos) const {
  const Draft* d = Find(pos);
  if (d == nullptr) {
    throw std::invalid_argument("no draft for position " + std::to_string(pos));
  }
  return *d;
}

std::vector<Position> DraftSet::Domain() const {
  std::vector<Position> out;
  out.reserve(drafts_.size());
  for (const auto& [pos, draft] : drafts_) out.push_back(pos);
  return out;
}

DraftSet DraftFromLogits(const SequenceState& state, const SequenceLogits& logits,
                         std::size_t alternatives) {
  if (logits.positions() != state.size()) {
    throw std::invalid_argument("logits do not match sequence length");
  }
  DraftSet drafts;
  for (Position pos : state.MaskedPositions()) {
    const Prediction p = PredictWithConfidence(logits.row(pos));
    Draft draft{p.token, p.confidence, {p.token}};
    if (alternatives > 1) {
      draft.alternatives.clear();
      for (const TokenProb& tp : TopK(logits.row(pos), alternatives)) {
        draft.alternatives.push_back(tp.token);
      }
    }
    drafts.Set(pos, std::move(draft));
  }
  return drafts;
}

DraftSet SelfDraft(const MaskedModel& model, const SequenceState& state,
                   std::size_t alternatives) {
  if (state.complete()) throw InvalidStateError("cannot draft a complete sequence");
  return DraftFromLogits(state, model.ForwardOne(state), alternatives);
}

namespace {

// Masked positions of block j ordered by descending confidence.
std::vector<Position> RankBlock(const SequenceState& state, const DraftSet& drafts,
                                std::size_t j) {
  const BlockRange& range = state.schedule()[j];
  std::vector<Position> ranked;
  for (Position pos = range.begin; pos < range.end; ++pos) {
    if (state.is_masked(pos)) ranked.push_back(pos);
  }
  std::stable_sort(ranked.begin(), ranked.end(), [&](Position a, Position b) {
    return drafts.at(a).confidence > drafts.at(b).confidence;
  });
  return ranked;
}

}  // namespace

CandidateList SelectCandidates(const SequenceState& state, const DraftSet& drafts,
                               std::size_t n) {
  CandidateList out;
  const std::optional<std::size_t> current = CurrentBlock(state);
  if (!current || n == 0) return out;
  for (std::size_t j = *current; j <= *current + 1 && j < state.schedule().size(); ++j) {
    for (Position pos : RankBlock(state, drafts, j)) {
      if (out.size() == n) return out;
      out.push_back({pos, drafts.at(pos).token});
    }
  }
  return out;
}

std::size_t TreeShape::NodeCount(std::size_t n) const {
  switch (kind) {
    case Kind::kGreedy:
      return n + 1;
    case Kind::kMixOrder:
      return n == 0 ? 1 : 2 * n;
    case Kind::kKary: {
      std::size_t total = 0;
      std::size_t level = 1;
      for (std::size_t i = 0; i <= n; ++i) {
        total += level;
        level *= k;
      }
      return total;
    }
  }
  return 0;
}

std::string TreeShape::name() const {
  switch (kind) {
    case Kind::kGreedy:
      return "greedy";
    case Kind::kMixOrder:
      return "mix_order";
    case Kind::kKary:
      return "kary:" + std::to_string(k);
  }
  return "unknown";
}

TreeShape TreeShape::Parse(std::string_view name) {
  if (name == "greedy") return Greedy();
  if (name == "mix_order") return MixOrder();
  if (name.starts_with("kary:")) {
    const std::string digits(name.substr(5));
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](unsigned char ch) { return std::isdigit(ch) != 0; })) {
      const std::size_t k = std::stoul(digits);
      if (k >= 1) return Kary(k);
    }
  }
  throw std::invalid_argument("unknown tree shape '" + std::string(name) + "'");
}

std::vector<SequenceState> VerificationTree::States() const {
  std::vector<SequenceState> states;
  states.reserve(nodes_.size());
  for (const TreeNode& node : nodes_) states.push_back(node.state);
  return states;
}

namespace {

std::size_t AddChild(std::vector<TreeNode>& nodes, std::size_t parent,
                     Candidate expectation, bool branch) {
  TreeNode child{PlaceToken(nodes[parent].state, expectation.pos, expectation.token),
                 parent, expectation, branch, nodes[parent].depth + 1, {}};
  nodes.push_back(std::move(child));
  const std::size_t index = nodes.size() - 1;
  nodes[parent].children.push_back(index);
  return index;
}

}  // namespace

VerificationTree BuildTree(const SequenceState& base, const CandidateList& candidates,
                           const DraftSet& drafts, TreeShape shape) {
  const std::size_t n = candidates.size();
  if (n == 0) throw std::invalid_argument("verification tree needs >= 1 candidate");
  std::vector<TreeNode> nodes;
  nodes.reserve(shape.NodeCount(n));
  nodes.push_back(TreeNode{base, std::nullopt, std::nullopt, false, 0, {}});

  if (shape.kind == TreeShape::Kind::kKary) {
    if (shape.k == 0) throw std::invalid_argument("k-ary tree needs k >= 1");
    for (const Candidate& c : candidates) {
      if (drafts.at(c.pos).alternatives.size() < shape.k) {
        throw std::invalid_argument("draft at position " + std::to_string(c.pos) +
                                    " has fewer than k alternatives");
      }
    }
    // Level-order expansion: every node at depth d branches over the top-k
    // tokens of candidate d.
    std::size_t level_begin = 0;
    for (std::size_t d = 0; d < n; ++d) {
      const std::size_t level_end = nodes.size();
      const Draft& draft = drafts.at(candidates[d].pos);
      for (std::size_t parent = level_begin; parent < level_end; ++parent) {
        for (std::size_t a = 0; a < shape.k; ++a) {
          AddChild(nodes, parent, {candidates[d].pos, draft.alternatives[a]}, false);
        }
      }
      level_begin = level_end;
    }
    return VerificationTree(shape, std::move(nodes));
  }

  std::vector<std::size_t> chain{0};
  for (std::size_t d = 0; d < n; ++d) {
    chain.push_back(AddChild(nodes, chain.back(), candidates[d], false));
  }
  if (shape.kind == TreeShape::Kind::kMixOrder) {
    // Chain node d (candidates 1..d placed) also tries candidate d+2 directly.
    for (std::size_t d = 0; d + 2 <= n; ++d) {
      AddChild(nodes, chain[d], candidates[d + 1], true);
    }
  }
  return VerificationTree(shape, std::move(nodes));
}

VerifyOutcome BatchVerify(const MaskedModel& model, const VerificationTree& tree,
                          std::size_t topk) {
  const std::vector<SequenceState> states = tree.States();
  LogitsBatch logits = model.Forward(states);

  VerifyOutcome outcome;
  std::size_t current = 0;
  while (true) {
    const TreeNode& node = tree.node(current);
    const std::optional<StepChoice> choice = StepwiseChoice(node.state, logits[current]);
    if (!choice) break;
    outcome.accepted.push_back(*choice);
    outcome.steps.push_back(MakeStepRecord(node.state, logits[current], *choice, topk));
    std::optional<std::size_t> next;
    for (std::size_t child : node.children) {
      const Candidate& expected = *tree.node(child).expectation;
      if (expected.pos == choice->pos && expected.token == choice->token) {
        next = child;
        break;
      }
    }
    if (!next) break;
    current = *next;
  }

  outcome.deepest_node = current;
  outcome.final_state = tree.node(current).state;
  if (outcome.accepted.size() > tree.node(current).depth) {
    const StepChoice& last = outcome.accepted.back();
    outcome.final_state.Place(last.pos, last.token);
  }
  outcome.deepest_logits = std::move(logits[current]);
  return outcome;
}

SsdResult SsdDecode(const MaskedModel& model, SequenceState state,
                    const SsdOptions& options) {
  const std::size_t n = options.draft_length;
  if (n == 0) throw std::invalid_argument("draft_length must be >= 1");
  if (state.complete()) throw InvalidStateError("nothing to decode");

  SsdResult result{state, {}, MakeTrace(state, model.vocab_size(), options.topk), 0};
  const std::size_t alternatives = options.shape.alternatives();
  DraftSet drafts = SelfDraft(model, state, alternatives);
  result.forward_passes = 1;

  std::size_t iteration = 0;
  while (!state.complete()) {
    const CandidateList candidates = SelectCandidates(state, drafts, n);
    if (candidates.size() < n) {
      // Too few positions left to fill a tree: finish one token per forward.
      while (!state.complete()) {
        result.trace.steps.push_back(StepwiseStep(model, state, options.topk));
        ++result.forward_passes;
        result.rounds.push_back({iteration++, 1, 1, result.forward_passes, true});
      }
      break;
    }
    const VerificationTree tree = BuildTree(state, candidates, drafts, options.shape);
    VerifyOutcome outcome = BatchVerify(model, tree, options.topk);
    ++result.forward_passes;
    for (StepRecord& step : outcome.steps) result.trace.steps.push_back(std::move(step));
    result.rounds.push_back(
        {iteration++, tree.size(), outcome.accepted.size(), result.forward_passes, false});
    state = std::move(outcome.final_state);
    if (!state.complete()) {
      drafts = DraftFromLogits(state, outcome.deepest_logits, alternatives);
    }
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace ssd
