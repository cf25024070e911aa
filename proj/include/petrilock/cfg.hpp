// Small CFG helpers over Function blocks: reachability, predecessors,
// dominators and natural loops.
#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "petrilock/mir.hpp"

namespace petrilock {

inline std::set<int> reachable_blocks(const Function& f,
                                      bool include_unwind = true) {
  std::set<int> seen;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int b = stack.back();
    stack.pop_back();
    if (!seen.insert(b).second) continue;
    for (int s : successors(f.blocks[b].terminator, include_unwind))
      stack.push_back(s);
  }
  return seen;
}

inline std::vector<std::vector<int>> predecessors(const Function& f) {
  std::vector<std::vector<int>> preds(f.blocks.size());
  for (const auto& b : f.blocks)
    for (int s : successors(b.terminator))
      preds[s].push_back(b.id);
  return preds;
}

// Iterative dominator sets over the blocks reachable from bb0.
inline std::vector<std::set<int>> dominator_sets(const Function& f) {
  const std::set<int> reach = reachable_blocks(f);
  const size_t n = f.blocks.size();
  std::set<int> all(reach.begin(), reach.end());
  std::vector<std::set<int>> dom(n);
  for (size_t i = 0; i < n; ++i)
    dom[i] = reach.count(static_cast<int>(i)) ? all : std::set<int>{};
  dom[0] = {0};
  auto preds = predecessors(f);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int b : reach) {
      if (b == 0) continue;
      std::set<int> meet = all;
      bool any = false;
      for (int p : preds[b]) {
        if (!reach.count(p)) continue;
        if (!any) {
          meet = dom[p];
          any = true;
        } else {
          std::set<int> tmp;
          std::set_intersection(meet.begin(), meet.end(), dom[p].begin(),
                                dom[p].end(), std::inserter(tmp, tmp.begin()));
          meet = std::move(tmp);
        }
      }
      meet.insert(b);
      if (meet != dom[b]) {
        dom[b] = std::move(meet);
        changed = true;
      }
    }
  }
  return dom;
}

struct BackEdge {
  int from = -1;  // latch block
  int header = -1;
};

inline std::vector<BackEdge> back_edges(const Function& f) {
  std::vector<BackEdge> out;
  auto dom = dominator_sets(f);
  for (int b : reachable_blocks(f))
    for (int s : successors(f.blocks[b].terminator))
      if (dom[b].count(s)) out.push_back({b, s});
  return out;
}

// Natural loop body for a back edge: header plus all blocks that reach the
// latch without passing through the header.
inline std::set<int> natural_loop_body(const Function& f, const BackEdge& e) {
  auto preds = predecessors(f);
  std::set<int> body{e.header, e.from};
  std::vector<int> stack{e.from};
  while (!stack.empty()) {
    int b = stack.back();
    stack.pop_back();
    if (b == e.header) continue;
    for (int p : preds[b])
      if (body.insert(p).second) stack.push_back(p);
  }
  return body;
}

// Union of all natural-loop bodies of f.
inline std::set<int> blocks_in_loops(const Function& f) {
  std::set<int> out;
  for (const auto& e : back_edges(f)) {
    auto body = natural_loop_body(f, e);
    out.insert(body.begin(), body.end());
  }
  return out;
}

}  // namespace petrilock
