// Copyright 2026 The braidpack Authors
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

#pragma once

#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <vector>

#include "braidpack/core.hpp"

namespace braidpack {

/// Static data shared by every search over one instance: the derived order,
/// chain bounds and the intersection relation.
struct SearchCore {
  const Instance* inst = nullptr;
  OrderDag dag;
  std::vector<int> est;   // longest chain ending at the gate, counting it
  std::vector<int> tail;  // longest chain strictly after the gate
  std::vector<std::vector<std::uint64_t>> meets;  // bit j of row i: gates i, j share a qubit
  int chain_bound = 0;

  explicit SearchCore(const Instance& instance) : inst(&instance), dag(derive_order(instance)) {
    const std::size_t m = instance.num_gates();
    est.assign(m, 1);
    tail.assign(m, 0);
    for (auto v : dag.topo)
      for (auto p : dag.pred[v]) est[v] = std::max(est[v], est[p] + 1);
    for (auto it = dag.topo.rbegin(); it != dag.topo.rend(); ++it)
      for (auto s : dag.succ[*it]) tail[*it] = std::max(tail[*it], tail[s] + 1);
    for (std::size_t i = 0; i < m; ++i) chain_bound = std::max(chain_bound, est[i] + tail[i]);
    const std::size_t words = (m + 63) / 64;
    meets.assign(m, std::vector<std::uint64_t>(words, 0));
    std::vector<std::vector<std::size_t>> on_wire(instance.num_qubits());
    for (std::size_t i = 0; i < m; ++i)
      for (int q : instance.gate(i).qubits) on_wire[q - 1].push_back(i);
    for (const auto& w : on_wire)
      for (auto a : w)
        for (auto b : w) meets[a][b / 64] |= std::uint64_t{1} << (b % 64);
  }

  std::size_t size() const { return est.size(); }
  bool intersect(std::size_t a, std::size_t b) const { return (meets[a][b / 64] >> (b % 64)) & 1; }
};

/// Shared stop conditions for one solver call.
struct Budget {
  std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();
  const std::atomic<bool>* cancel = nullptr;
  std::atomic<bool> expired{false};

  bool out_of_time() {
    if (expired.load(std::memory_order_relaxed)) return true;
    if (std::chrono::steady_clock::now() >= deadline) {
      expired = true;
      return true;
    }
    return false;
  }
  bool cancelled() const { return cancel && cancel->load(std::memory_order_relaxed); }
};

enum class SearchStatus { Found, Infeasible, Exhausted };

/**
 * Level assignment for a fixed conflict graph.
 *
 * Domains are bitsets over [1..h]. Propagation keeps precedence bounds
 * consistent and removes a fixed gate's level from its conflict neighbours.
 * Branching follows the topological order with ascending levels, so the first
 * solution is the lexicographically smallest level vector in that order.
 */
class LevelSearch {
 public:
  using Domain = std::vector<std::uint64_t>;

  LevelSearch(const SearchCore& core, int h, const std::vector<std::vector<std::uint32_t>>& conflicts)
      : core_(core), h_(h), words_((h + 64) / 64), conflicts_(conflicts) {}

  /// Optional per-gate whitelist of levels (empty vector = unrestricted).
  void restrict_levels(const std::vector<std::vector<int>>* allowed) { allowed_ = allowed; }
  void set_node_limit(std::uint64_t limit) { node_limit_ = limit; }
  void set_budget(Budget* b) { budget_ = b; }

  std::uint64_t nodes() const { return nodes_; }
  const std::vector<int>& levels() const { return levels_; }

  /// Runs the search. `on_solution` returns true to keep enumerating.
  SearchStatus run(const std::function<bool(const std::vector<int>&)>& on_solution = nullptr) {
    const std::size_t m = core_.size();
    levels_.assign(m, 0);
    exhausted_ = false;
    found_ = false;
    callback_ = on_solution;
    std::vector<std::uint64_t> dom(m * words_, 0);
    for (std::size_t i = 0; i < m; ++i) {
      int lo = core_.est[i], hi = h_ - core_.tail[i];
      if (allowed_ && !(*allowed_)[i].empty()) {
        for (int v : (*allowed_)[i])
          if (v >= lo && v <= hi) set_bit(dom, i, v);
      } else {
        for (int v = lo; v <= hi; ++v) set_bit(dom, i, v);
      }
    }
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < m; ++i) queue.push_back(i);
    if (propagate(dom, queue)) dfs(dom, 0);
    if (found_ && !callback_) return SearchStatus::Found;
    if (exhausted_) return SearchStatus::Exhausted;
    return found_ ? SearchStatus::Found : SearchStatus::Infeasible;
  }

 private:
  bool test_bit(const std::vector<std::uint64_t>& d, std::size_t i, int v) const {
    return (d[i * words_ + v / 64] >> (v % 64)) & 1;
  }
  void set_bit(std::vector<std::uint64_t>& d, std::size_t i, int v) const {
    d[i * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
  }
  int low(const std::vector<std::uint64_t>& d, std::size_t i) const {
    for (std::size_t w = 0; w < words_; ++w)
      if (auto x = d[i * words_ + w]) return static_cast<int>(w * 64 + std::countr_zero(x));
    return -1;
  }
  int high(const std::vector<std::uint64_t>& d, std::size_t i) const {
    for (std::size_t w = words_; w-- > 0;)
      if (auto x = d[i * words_ + w]) return static_cast<int>(w * 64 + 63 - std::countl_zero(x));
    return -1;
  }
  bool singleton(const std::vector<std::uint64_t>& d, std::size_t i) const {
    int c = 0;
    for (std::size_t w = 0; w < words_; ++w) c += std::popcount(d[i * words_ + w]);
    return c == 1;
  }
  // Clears levels < v (keep_from) and reports whether anything changed.
  bool clear_below(std::vector<std::uint64_t>& d, std::size_t i, int v) const {
    bool changed = false;
    for (std::size_t w = 0; w < words_; ++w) {
      int base = static_cast<int>(w * 64);
      std::uint64_t mask;
      if (v <= base) break;
      if (v >= base + 64) mask = 0;
      else mask = ~std::uint64_t{0} << (v - base);
      auto& x = d[i * words_ + w];
      if ((x & mask) != x) {
        x &= mask;
        changed = true;
      }
    }
    return changed;
  }
  bool clear_above(std::vector<std::uint64_t>& d, std::size_t i, int v) const {
    bool changed = false;
    for (std::size_t w = 0; w < words_; ++w) {
      int base = static_cast<int>(w * 64);
      std::uint64_t mask;
      if (v >= base + 63) continue;
      if (v < base) mask = 0;
      else mask = (v - base + 1 == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << (v - base + 1)) - 1);
      auto& x = d[i * words_ + w];
      if ((x & mask) != x) {
        x &= mask;
        changed = true;
      }
    }
    return changed;
  }

  bool propagate(std::vector<std::uint64_t>& d, std::vector<std::size_t>& queue) {
    while (!queue.empty()) {
      std::size_t i = queue.back();
      queue.pop_back();
      int lo = low(d, i);
      if (lo < 0) return false;
      int hi = high(d, i);
      for (auto s : core_.dag.succ[i]) {
        if (clear_below(d, s, lo + 1)) {
          if (low(d, s) < 0) return false;
          queue.push_back(s);
        }
      }
      for (auto p : core_.dag.pred[i]) {
        if (clear_above(d, p, hi - 1)) {
          if (low(d, p) < 0) return false;
          queue.push_back(p);
        }
      }
      if (lo == hi) {
        for (auto c : conflicts_[i]) {
          if (test_bit(d, c, lo)) {
            d[c * words_ + lo / 64] &= ~(std::uint64_t{1} << (lo % 64));
            if (low(d, c) < 0) return false;
            queue.push_back(c);
          }
        }
      }
    }
    return true;
  }

  // Returns true when the search should stop.
  bool dfs(std::vector<std::uint64_t>& d, std::size_t cursor) {
    const auto& order = core_.dag.topo;
    while (cursor < order.size() && singleton(d, order[cursor])) ++cursor;
    if (cursor == order.size()) {
      for (std::size_t i = 0; i < core_.size(); ++i) levels_[i] = low(d, i);
      found_ = true;
      if (!callback_) return true;
      return !callback_(levels_);
    }
    std::size_t g = order[cursor];
    for (int v = low(d, g); v >= 0 && v <= h_; ++v) {
      if (!test_bit(d, g, v)) continue;
      if (++nodes_ > node_limit_ || (budget_ && (nodes_ % 256 == 0) &&
                                     (budget_->cancelled() || budget_->out_of_time()))) {
        exhausted_ = true;
        return true;
      }
      std::vector<std::uint64_t> next = d;
      for (std::size_t w = 0; w < words_; ++w) next[g * words_ + w] = 0;
      set_bit(next, g, v);
      std::vector<std::size_t> queue{g};
      if (propagate(next, queue) && dfs(next, cursor + 1)) return true;
    }
    return false;
  }

  const SearchCore& core_;
  int h_;
  std::size_t words_;
  const std::vector<std::vector<std::uint32_t>>& conflicts_;
  const std::vector<std::vector<int>>* allowed_ = nullptr;
  std::uint64_t node_limit_ = UINT64_MAX;
  Budget* budget_ = nullptr;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  bool found_ = false;
  std::function<bool(const std::vector<int>&)> callback_;
  std::vector<int> levels_;
};

/// Conflict lists for a complete permutation: non-intersecting gates whose
/// spans touch must not share a level.
inline std::vector<std::vector<std::uint32_t>> conflicts_for(const SearchCore& core,
                                                             const std::vector<int>& pi) {
  const std::size_t m = core.size();
  std::vector<Interval> span(m);
  for (std::size_t i = 0; i < m; ++i) span[i] = gate_span(core.inst->gate(i), pi);
  std::vector<std::vector<std::uint32_t>> out(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (!core.intersect(a, b) && !spans_separated(span[a], span[b])) {
        out[a].push_back(static_cast<std::uint32_t>(b));
        out[b].push_back(static_cast<std::uint32_t>(a));
      }
  return out;
}

}  // namespace braidpack
