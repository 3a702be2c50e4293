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
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "braidpack/core.hpp"
#include "braidpack/level_search.hpp"
#include "braidpack/verifier.hpp"

namespace braidpack {

struct SearchLimits {
  std::optional<double> time_limit_seconds;
  /// 0 selects BRAIDPACK_WORKERS from the environment, else 1.
  int workers = 0;
  /// Search only this permutation instead of all of them.
  std::optional<std::vector<int>> fixed_pi;
  /// Restricts the listed gates to the given levels.
  std::map<GateId, std::vector<int>> pinned_levels;
  /// Node budget of the partial-permutation relaxation check.
  std::uint64_t relaxation_nodes = 2000;
  /// Largest n for which count_min_packings enumerates permutations.
  int count_qubit_cap = 10;
  std::uint64_t count_cap = 100'000'000;
};

struct SolveResult {
  bool feasible = false;
  std::optional<int> best_height;
  std::optional<Packing> witness;
  std::uint64_t nodes_explored = 0;
  bool time_limit_hit = false;
};

inline int default_workers() {
  if (const char* env = std::getenv("BRAIDPACK_WORKERS")) {
    int k = std::atoi(env);
    if (k > 0) return k;
  }
  return 1;
}

namespace detail {

inline std::vector<std::vector<int>> pinned_table(const Instance& inst, const SearchLimits& lim) {
  std::vector<std::vector<int>> allowed(inst.num_gates());
  for (const auto& [id, levels] : lim.pinned_levels) {
    auto& a = allowed[inst.index_of(id)];
    a = levels;
    if (a.empty()) a.push_back(0);  // nothing admissible
  }
  return allowed;
}

/**
 * Depth-first search over column orders. Columns are filled left to right;
 * after each placement the conflicts already implied by the partial order are
 * handed to a budgeted LevelSearch, which prunes the branch when it proves the
 * relaxation infeasible. Mirror images are skipped by requiring the leftmost
 * qubit to be smaller than the rightmost one.
 */
class PermutationSearch {
 public:
  PermutationSearch(const SearchCore& core, int h, const SearchLimits& lim,
                    const std::vector<std::vector<int>>& allowed, Budget& budget)
      : core_(core), h_(h), lim_(lim), allowed_(allowed), budget_(budget),
        n_(core.inst->num_qubits()) {
    const std::size_t m = core_.size();
    size_.resize(m);
    for (std::size_t i = 0; i < m; ++i) size_[i] = static_cast<int>(core_.inst->gate(i).qubits.size());
    gates_on_.resize(n_);
    for (std::size_t i = 0; i < m; ++i)
      for (int q : core_.inst->gate(i).qubits) gates_on_[q - 1].push_back(i);
  }

  std::uint64_t nodes = 0;
  bool exhausted = false;

  using LeafFn = std::function<bool(const std::vector<int>& pi, const std::vector<int>& levels)>;

  /// Explores the subtree whose leftmost qubit is `first`. With `enumerate`
  /// every solution is reported and the return value says whether to stop.
  bool run(int first, const LeafFn& leaf, bool enumerate, const std::atomic<int>* stop_above = nullptr) {
    const std::size_t m = core_.size();
    cnt_.assign(m, 0);
    minp_.assign(m, 0);
    maxp_.assign(m, 0);
    pos_.assign(n_, 0);
    sigma_.clear();
    leaf_ = &leaf;
    enumerate_ = enumerate;
    stop_above_ = stop_above;
    first_ = first;
    place(first);
    bool stop = false;
    if (n_ == 1 || alive()) stop = descend();
    unplace(first);
    return stop;
  }

 private:
  void place(int q) {
    int p = static_cast<int>(sigma_.size()) + 1;
    sigma_.push_back(q);
    pos_[q - 1] = p;
    for (auto g : gates_on_[q - 1]) {
      if (cnt_[g]++ == 0) minp_[g] = p;
      maxp_[g] = p;
    }
  }
  void unplace(int q) {
    sigma_.pop_back();
    pos_[q - 1] = 0;
    for (auto g : gates_on_[q - 1]) {
      --cnt_[g];
      if (cnt_[g] > 0) {
        int mx = 0;
        for (int r : core_.inst->gate(g).qubits) mx = std::max(mx, pos_[r - 1]);
        maxp_[g] = mx;
      }
    }
  }

  bool should_abort() {
    if (budget_.cancelled()) return true;
    if (stop_above_ && first_ > stop_above_->load(std::memory_order_relaxed)) return true;
    if (budget_.out_of_time()) {
      exhausted = true;
      return true;
    }
    return false;
  }

  std::vector<std::vector<std::uint32_t>> known_conflicts() const {
    const std::size_t m = core_.size();
    std::vector<std::vector<std::uint32_t>> out(m);
    for (std::size_t a = 0; a < m; ++a) {
      if (cnt_[a] == 0) continue;
      bool a_closed = cnt_[a] == size_[a];
      for (std::size_t b = a + 1; b < m; ++b) {
        if (cnt_[b] == 0 || core_.intersect(a, b)) continue;
        bool b_closed = cnt_[b] == size_[b];
        bool touch;
        if (!a_closed && !b_closed) {
          touch = true;
        } else if (a_closed && b_closed) {
          touch = !spans_separated({minp_[a], maxp_[a]}, {minp_[b], maxp_[b]});
        } else if (a_closed) {
          touch = minp_[b] <= maxp_[a] + 1;
        } else {
          touch = minp_[a] <= maxp_[b] + 1;
        }
        if (touch) {
          out[a].push_back(static_cast<std::uint32_t>(b));
          out[b].push_back(static_cast<std::uint32_t>(a));
        }
      }
    }
    return out;
  }

  // Relaxation check of the current prefix.
  bool alive() {
    auto conf = known_conflicts();
    LevelSearch ls(core_, h_, conf);
    ls.restrict_levels(&allowed_);
    ls.set_node_limit(lim_.relaxation_nodes);
    ls.set_budget(&budget_);
    auto st = ls.run();
    nodes += ls.nodes() + 1;
    return st != SearchStatus::Infeasible;
  }

  bool at_leaf() {
    std::vector<int> pi(n_);
    for (int q = 0; q < n_; ++q) pi[q] = pos_[q];
    auto conf = conflicts_for(core_, pi);
    LevelSearch ls(core_, h_, conf);
    ls.restrict_levels(&allowed_);
    ls.set_budget(&budget_);
    bool stop = false;
    auto st = ls.run([&](const std::vector<int>& lv) {
      stop = (*leaf_)(pi, lv);
      return enumerate_ && !stop;
    });
    nodes += ls.nodes() + 1;
    if (st == SearchStatus::Exhausted) {
      if (!budget_.cancelled()) exhausted = true;
      return true;
    }
    if (st == SearchStatus::Found && !enumerate_) return true;
    return stop;
  }

  bool descend() {
    const int p = static_cast<int>(sigma_.size());
    if (p == n_) return at_leaf();
    if (should_abort()) return true;
    for (int q = 1; q <= n_; ++q) {
      if (pos_[q - 1]) continue;
      if (p + 1 == n_ && n_ >= 2 && q < first_) continue;
      place(q);
      bool ok = true;
      if (p + 1 < n_) {
        // Some unplaced qubit must stay larger than the leftmost one.
        bool larger_left = false;
        for (int r = first_ + 1; r <= n_ && !larger_left; ++r) larger_left = pos_[r - 1] == 0;
        ok = larger_left && alive();
      }
      bool stop = ok && descend();
      unplace(q);
      if (stop) return true;
    }
    return false;
  }

  const SearchCore& core_;
  int h_;
  const SearchLimits& lim_;
  const std::vector<std::vector<int>>& allowed_;
  Budget& budget_;
  int n_;
  std::vector<int> size_, cnt_, minp_, maxp_, pos_, sigma_;
  std::vector<std::vector<std::size_t>> gates_on_;
  const LeafFn* leaf_ = nullptr;
  bool enumerate_ = false;
  const std::atomic<int>* stop_above_ = nullptr;
  int first_ = 1;
};

inline Packing to_packing(const Instance& inst, const std::vector<int>& pi, const std::vector<int>& levels) {
  Packing p;
  p.pi = pi;
  for (std::size_t i = 0; i < inst.num_gates(); ++i) p.mu[inst.gate(i).id] = levels[i];
  return p;
}

inline void assert_sound(const Instance& inst, const Packing& p, int h) {
  auto rep = check_packing(inst, p);
  if (!rep.ok || rep.height_used > h)
    throw std::logic_error("exact solver produced a packing that fails verification");
}

inline void start_budget(Budget& b, const SearchLimits& lim) {
  if (lim.time_limit_seconds)
    b.deadline = std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                     std::chrono::duration<double>(*lim.time_limit_seconds));
}

inline SolveResult decide_with_core(const SearchCore& core, int h, const SearchLimits& lim, Budget& budget) {
  const Instance& inst = *core.inst;
  const int n = inst.num_qubits();
  SolveResult res;
  if (inst.num_gates() == 0) {
    res.feasible = h >= 0;
    res.best_height = 0;
    res.witness = Packing{lim.fixed_pi.value_or(identity_permutation(n)), {}};
    return res;
  }
  if (h < core.chain_bound) return res;
  auto allowed = pinned_table(inst, lim);

  if (lim.fixed_pi) {
    if (!is_permutation_of_n(*lim.fixed_pi, n))
      throw Error(ErrorCode::InvalidPermutation, "fixed permutation is not a bijection");
    auto conf = conflicts_for(core, *lim.fixed_pi);
    LevelSearch ls(core, h, conf);
    ls.restrict_levels(&allowed);
    ls.set_budget(&budget);
    auto st = ls.run();
    res.nodes_explored = ls.nodes();
    if (st == SearchStatus::Exhausted) {
      res.time_limit_hit = true;
    } else if (st == SearchStatus::Found) {
      res.feasible = true;
      res.witness = to_packing(inst, *lim.fixed_pi, ls.levels());
    }
  } else {
    // Root branches (leftmost qubit) are shared out; the answer is the
    // solution of the smallest root that has one, whatever the worker count.
    const int roots = n == 1 ? 1 : n - 1;
    int workers = lim.workers > 0 ? lim.workers : default_workers();
    workers = std::max(1, std::min(workers, roots));
    std::atomic<int> next{1};
    std::atomic<int> best_root{roots + 1};
    std::mutex mu;
    std::vector<std::optional<std::pair<std::vector<int>, std::vector<int>>>> found(roots + 1);
    std::vector<char> inconclusive(roots + 1, 0);
    std::atomic<std::uint64_t> nodes{0};
    auto work = [&] {
      for (;;) {
        int r = next++;
        if (r > roots || r > best_root.load()) return;
        PermutationSearch ps(core, h, lim, allowed, budget);
        std::optional<std::pair<std::vector<int>, std::vector<int>>> sol;
        PermutationSearch::LeafFn leaf = [&](const std::vector<int>& pi, const std::vector<int>& lv) {
          sol.emplace(pi, lv);
          return true;
        };
        ps.run(r, leaf, false, &best_root);
        nodes += ps.nodes;
        std::lock_guard<std::mutex> lock(mu);
        if (sol) {
          found[r] = std::move(sol);
          int cur = best_root.load();
          while (r < cur && !best_root.compare_exchange_weak(cur, r)) {}
        } else if (ps.exhausted) {
          inconclusive[r] = 1;
        }
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int k = 0; k < workers; ++k) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    res.nodes_explored = nodes.load();
    int b = best_root.load();
    bool gap = false;
    for (int r = 1; r <= roots && r < b; ++r) gap = gap || inconclusive[r];
    if (b <= roots) {
      res.feasible = true;
      res.time_limit_hit = gap;
      res.witness = to_packing(inst, found[b]->first, found[b]->second);
    } else {
      for (int r = 1; r <= roots; ++r) gap = gap || inconclusive[r];
      res.time_limit_hit = gap;
    }
  }
  if (res.feasible) {
    assert_sound(inst, *res.witness, h);
    res.best_height = res.witness->height();
  }
  return res;
}

}  // namespace detail

/// Decides whether the instance packs within height h.
inline SolveResult decide(const Instance& inst, int h, const SearchLimits& lim = {}) {
  SearchCore core(inst);
  Budget budget;
  detail::start_budget(budget, lim);
  return detail::decide_with_core(core, h, lim, budget);
}

/// Smallest feasible height, searching upward from the chain bound.
inline SolveResult min_height(const Instance& inst, const SearchLimits& lim = {}) {
  SearchCore core(inst);
  Budget budget;
  detail::start_budget(budget, lim);
  SolveResult out;
  if (inst.num_gates() == 0) return detail::decide_with_core(core, 0, lim, budget);
  // Without pins some packing fits in m levels; a pin can push that up by its level.
  int top = static_cast<int>(inst.num_gates());
  for (const auto& [id, levels] : lim.pinned_levels)
    for (int l : levels) top = std::max(top, l + static_cast<int>(inst.num_gates()));
  for (int h = std::max(1, core.chain_bound); h <= top; ++h) {
    auto r = detail::decide_with_core(core, h, lim, budget);
    out.nodes_explored += r.nodes_explored;
    if (r.feasible || r.time_limit_hit) {
      r.nodes_explored = out.nodes_explored;
      return r;
    }
  }
  // Only reachable with pinned levels that admit no packing at all.
  return out;
}

/// Longest chain of the derived order; every packing needs at least this height.
inline int chain_lower_bound(const Instance& inst) { return SearchCore(inst).chain_bound; }

/**
 * Calls `fn(pi, levels)` for every packing of height <= h, one per mirror
 * class (the member whose leftmost qubit is smaller). With a fixed
 * permutation, every level map for that permutation is reported. `fn` returns
 * false to stop early. Returns false if the time limit cut the enumeration.
 */
inline bool enumerate_packings(const Instance& inst, int h, const SearchLimits& lim,
                               const std::function<bool(const std::vector<int>&, const std::vector<int>&)>& fn) {
  SearchCore core(inst);
  Budget budget;
  detail::start_budget(budget, lim);
  auto allowed = detail::pinned_table(inst, lim);
  const int n = inst.num_qubits();
  if (inst.num_gates() == 0) {
    fn(lim.fixed_pi.value_or(identity_permutation(n)), {});
    return true;
  }
  if (lim.fixed_pi) {
    auto conf = conflicts_for(core, *lim.fixed_pi);
    LevelSearch ls(core, h, conf);
    ls.restrict_levels(&allowed);
    ls.set_budget(&budget);
    auto st = ls.run([&](const std::vector<int>& lv) { return fn(*lim.fixed_pi, lv); });
    return st != SearchStatus::Exhausted;
  }
  if (n > lim.count_qubit_cap)
    throw Error(ErrorCode::CapExceeded, "enumeration over permutations is capped at n <= " +
                                            std::to_string(lim.count_qubit_cap));
  bool stopped = false;
  detail::PermutationSearch::LeafFn leaf = [&](const std::vector<int>& pi, const std::vector<int>& lv) {
    stopped = !fn(pi, lv);
    return stopped;
  };
  for (int r = 1; r <= (n == 1 ? 1 : n - 1) && !stopped; ++r) {
    detail::PermutationSearch ps(core, h, lim, allowed, budget);
    ps.run(r, leaf, true);
    if (ps.exhausted) return false;
  }
  return true;
}

/// Number of minimum-height packings. With `canonical`, mirror images are
/// counted once; with a fixed permutation, level maps for it are counted.
inline std::uint64_t count_min_packings(const Instance& inst, bool canonical, const SearchLimits& lim = {}) {
  if (!lim.fixed_pi && inst.num_qubits() > lim.count_qubit_cap)
    throw Error(ErrorCode::CapExceeded, "count_min_packings is capped at n <= " +
                                            std::to_string(lim.count_qubit_cap));
  auto best = min_height(inst, lim);
  if (best.time_limit_hit) throw Error(ErrorCode::CapExceeded, "time limit hit while finding the minimum");
  if (!best.feasible) return 0;
  const int h = *best.best_height;
  std::uint64_t count = 0;
  bool complete = enumerate_packings(inst, h, lim, [&](const std::vector<int>&, const std::vector<int>&) {
    return ++count < lim.count_cap;
  });
  if (!complete || count >= lim.count_cap)
    throw Error(ErrorCode::CapExceeded, "packing enumeration exceeded its budget");
  if (!canonical && !lim.fixed_pi && inst.num_qubits() >= 2) count *= 2;
  return count;
}

}  // namespace braidpack
