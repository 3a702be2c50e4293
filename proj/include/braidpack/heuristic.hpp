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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "braidpack/core.hpp"
#include "braidpack/exact.hpp"
#include "braidpack/verifier.hpp"

namespace braidpack {

enum class Neighborhood { AdjacentSwap, ArbitrarySwap, SegmentReversal };
enum class InitialOrder { Identity, Random, SpanSorted };

struct HeuristicConfig {
  std::uint64_t seed = 1;
  long iterations = 1000;
  Neighborhood neighborhood = Neighborhood::ArbitrarySwap;
  int restarts = 1;
  InitialOrder initial_order = InitialOrder::Identity;
  int workers = 0;  // 0 = BRAIDPACK_WORKERS or 1
};

namespace detail {

// Greedy level assignment shared by list_schedule and the local search.
class ListScheduler {
 public:
  explicit ListScheduler(const Instance& inst) : inst_(inst), dag_(derive_order(inst)) {}

  // Fills `level` and returns (height, sum of levels).
  std::pair<int, long> run(const std::vector<int>& pi, std::vector<int>& level) const {
    const std::size_t m = inst_.num_gates();
    std::vector<Interval> span(m);
    for (std::size_t i = 0; i < m; ++i) span[i] = gate_span(inst_.gate(i), pi);
    using Key = std::tuple<int, const std::string*, std::size_t>;
    auto cmp = [](const Key& a, const Key& b) {
      if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
      return *std::get<1>(a) > *std::get<1>(b);
    };
    std::priority_queue<Key, std::vector<Key>, decltype(cmp)> ready(cmp);
    std::vector<std::size_t> indeg(m);
    for (std::size_t i = 0; i < m; ++i) {
      indeg[i] = dag_.pred[i].size();
      if (indeg[i] == 0) ready.emplace(span[i].length(), &inst_.gate(i).id, i);
    }
    level.assign(m, 0);
    std::vector<std::vector<Interval>> rows;
    int height = 0;
    long sum = 0;
    while (!ready.empty()) {
      auto [len, id, g] = ready.top();
      ready.pop();
      int l = 1;
      for (auto p : dag_.pred[g]) l = std::max(l, level[p] + 1);
      for (;; ++l) {
        if (static_cast<int>(rows.size()) < l) rows.resize(l);
        const auto& row = rows[l - 1];
        bool fits = std::all_of(row.begin(), row.end(),
                                [&](Interval s) { return spans_separated(s, span[g]); });
        if (fits) break;
      }
      rows[l - 1].push_back(span[g]);
      level[g] = l;
      height = std::max(height, l);
      sum += l;
      for (auto s : dag_.succ[g])
        if (--indeg[s] == 0) ready.emplace(span[s].length(), &inst_.gate(s).id, s);
    }
    return {height, sum};
  }

  const OrderDag& dag() const { return dag_; }

 private:
  const Instance& inst_;
  OrderDag dag_;
};

inline std::vector<int> initial_column_order(const Instance& inst, InitialOrder kind, std::mt19937_64& rng) {
  const int n = inst.num_qubits();
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 1);
  if (kind == InitialOrder::Random) {
    std::shuffle(sigma.begin(), sigma.end(), rng);
  } else if (kind == InitialOrder::SpanSorted) {
    // Wide gates first, each pulling its qubits next to each other.
    std::vector<std::size_t> idx(inst.num_gates());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      const auto& ga = inst.gate(a);
      const auto& gb = inst.gate(b);
      if (ga.qubits.size() != gb.qubits.size()) return ga.qubits.size() > gb.qubits.size();
      return ga.id < gb.id;
    });
    std::vector<char> used(n + 1, 0);
    sigma.clear();
    for (auto i : idx)
      for (int q : inst.gate(i).qubits)
        if (!used[q]) {
          used[q] = 1;
          sigma.push_back(q);
        }
    for (int q = 1; q <= n; ++q)
      if (!used[q]) sigma.push_back(q);
  }
  return sigma;
}

inline std::vector<int> pi_from_order(const std::vector<int>& sigma) {
  std::vector<int> pi(sigma.size());
  for (std::size_t p = 0; p < sigma.size(); ++p) pi[sigma[p] - 1] = static_cast<int>(p) + 1;
  return pi;
}

struct Candidate {
  int height = 0;
  long sum = 0;
  std::vector<int> pi;
  std::vector<int> level;

  bool better_than(const Candidate& o) const {
    return std::tie(height, sum, pi, level) < std::tie(o.height, o.sum, o.pi, o.level);
  }
};

}  // namespace detail

/// Greedy packing for a fixed permutation; always valid.
inline Packing list_schedule(const Instance& inst, const std::vector<int>& pi) {
  if (!is_permutation_of_n(pi, inst.num_qubits()))
    throw Error(ErrorCode::InvalidPermutation, "list_schedule needs a permutation of [1..n]");
  detail::ListScheduler ls(inst);
  std::vector<int> level;
  ls.run(pi, level);
  auto p = detail::to_packing(inst, pi, level);
  if (!check_packing(inst, p).ok) throw std::logic_error("list_schedule produced an invalid packing");
  return p;
}

/**
 * Simulated annealing over column orders, scored by list_schedule height and
 * then by the sum of levels. Restarts are independent and seeded from
 * `seed + restart`, so results do not depend on the worker count.
 */
inline SolveResult local_search(const Instance& inst, const HeuristicConfig& cfg) {
  if (cfg.iterations < 0 || cfg.restarts < 1)
    throw Error(ErrorCode::InvalidConfig, "iterations must be >= 0 and restarts >= 1");
  detail::ListScheduler sched(inst);
  const int n = inst.num_qubits();
  const double m = std::max<double>(1.0, static_cast<double>(inst.num_gates()));
  std::vector<detail::Candidate> per_restart(cfg.restarts);

  auto one = [&](int r) {
    std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(r));
    auto sigma = detail::initial_column_order(inst, cfg.initial_order, rng);
    detail::Candidate cur;
    cur.pi = detail::pi_from_order(sigma);
    std::tie(cur.height, cur.sum) = sched.run(cur.pi, cur.level);
    detail::Candidate best = cur;
    auto energy = [&](const detail::Candidate& c) {
      return c.height + static_cast<double>(c.sum) / (m * (m + 1.0));
    };
    const double t0 = 1.0, t1 = 0.01;
    const double alpha = cfg.iterations > 0 ? std::pow(t1 / t0, 1.0 / static_cast<double>(cfg.iterations)) : 1.0;
    double temp = t0;
    std::uniform_int_distribution<int> pick(0, std::max(0, n - 1));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (long it = 0; it < cfg.iterations && n >= 2; ++it, temp *= alpha) {
      auto next = sigma;
      int i = pick(rng), j = pick(rng);
      switch (cfg.neighborhood) {
        case Neighborhood::AdjacentSwap:
          j = i + 1 < n ? i + 1 : i - 1;
          std::swap(next[i], next[j]);
          break;
        case Neighborhood::ArbitrarySwap:
          if (i == j) j = (i + 1) % n;
          std::swap(next[i], next[j]);
          break;
        case Neighborhood::SegmentReversal:
          if (i == j) j = (i + 1) % n;
          if (i > j) std::swap(i, j);
          std::reverse(next.begin() + i, next.begin() + j + 1);
          break;
      }
      detail::Candidate cand;
      cand.pi = detail::pi_from_order(next);
      std::tie(cand.height, cand.sum) = sched.run(cand.pi, cand.level);
      double delta = energy(cand) - energy(cur);
      if (delta <= 0 || coin(rng) < std::exp(-delta / temp)) {
        sigma = std::move(next);
        cur = std::move(cand);
        if (cur.better_than(best)) best = cur;
      }
    }
    per_restart[r] = std::move(best);
  };

  int workers = cfg.workers > 0 ? cfg.workers : default_workers();
  workers = std::max(1, std::min(workers, cfg.restarts));
  if (workers == 1) {
    for (int r = 0; r < cfg.restarts; ++r) one(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int k = 0; k < workers; ++k)
      pool.emplace_back([&] {
        for (int r; (r = next++) < cfg.restarts;) one(r);
      });
    for (auto& t : pool) t.join();
  }

  const detail::Candidate* best = &per_restart[0];
  for (const auto& c : per_restart)
    if (c.better_than(*best)) best = &c;
  SolveResult res;
  res.feasible = true;
  res.witness = detail::to_packing(inst, best->pi, best->level);
  if (!check_packing(inst, *res.witness).ok)
    throw std::logic_error("local_search produced an invalid packing");
  res.best_height = height_or_zero(*res.witness);
  res.nodes_explored = static_cast<std::uint64_t>(cfg.iterations) * cfg.restarts;
  res.time_limit_hit = *res.best_height != SearchCore(inst).chain_bound;
  return res;
}

}  // namespace braidpack
