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

// Test-only reference implementations. Nothing here calls into the library's
// search or verification code; they only read Instance/Packing fields.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "braidpack/core.hpp"

namespace reftest {

using braidpack::Gate;
using braidpack::Instance;
using braidpack::Packing;

// Pairwise "a strictly before b" from the wire orders, closed transitively.
inline std::vector<std::vector<bool>> before_closure(const Instance& inst) {
  const std::size_t m = inst.num_gates();
  std::vector<std::vector<bool>> b(m, std::vector<bool>(m, false));
  auto idx = [&](const std::string& id) {
    for (std::size_t i = 0; i < m; ++i)
      if (inst.gates()[i].id == id) return i;
    return m;
  };
  for (const auto& w : inst.wire_orders())
    for (std::size_t k = 1; k < w.size(); ++k) b[idx(w[k - 1])][idx(w[k])] = true;
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      if (b[i][k])
        for (std::size_t j = 0; j < m; ++j)
          if (b[k][j]) b[i][j] = true;
  return b;
}

inline std::pair<int, int> span_of(const Gate& g, const std::vector<int>& pi) {
  int lo = 1 << 30, hi = 0;
  for (int q : g.qubits) {
    lo = std::min(lo, pi[q - 1]);
    hi = std::max(hi, pi[q - 1]);
  }
  return {lo, hi};
}

inline bool apart(std::pair<int, int> a, std::pair<int, int> b) {
  return a.second + 1 < b.first || b.second + 1 < a.first;
}

// Plain restatement of the two packing conditions.
inline bool ref_valid(const Instance& inst, const Packing& p) {
  const int n = inst.num_qubits();
  if (static_cast<int>(p.pi.size()) != n) return false;
  std::vector<int> sorted = p.pi;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n; ++i)
    if (sorted[i] != i + 1) return false;
  const auto& gs = inst.gates();
  if (p.mu.size() != gs.size()) return false;
  std::vector<int> lv;
  for (const auto& g : gs) {
    auto it = p.mu.find(g.id);
    if (it == p.mu.end() || it->second < 1) return false;
    lv.push_back(it->second);
  }
  auto before = before_closure(inst);
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = 0; j < gs.size(); ++j) {
      if (i == j) continue;
      if (before[i][j] && lv[i] >= lv[j]) return false;
      if (i < j && lv[i] == lv[j] && !apart(span_of(gs[i], p.pi), span_of(gs[j], p.pi))) return false;
    }
  return true;
}

// Minimum height for a fixed order by breadth-first search over the set of
// gates already placed: every level takes a nonempty set of ready gates whose
// spans are pairwise apart. Exponential in the gate count (m <= 12 or so).
inline int ref_min_height_for(const Instance& inst, const std::vector<int>& pi) {
  const auto& gs = inst.gates();
  const int m = static_cast<int>(gs.size());
  if (m == 0) return 0;
  auto before = before_closure(inst);
  std::vector<std::uint32_t> need(m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (before[j][i]) need[i] |= 1u << j;
  std::vector<std::uint32_t> clash(m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && !apart(span_of(gs[i], pi), span_of(gs[j], pi))) clash[i] |= 1u << j;
  const std::uint32_t full = (m == 32) ? ~0u : ((1u << m) - 1);
  std::vector<int> dist(std::size_t{1} << m, -1);
  std::queue<std::uint32_t> q;
  dist[0] = 0;
  q.push(0);
  while (!q.empty()) {
    auto s = q.front();
    q.pop();
    if (s == full) return dist[s];
    std::uint32_t ready = 0;
    for (int i = 0; i < m; ++i)
      if (!(s >> i & 1) && (need[i] & s) == need[i]) ready |= 1u << i;
    for (std::uint32_t sub = ready; sub; sub = (sub - 1) & ready) {
      bool ok = true;
      for (int i = 0; i < m && ok; ++i)
        if (sub >> i & 1) ok = (clash[i] & sub) == 0;
      if (!ok || dist[s | sub] >= 0) continue;
      dist[s | sub] = dist[s] + 1;
      q.push(s | sub);
    }
  }
  return -1;
}

inline int ref_min_height(const Instance& inst) {
  std::vector<int> pi(inst.num_qubits());
  std::iota(pi.begin(), pi.end(), 1);
  int best = -1;
  do {
    int h = ref_min_height_for(inst, pi);
    if (h >= 0 && (best < 0 || h < best)) best = h;
  } while (std::next_permutation(pi.begin(), pi.end()));
  return best;
}

// Number of (pi, levels) pairs of height <= h, counting every permutation.
// Plain odometer over level maps with a prefix check.
inline std::uint64_t ref_count_packings(const Instance& inst, int h) {
  const auto& gs = inst.gates();
  const int m = static_cast<int>(gs.size());
  auto before = before_closure(inst);
  std::vector<int> pi(inst.num_qubits());
  std::iota(pi.begin(), pi.end(), 1);
  std::uint64_t total = 0;
  do {
    std::vector<std::pair<int, int>> sp;
    for (const auto& g : gs) sp.push_back(span_of(g, pi));
    std::vector<int> lv(m, 0);
    int g = 0;
    while (g >= 0) {
      if (g == m) {
        ++total;
        --g;
        continue;
      }
      if (++lv[g] > h) {
        lv[g] = 0;
        --g;
        continue;
      }
      bool ok = true;
      for (int j = 0; j < g && ok; ++j) {
        if (before[j][g] && lv[j] >= lv[g]) ok = false;
        if (before[g][j] && lv[g] >= lv[j]) ok = false;
        if (lv[j] == lv[g] && !apart(sp[j], sp[g])) ok = false;
      }
      if (ok) ++g;
    }
  } while (std::next_permutation(pi.begin(), pi.end()));
  return total;
}

// Random instance: gates are random qubit subsets; wire orders follow one
// random global time order, so the derived order is always acyclic.
inline Instance random_instance(std::mt19937_64& rng, int max_n = 6, int max_gates = 8) {
  auto roll = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int n = roll(1, max_n);
  const int m = roll(1, max_gates);
  std::vector<Gate> gates;
  for (int i = 0; i < m; ++i) {
    Gate g;
    g.id = "g" + std::to_string(i);
    const int k = roll(1, std::min(n, 3));
    std::set<int> qs;
    if (roll(0, 1) == 0) {
      int lo = roll(1, n - k + 1);
      for (int t = 0; t < k; ++t) qs.insert(lo + t);
    } else {
      while (static_cast<int>(qs.size()) < k) qs.insert(roll(1, n));
    }
    g.qubits.assign(qs.begin(), qs.end());
    gates.push_back(std::move(g));
  }
  std::vector<int> time(m);
  std::iota(time.begin(), time.end(), 0);
  std::shuffle(time.begin(), time.end(), rng);
  std::vector<std::vector<std::string>> wires(n);
  for (int t : time)
    for (int q : gates[t].qubits) wires[q - 1].push_back(gates[t].id);
  return Instance(n, std::move(gates), std::move(wires));
}

// Random (usually invalid) packing for differential checks of the verifier.
inline Packing random_packing(std::mt19937_64& rng, const Instance& inst, int h) {
  Packing p;
  p.pi.resize(inst.num_qubits());
  std::iota(p.pi.begin(), p.pi.end(), 1);
  std::shuffle(p.pi.begin(), p.pi.end(), rng);
  for (const auto& g : inst.gates()) p.mu[g.id] = std::uniform_int_distribution<int>(1, h)(rng);
  return p;
}

}  // namespace reftest
