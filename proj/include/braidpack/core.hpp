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
#include <cstddef>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "braidpack/error.hpp"

namespace braidpack {

using GateId = std::string;

/// A gate acts on a nonempty set of 1-based qubit ids. `tag` is only used by
/// gadgets and renderers (fixed, movable, filler, input, output).
struct Gate {
  GateId id;
  std::vector<int> qubits;
  std::optional<std::string> tag;

  friend bool operator==(const Gate&, const Gate&) = default;
};

/**
 * A gate family together with the per-qubit operator sequences.
 *
 * wire_order(q) lists the gates acting on qubit q, earliest first. The
 * constructor normalizes qubit sets (sorted, deduplicated) and checks that
 * every wire order contains exactly the incident gates once each. Cycles
 * between wires are only detected by derive_order().
 */
class Instance {
 public:
  Instance() = default;

  Instance(int num_qubits, std::vector<Gate> gates,
           std::vector<std::vector<GateId>> wire_orders)
      : n_(num_qubits), gates_(std::move(gates)), wires_(std::move(wire_orders)) {
    if (n_ < 1) throw Error(ErrorCode::InvalidInstance, "num_qubits must be positive");
    for (std::size_t i = 0; i < gates_.size(); ++i) {
      auto& g = gates_[i];
      std::sort(g.qubits.begin(), g.qubits.end());
      g.qubits.erase(std::unique(g.qubits.begin(), g.qubits.end()), g.qubits.end());
      if (g.qubits.empty())
        throw Error(ErrorCode::InvalidInstance, "gate '" + g.id + "' has no qubits");
      if (g.qubits.front() < 1 || g.qubits.back() > n_)
        throw Error(ErrorCode::InvalidInstance, "gate '" + g.id + "' uses a qubit outside [1.." +
                                                    std::to_string(n_) + "]");
      if (!index_.emplace(g.id, i).second)
        throw Error(ErrorCode::InvalidInstance, "duplicate gate id '" + g.id + "'");
    }
    if (wires_.size() != static_cast<std::size_t>(n_))
      throw Error(ErrorCode::IncompleteWireOrder,
                  "expected " + std::to_string(n_) + " wire orders, got " +
                      std::to_string(wires_.size()));
    std::vector<int> seen(gates_.size(), 0);
    for (int q = 1; q <= n_; ++q) {
      std::size_t incident = 0;
      for (const auto& g : gates_)
        if (std::binary_search(g.qubits.begin(), g.qubits.end(), q)) ++incident;
      const auto& w = wires_[q - 1];
      for (const auto& id : w) {
        auto it = index_.find(id);
        if (it == index_.end())
          throw Error(ErrorCode::UnknownGateId, "wire " + std::to_string(q) + " lists '" + id + "'");
        const auto& qs = gates_[it->second].qubits;
        if (!std::binary_search(qs.begin(), qs.end(), q))
          throw Error(ErrorCode::IncompleteWireOrder,
                      "gate '" + id + "' listed on wire " + std::to_string(q) + " it does not act on");
        if (seen[it->second] == q)
          throw Error(ErrorCode::IncompleteWireOrder,
                      "gate '" + id + "' listed twice on wire " + std::to_string(q));
        seen[it->second] = q;
      }
      if (w.size() != incident)
        throw Error(ErrorCode::IncompleteWireOrder,
                    "wire " + std::to_string(q) + " is missing incident gates");
    }
  }

  int num_qubits() const { return n_; }
  std::size_t num_gates() const { return gates_.size(); }
  const std::vector<Gate>& gates() const { return gates_; }
  const Gate& gate(std::size_t i) const { return gates_[i]; }
  const std::vector<std::vector<GateId>>& wire_orders() const { return wires_; }
  const std::vector<GateId>& wire_order(int q) const { return wires_.at(q - 1); }

  std::optional<std::size_t> find(const GateId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(const GateId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw Error(ErrorCode::UnknownGateId, "'" + id + "'");
    return it->second;
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.n_ == b.n_ && a.gates_ == b.gates_ && a.wires_ == b.wires_;
  }

 private:
  int n_ = 1;
  std::vector<Gate> gates_;
  std::vector<std::vector<GateId>> wires_{std::vector<GateId>{}};
  std::unordered_map<GateId, std::size_t> index_;
};

/// Builds wire orders by sorting each wire's gates by a key (ties broken by
/// gate position). Handy for gadgets, whose orders follow their drawn levels.
template <typename Key>
std::vector<std::vector<GateId>> wire_orders_by_key(int num_qubits, const std::vector<Gate>& gates,
                                                    Key key) {
  std::vector<std::vector<std::size_t>> per(num_qubits);
  for (std::size_t i = 0; i < gates.size(); ++i)
    for (int q : gates[i].qubits) per.at(q - 1).push_back(i);
  std::vector<std::vector<GateId>> out(num_qubits);
  for (int q = 0; q < num_qubits; ++q) {
    std::stable_sort(per[q].begin(), per[q].end(),
                     [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    for (auto i : per[q]) out[q].push_back(gates[i].id);
  }
  return out;
}

/// Derived precedence DAG over gate indices. `raw_edges` keeps one edge per
/// consecutive wire pair (duplicates included); succ/pred are deduplicated.
struct OrderDag {
  std::vector<std::pair<std::size_t, std::size_t>> raw_edges;
  std::vector<std::vector<std::size_t>> succ;
  std::vector<std::vector<std::size_t>> pred;
  std::vector<std::size_t> topo;  // Kahn order, smallest index first

  std::size_t size() const { return succ.size(); }
};

inline OrderDag derive_order(const Instance& inst) {
  const std::size_t m = inst.num_gates();
  OrderDag dag;
  dag.succ.assign(m, {});
  dag.pred.assign(m, {});
  for (int q = 1; q <= inst.num_qubits(); ++q) {
    const auto& w = inst.wire_order(q);
    for (std::size_t k = 1; k < w.size(); ++k) {
      std::size_t a = inst.index_of(w[k - 1]), b = inst.index_of(w[k]);
      dag.raw_edges.emplace_back(a, b);
      dag.succ[a].push_back(b);
      dag.pred[b].push_back(a);
    }
  }
  for (auto* lists : {&dag.succ, &dag.pred})
    for (auto& l : *lists) {
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
    }
  std::vector<std::size_t> indeg(m);
  for (std::size_t i = 0; i < m; ++i) indeg[i] = dag.pred[i].size();
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < m; ++i)
    if (indeg[i] == 0) ready.push(i);
  while (!ready.empty()) {
    auto v = ready.top();
    ready.pop();
    dag.topo.push_back(v);
    for (auto s : dag.succ[v])
      if (--indeg[s] == 0) ready.push(s);
  }
  if (dag.topo.size() != m) {
    std::string culprit;
    for (std::size_t i = 0; i < m; ++i)
      if (indeg[i] != 0) {
        culprit = inst.gate(i).id;
        break;
      }
    throw Error(ErrorCode::CyclicOrder, "wire orders are inconsistent near gate '" + culprit + "'");
  }
  return dag;
}

/// Closed column interval [lo, hi].
struct Interval {
  int lo = 0;
  int hi = 0;
  int length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// pi[q-1] is the column of qubit q.
inline Interval gate_span(const Gate& g, const std::vector<int>& pi) {
  Interval s{pi.at(g.qubits.front() - 1), pi.at(g.qubits.front() - 1)};
  for (int q : g.qubits) {
    int c = pi.at(q - 1);
    s.lo = std::min(s.lo, c);
    s.hi = std::max(s.hi, c);
  }
  return s;
}

/// Two spans may share a level only with at least one empty column between.
inline bool spans_separated(Interval a, Interval b) { return a.hi + 1 < b.lo || b.hi + 1 < a.lo; }

inline std::vector<int> identity_permutation(int n) {
  std::vector<int> pi(n);
  for (int i = 0; i < n; ++i) pi[i] = i + 1;
  return pi;
}

inline std::vector<int> mirror_permutation(const std::vector<int>& pi) {
  const int n = static_cast<int>(pi.size());
  std::vector<int> out(pi.size());
  for (std::size_t i = 0; i < pi.size(); ++i) out[i] = n + 1 - pi[i];
  return out;
}

inline bool is_permutation_of_n(const std::vector<int>& pi, int n) {
  if (pi.size() != static_cast<std::size_t>(n)) return false;
  std::vector<char> hit(n + 1, 0);
  for (int c : pi) {
    if (c < 1 || c > n || hit[c]) return false;
    hit[c] = 1;
  }
  return true;
}

/// Qubit order left to right (inverse of pi).
inline std::vector<int> column_order(const std::vector<int>& pi) {
  std::vector<int> sigma(pi.size());
  for (std::size_t q = 0; q < pi.size(); ++q) sigma.at(pi[q] - 1) = static_cast<int>(q) + 1;
  return sigma;
}

struct Packing {
  std::vector<int> pi;
  std::map<GateId, int> mu;

  /// Maximum level used; throws EmptyPacking when mu is empty.
  int height() const {
    if (mu.empty()) throw Error(ErrorCode::EmptyPacking, "packing assigns no levels");
    int h = 0;
    for (const auto& [id, l] : mu) h = std::max(h, l);
    return h;
  }

  friend bool operator==(const Packing&, const Packing&) = default;
};

inline int packing_height(const Packing& p) { return p.height(); }

/// Height that treats an empty level map as height 0 (used for empty instances).
inline int height_or_zero(const Packing& p) { return p.mu.empty() ? 0 : p.height(); }

enum class ViolationKind { RowOverlap, RowMargin, Precedence, LevelRange, PermutationInvalid };

inline const char* violation_kind_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::RowOverlap: return "row-overlap";
    case ViolationKind::RowMargin: return "row-margin";
    case ViolationKind::Precedence: return "precedence";
    case ViolationKind::LevelRange: return "level-range";
    case ViolationKind::PermutationInvalid: return "permutation-invalid";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  std::vector<std::string> offenders;
  std::string detail;
};

}  // namespace braidpack
