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
#include <map>
#include <set>
#include <string>
#include <vector>

#include "braidpack/core.hpp"

namespace braidpack {

struct VerificationReport {
  bool ok = true;
  std::vector<Violation> violations;
  int height_used = 0;
};

/// True iff every pair of the given gates is separated by at least one empty
/// column under pi.
inline bool row_compatible(const std::vector<Gate>& gates, const std::vector<int>& pi) {
  std::vector<Interval> spans;
  spans.reserve(gates.size());
  for (const auto& g : gates) spans.push_back(gate_span(g, pi));
  std::sort(spans.begin(), spans.end(), [](Interval a, Interval b) { return a.lo < b.lo; });
  // Track the furthest right end seen so far: a long span may cover later ones.
  int reach = spans.empty() ? 0 : spans.front().hi;
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (reach + 1 >= spans[i].lo) return false;
    reach = std::max(reach, spans[i].hi);
  }
  return true;
}

namespace detail {

inline void check_rows(const Instance& inst, const std::vector<int>& pi,
                       const std::vector<int>& level, VerificationReport& rep) {
  std::map<int, std::vector<std::size_t>> rows;
  for (std::size_t i = 0; i < level.size(); ++i)
    if (level[i] >= 1) rows[level[i]].push_back(i);
  for (auto& [l, members] : rows) {
    std::vector<std::pair<Interval, std::size_t>> spans;
    for (auto i : members) spans.emplace_back(gate_span(inst.gate(i), pi), i);
    std::sort(spans.begin(), spans.end(), [&](const auto& a, const auto& b) {
      if (a.first.lo != b.first.lo) return a.first.lo < b.first.lo;
      return inst.gate(a.second).id < inst.gate(b.second).id;
    });
    for (std::size_t a = 0; a < spans.size(); ++a) {
      for (std::size_t b = a + 1; b < spans.size(); ++b) {
        const auto& [sa, ia] = spans[a];
        const auto& [sb, ib] = spans[b];
        if (sb.lo > sa.hi + 1) break;
        bool overlap = sb.lo <= sa.hi;
        rep.violations.push_back(
            {overlap ? ViolationKind::RowOverlap : ViolationKind::RowMargin,
             {inst.gate(ia).id, inst.gate(ib).id},
             "level " + std::to_string(l) + ": spans [" + std::to_string(sa.lo) + "," +
                 std::to_string(sa.hi) + "] and [" + std::to_string(sb.lo) + "," +
                 std::to_string(sb.hi) + "] " + (overlap ? "overlap" : "leave no margin")});
      }
    }
  }
}

inline void check_precedence(const Instance& inst, const std::vector<int>& level,
                             VerificationReport& rep) {
  std::set<std::pair<std::size_t, std::size_t>> reported;
  for (int q = 1; q <= inst.num_qubits(); ++q) {
    const auto& w = inst.wire_order(q);
    std::vector<std::size_t> idx;
    idx.reserve(w.size());
    for (const auto& id : w) idx.push_back(inst.index_of(id));
    for (std::size_t a = 0; a < idx.size(); ++a) {
      if (level[idx[a]] < 1) continue;
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        if (level[idx[b]] < 1 || level[idx[b]] > level[idx[a]]) continue;
        if (!reported.emplace(idx[a], idx[b]).second) continue;
        const auto& ea = inst.gate(idx[a]).id;
        const auto& eb = inst.gate(idx[b]).id;
        rep.violations.push_back({ViolationKind::Precedence,
                                  {ea, eb},
                                  "'" + eb + "' follows '" + ea + "' on qubit " +
                                      std::to_string(q) + " but sits at level " +
                                      std::to_string(level[idx[b]]) + " <= " +
                                      std::to_string(level[idx[a]])});
      }
    }
  }
}

}  // namespace detail

/// Checks both packing conditions and reports every failing pair.
inline VerificationReport check_packing(const Instance& inst, const Packing& p) {
  const int n = inst.num_qubits();
  if (p.pi.size() != static_cast<std::size_t>(n))
    throw Error(ErrorCode::InvalidPermutation, "pi has " + std::to_string(p.pi.size()) +
                                                   " entries for " + std::to_string(n) + " qubits");
  VerificationReport rep;
  std::vector<int> level(inst.num_gates(), 0);
  for (const auto& [id, l] : p.mu) {
    level[inst.index_of(id)] = l;
    rep.height_used = std::max(rep.height_used, l);
  }
  for (std::size_t i = 0; i < level.size(); ++i) {
    if (!p.mu.count(inst.gate(i).id)) {
      rep.violations.push_back({ViolationKind::LevelRange, {inst.gate(i).id}, "no level assigned"});
    } else if (level[i] < 1) {
      rep.violations.push_back({ViolationKind::LevelRange,
                                {inst.gate(i).id},
                                "level " + std::to_string(level[i]) + " is below 1"});
      level[i] = 0;
    }
  }
  if (!is_permutation_of_n(p.pi, n)) {
    std::vector<std::string> bad;
    std::vector<int> count(n + 2, 0);
    for (std::size_t q = 0; q < p.pi.size(); ++q) {
      int c = p.pi[q];
      if (c < 1 || c > n || count[c]++ > 0) bad.push_back(std::to_string(q + 1));
    }
    rep.violations.push_back({ViolationKind::PermutationInvalid, bad,
                              "pi is not a bijection onto [1.." + std::to_string(n) + "]"});
  } else {
    detail::check_rows(inst, p.pi, level, rep);
  }
  detail::check_precedence(inst, level, rep);
  rep.ok = rep.violations.empty();
  return rep;
}

}  // namespace braidpack
