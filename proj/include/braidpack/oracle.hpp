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
#include <cstdint>
#include <vector>

#include "braidpack/core.hpp"
#include "braidpack/exact.hpp"
#include "braidpack/verifier.hpp"

namespace braidpack {

// Brute force over every permutation and every level map. It deliberately
// shares no search code with decide(): pair rules are re-derived here from
// the wire orders, and complete candidates go through check_packing.
inline SolveResult oracle_min_height(const Instance& inst, int h_max) {
  const int n = inst.num_qubits();
  const int m = static_cast<int>(inst.num_gates());
  if (n > 8 || m > 10)
    throw Error(ErrorCode::CapExceeded, "oracle is limited to n <= 8 and at most 10 gates");
  SolveResult res;
  if (m == 0) {
    res.feasible = true;
    res.best_height = 0;
    res.witness = Packing{identity_permutation(n), {}};
    return res;
  }

  // below[a][b]: a and b share a wire and a comes first on it.
  std::vector<std::vector<char>> below(m, std::vector<char>(m, 0));
  std::vector<std::vector<char>> share(m, std::vector<char>(m, 0));
  for (int q = 1; q <= n; ++q) {
    const auto& w = inst.wire_order(q);
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::size_t j = i + 1; j < w.size(); ++j) {
        auto a = inst.index_of(w[i]), b = inst.index_of(w[j]);
        below[a][b] = 1;
        share[a][b] = share[b][a] = 1;
      }
  }

  std::vector<int> pi(n);
  std::vector<int> lo(m), hi(m), level(m);
  for (int h = 1; h <= h_max; ++h) {
    for (int i = 0; i < n; ++i) pi[i] = i + 1;
    do {
      for (int g = 0; g < m; ++g) {
        lo[g] = n + 1;
        hi[g] = 0;
        for (int q : inst.gate(g).qubits) {
          lo[g] = std::min(lo[g], pi[q - 1]);
          hi[g] = std::max(hi[g], pi[q - 1]);
        }
      }
      // Odometer over level maps with a consistency cut on the prefix.
      int g = 0;
      level.assign(m, 0);
      while (g >= 0) {
        if (g == m) {
          Packing cand;
          cand.pi = pi;
          for (int k = 0; k < m; ++k) cand.mu[inst.gate(k).id] = level[k];
          if (check_packing(inst, cand).ok) {
            res.feasible = true;
            res.best_height = cand.height();
            res.witness = cand;
            return res;
          }
          --g;
          continue;
        }
        if (++level[g] > h) {
          level[g] = 0;
          --g;
          continue;
        }
        ++res.nodes_explored;
        bool ok = true;
        for (int k = 0; k < g && ok; ++k) {
          if (share[g][k]) {
            ok = below[k][g] ? level[g] > level[k] : level[g] < level[k];
          } else if (level[g] == level[k]) {
            ok = hi[g] + 1 < lo[k] || hi[k] + 1 < lo[g];
          }
        }
        if (ok) ++g;
      }
    } while (std::next_permutation(pi.begin(), pi.end()));
  }
  return res;
}

}  // namespace braidpack
