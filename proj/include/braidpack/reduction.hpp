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
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "braidpack/core.hpp"
#include "braidpack/error.hpp"
#include "braidpack/exact.hpp"
#include "braidpack/gadgets.hpp"
#include "braidpack/rectilinear.hpp"
#include "braidpack/verifier.hpp"

namespace braidpack {

/**
 * Layout of a compiled formula.
 *
 * The drawing is turned a quarter clockwise: variables stack vertically (the
 * leftmost one on top) in two spine stages, clauses drawn above the line end
 * up on the right, clauses below it on the left. A stage is a group of nine
 * columns holding a vertical stack of blocks (widened gadgets) padded with
 * full-width filler bars; neighbouring stages are one empty column apart and a
 * port pair across that column is merged into one net gate. Every stage has
 * the same total height H and every block exactly fills its level window, so
 * any packing of height h = (n - 1) + H puts each block in a minimum packing
 * of its gadget. Frame columns at both ends and the fixing gadget below pin
 * the column order.
 */
struct CompiledInstance {
  Instance instance;
  int h = 0;
  std::vector<GadgetPlacement> placements;
  /// Per variable occurrence ("x1->C2"): movable gates from the variable to the clause port.
  std::map<std::string, std::vector<GateId>> signal_map;
  std::map<std::string, GateId> variable_probe;
  /// Index into placements of each variable's gadget.
  std::map<std::string, std::size_t> variable_block;
  /// Gates outside any gadget (filler bars, frame bars) at their only level.
  std::map<GateId, int> filler_levels;
  Formula formula;
  int stage_count = 0;
  int stage_height = 0;
};

namespace detail {

constexpr int kStageWidth = 9;

struct BlockSpec {
  int stage = 0;
  std::string label;
  std::string desc;
  int offset = 0;  // levels offset+1 .. offset+height within the stage
  std::map<std::string, std::string> signals;
};

struct Reserve {
  int stage, lo, hi;
};

struct SideEdge {
  std::size_t var;
  std::size_t clause;
  int x;
  bool neg;
  int track = 0;
};

struct SidePlan {
  bool mirrored = false;
  int fanout = 0;  // number of fan-out stages
  int depth = 0;   // number of prep/clause stage pairs
  std::vector<SideEdge> edges;                        // sorted by x
  std::vector<std::vector<std::size_t>> var_edges;    // edge indices per variable, by x
  std::map<std::size_t, std::vector<std::size_t>> clause_edges;  // by x
  std::map<std::size_t, int> height;                 // clause -> nesting height
  std::vector<int> f_stage, p_stage, c_stage;        // 1-based stage lookups
};

inline std::string lit_name(const std::string& var, bool neg) { return neg ? "!" + var : var; }

inline const Gadget& cached_gadget(const std::string& desc) {
  static thread_local std::map<std::string, Gadget> cache;
  auto it = cache.find(desc);
  if (it == cache.end()) it = cache.emplace(desc, build_gadget(desc)).first;
  return it->second;
}

inline std::string with_side(std::string desc, bool mirrored) { return mirrored ? desc + "/mirror" : desc; }

// Nesting heights on one side; throws when two clauses interleave.
inline void nest_clauses(const Formula& f, SidePlan& side) {
  std::vector<std::size_t> cls;
  for (const auto& [c, _] : side.clause_edges) cls.push_back(c);
  auto xs = [&](std::size_t c) {
    std::vector<int> v;
    for (auto e : side.clause_edges.at(c)) v.push_back(side.edges[e].x);
    return v;
  };
  // inside[c] = clauses nested within a gap of c.
  std::map<std::size_t, std::vector<std::size_t>> inside;
  for (auto c : cls)
    for (auto d : cls) {
      if (c == d) continue;
      auto xc = xs(c), xd = xs(d);
      if (xd.front() > xc.back() || xd.back() < xc.front()) continue;
      bool in_gap = false;
      for (std::size_t k = 0; k + 1 < xc.size(); ++k)
        in_gap = in_gap || (xc[k] < xd.front() && xd.back() < xc[k + 1]);
      bool c_in_gap = false;
      for (std::size_t k = 0; k + 1 < xd.size(); ++k)
        c_in_gap = c_in_gap || (xd[k] < xc.front() && xc.back() < xd[k + 1]);
      if (in_gap) {
        inside[c].push_back(d);
      } else if (!c_in_gap) {
        throw Error(ErrorCode::InvalidDrawing,
                    "edges of " + f.clause_name(c) + " and " + f.clause_name(d) + " interleave");
      }
    }
  // Nested clauses have strictly shorter spans, so process by span length.
  std::sort(cls.begin(), cls.end(), [&](auto a, auto b) {
    auto xa = xs(a), xb = xs(b);
    return std::make_pair(xa.back() - xa.front(), a) < std::make_pair(xb.back() - xb.front(), b);
  });
  for (auto c : cls) {
    int ht = 1;
    for (auto d : inside[c]) ht = std::max(ht, side.height.at(d) + 1);
    side.height[c] = ht;
    side.depth = std::max(side.depth, ht);
  }
}

}  // namespace detail

/// Builds the braiding instance of a formula with a valid rectilinear drawing.
inline CompiledInstance compile(const Formula& f, const Drawing& d) {
  using namespace detail;
  auto problems = validate_drawing(f, d);
  if (!problems.empty()) {
    std::string msg = "drawing is invalid: " + problems.front().kind;
    for (const auto& s : problems.front().subjects) msg += " " + s;
    if (problems.size() > 1) msg += " (+" + std::to_string(problems.size() - 1) + " more)";
    throw Error(ErrorCode::InvalidDrawing, msg);
  }
  const std::size_t nv = f.variables.size();
  std::map<std::string, std::size_t> var_index, clause_index;
  for (std::size_t i = 0; i < nv; ++i) var_index[f.variables[i]] = i;
  for (std::size_t i = 0; i < f.clauses.size(); ++i) clause_index[f.clause_name(i)] = i;

  // Variables from left to right in the drawing (top to bottom after turning).
  std::vector<std::size_t> by_x(nv);
  for (std::size_t i = 0; i < nv; ++i) by_x[i] = i;
  std::sort(by_x.begin(), by_x.end(), [&](auto a, auto b) {
    return d.boxes.at(f.variables[a]).x0 < d.boxes.at(f.variables[b]).x0;
  });

  SidePlan right, left;
  left.mirrored = true;
  for (auto* side : {&right, &left}) side->var_edges.assign(nv, {});
  {
    std::vector<DrawnEdge> sorted = d.edges;
    std::sort(sorted.begin(), sorted.end(), [](const DrawnEdge& a, const DrawnEdge& b) {
      return std::tie(a.x, a.var, a.clause) < std::tie(b.x, b.var, b.clause);
    });
    for (const auto& e : sorted) {
      const Box& vb = d.boxes.at(e.var);
      const Box& cb = d.boxes.at(e.clause);
      SidePlan& side = cb.y0 > vb.y1 ? right : left;
      side.edges.push_back({var_index.at(e.var), clause_index.at(e.clause), e.x, e.neg});
    }
  }
  for (auto* side : {&right, &left}) {
    for (std::size_t i = 0; i < side->edges.size(); ++i) {
      side->var_edges[side->edges[i].var].push_back(i);
      side->clause_edges[side->edges[i].clause].push_back(i);
    }
    for (const auto& ve : side->var_edges)
      side->fanout = std::max(side->fanout, static_cast<int>(ve.size()) - 1);
    nest_clauses(f, *side);
  }

  // Stage order: left side outermost first, spine, right side.
  std::vector<std::string> stage_names;
  auto side_stages = [&](SidePlan& side, const std::string& prefix) {
    std::vector<std::string> names;
    side.f_stage.assign(side.fanout + 1, -1);
    side.p_stage.assign(side.depth + 1, -1);
    side.c_stage.assign(side.depth + 1, -1);
    for (int j = 1; j <= side.fanout; ++j) names.push_back(prefix + ".F" + std::to_string(j));
    for (int s = 1; s <= side.depth; ++s) {
      names.push_back(prefix + ".P" + std::to_string(s));
      names.push_back(prefix + ".C" + std::to_string(s));
    }
    return names;
  };
  auto left_names = side_stages(left, "L");
  auto right_names = side_stages(right, "R");
  for (auto it = left_names.rbegin(); it != left_names.rend(); ++it) stage_names.push_back(*it);
  const int s1 = static_cast<int>(stage_names.size());
  stage_names.push_back("S1");
  stage_names.push_back("S2");
  const int s2 = s1 + 1;
  for (const auto& nm : right_names) stage_names.push_back(nm);
  const int num_stages = static_cast<int>(stage_names.size());
  // Map the side-local stage numbers to global indices.
  for (int j = 1; j <= left.fanout; ++j) left.f_stage[j] = s1 - j;
  for (int s = 1; s <= left.depth; ++s) {
    left.p_stage[s] = s1 - left.fanout - 2 * s + 1;
    left.c_stage[s] = s1 - left.fanout - 2 * s;
  }
  for (int j = 1; j <= right.fanout; ++j) right.f_stage[j] = s2 + j;
  for (int s = 1; s <= right.depth; ++s) {
    right.p_stage[s] = s2 + right.fanout + 2 * s - 1;
    right.c_stage[s] = s2 + right.fanout + 2 * s;
  }

  // Greedy placement, bottom variable first; ceil[stage] is the highest used level.
  std::vector<int> ceil(num_stages, 0);
  std::vector<BlockSpec> blocks;
  std::map<std::size_t, std::size_t> var_block;
  // Path of each occurrence: (block index, port gate) pairs.
  std::map<std::pair<const SidePlan*, std::size_t>, std::vector<std::pair<std::size_t, std::string>>> paths;

  for (auto vit = by_x.rbegin(); vit != by_x.rend(); ++vit) {
    const std::size_t v = *vit;
    const std::string& vn = f.variables[v];
    std::vector<BlockSpec> mine;
    std::vector<Reserve> reserve;
    // Block-local path pieces keyed by side; indices are into `mine`.
    std::map<std::pair<const SidePlan*, std::size_t>, std::vector<std::pair<std::size_t, std::string>>> my_paths;
    auto add = [&](int stage, std::string label, std::string desc, int offset,
                   std::map<std::string, std::string> sig) {
      mine.push_back({stage, std::move(label), std::move(desc), offset, std::move(sig)});
      return mine.size() - 1;
    };
    const bool has_r = !right.var_edges[v].empty();
    const bool has_l = !left.var_edges[v].empty();
    int tau_r = 0, tau_l = 0;
    std::size_t probe_block = 0;
    std::vector<std::pair<std::size_t, std::string>> spine_r, spine_l;
    if (has_r && has_l) {
      auto k = add(s1, vn + ".copy", "copy", 0, {{"C1", vn}, {"C2", vn}, {"C3", vn}});
      probe_block = add(s2, vn + ".var", "variable/w=9/mirror", 5, {{"V4", vn}});
      auto w = add(s2, vn + ".wire", "extension:1/w=9", 1, {{"P1", vn}, {"P3", vn}});
      tau_l = 6;
      tau_r = 3;
      spine_r = {{probe_block, "V4"}, {k, "C2"}, {k, "C3"}, {w, "P1"}, {w, "P3"}};
      spine_l = {{probe_block, "V4"}, {k, "C2"}, {k, "C1"}};
    } else if (has_l) {
      probe_block = add(s1, vn + ".var", "variable/w=9/mirror", 0, {{"V4", vn}});
      tau_l = 2;
      spine_l = {{probe_block, "V4"}};
    } else {
      probe_block = add(s2, vn + ".var", "variable/w=9", 0, {{"V4", vn}});
      tau_r = 2;
      spine_r = {{probe_block, "V4"}};
    }

    for (auto* side : {&right, &left}) {
      const auto& ev = side->var_edges[v];
      if (ev.empty()) continue;
      const bool mir = side->mirrored;
      const int tau = mir ? tau_l : tau_r;
      const auto& spine = mir ? spine_l : spine_r;
      const int r = static_cast<int>(ev.size());
      // Fan-out j splits the rest track R_j into e_j = R_j + 1 and
      // R_{j+1} = R_j - 3 - 2k with a copy stretched by k. A one-literal
      // clause hangs its dummies below its input, so it needs the wider gap.
      std::vector<int> rest(r + 1), stretch(r + 1, 0), track(r);
      rest[1] = tau;
      for (int j = 1; j < r; ++j) {
        const bool lone = side->clause_edges.at(side->edges[ev[j - 1]].clause).size() == 1;
        stretch[j] = lone ? 5 : 1;
        rest[j + 1] = rest[j] - 3 - 2 * stretch[j];
        track[j - 1] = rest[j] + 1;
      }
      track[r - 1] = rest[r];
      std::vector<std::vector<std::pair<std::size_t, std::string>>> path(r, spine);
      auto edge_label = [&](int j) {
        return vn + "-" + f.clause_name(side->edges[ev[j]].clause);
      };
      auto wire = [&](int stage, int j) {
        auto b = add(stage, edge_label(j) + ".wire", with_side("extension:1/w=9", mir), track[j] - 2,
                     {{"P1", vn}, {"P3", vn}});
        path[j].push_back({b, mir ? "P3" : "P1"});
        path[j].push_back({b, mir ? "P1" : "P3"});
      };
      for (int j = 1; j <= side->fanout; ++j) {
        const int st = side->f_stage[j];
        if (j < r) {
          const int k = stretch[j];
          auto b = add(st, vn + ".copy", with_side("copy:" + std::to_string(k), mir), rest[j] - 6 - 2 * k,
                       {{"C1", vn}, {"C2", vn}, {"C3", vn}});
          // Every later occurrence passes this copy on its rest track.
          for (int q = j - 1; q < r; ++q) {
            path[q].push_back({b, "C1"});
            path[q].push_back({b, q == j - 1 ? "C2" : "C3"});
          }
          for (int q = 0; q < j - 1; ++q) wire(st, q);
        } else {
          for (int q = 0; q < r; ++q) wire(st, q);
        }
      }
      for (int j = 0; j < r; ++j) {
        auto& e = side->edges[ev[j]];
        e.track = track[j];
        const int hc = side->height.at(e.clause);
        for (int s = 1; s < hc; ++s) {
          wire(side->p_stage[s], j);
          wire(side->c_stage[s], j);
        }
        const int ps = side->p_stage[hc];
        const int t = track[j];
        if (e.neg) {
          auto b = add(ps, edge_label(j) + ".not", with_side("not/w=9", mir), t - 2,
                       {{"N2", vn}, {"N3", lit_name(vn, true)}});
          path[j].push_back({b, "N2"});
          path[j].push_back({b, "N3"});
        } else {
          wire(ps, j);
        }
        // Clause-stage reservation and dummies hang off the lowest input.
        const auto& ce = side->clause_edges.at(e.clause);
        const std::string cn = f.clause_name(e.clause);
        const int cs = side->c_stage[hc];
        if (ce.size() == 1) {
          add(ps, cn + ".dummy1", with_side("dummy-variable/w=9", mir), t - 6, {{"V4", "0"}});
          add(ps, cn + ".dummy2", with_side("dummy-variable/w=9", mir), t - 10, {{"V4", "0"}});
          reserve.push_back({cs, t - 9, t + 2});
        } else {
          if (ce.size() == 2 && ce.back() == ev[j])
            add(ps, cn + ".dummy1", with_side("dummy-variable/w=9", mir), t + 2, {{"V4", "0"}});
          reserve.push_back({cs, t - 1, t + 2});
        }
        my_paths[{side, ev[j]}] = path[j];
      }
    }

    // Lowest anchor that keeps every piece above the stage ceilings.
    int o = 0;
    for (const auto& b : mine) {
      o = std::max(o, ceil[b.stage] - b.offset);
    }
    for (const auto& rs : reserve) o = std::max(o, ceil[rs.stage] + 1 - rs.lo);
    for (const auto& b : mine) o = std::max(o, -b.offset);
    const std::size_t base = blocks.size();
    for (auto& b : mine) {
      b.offset += o;
      const int top = b.offset + cached_gadget(b.desc).height;
      ceil[b.stage] = std::max(ceil[b.stage], top);
      blocks.push_back(std::move(b));
    }
    for (const auto& rs : reserve) ceil[rs.stage] = std::max(ceil[rs.stage], rs.hi + o);
    for (auto* side : {&right, &left})
      for (auto e : side->var_edges[v]) side->edges[e].track += o;
    for (auto& [key, p] : my_paths) {
      for (auto& step : p) step.first += base;
      paths[key] = std::move(p);
    }
    var_block[v] = base + probe_block;
  }

  // Clause blocks, once all tracks are known.
  for (auto* side : {&right, &left}) {
    for (const auto& [c, ce] : side->clause_edges) {
      const std::string cn = f.clause_name(c);
      std::vector<int> t;
      for (auto e : ce) t.push_back(side->edges[e].track);
      // Inputs top-down: Xi, Xj, Xk.
      std::vector<std::pair<std::string, std::string>> sig;  // port -> literal
      int ti, tj, tk;
      auto lit_of = [&](std::size_t e) {
        const auto& se = side->edges[e];
        return lit_name(f.variables[se.var], se.neg);
      };
      std::map<std::string, std::string> ports;
      if (ce.size() == 3) {
        ti = t[0], tj = t[1], tk = t[2];
        ports = {{"Xi", lit_of(ce[0])}, {"Xj", lit_of(ce[1])}, {"Xk", lit_of(ce[2])}};
      } else if (ce.size() == 2) {
        ti = t[0], tk = t[1], tj = tk + 4;
        ports = {{"Xi", lit_of(ce[0])}, {"Xj", "0"}, {"Xk", lit_of(ce[1])}};
      } else {
        ti = t[0], tj = ti - 4, tk = ti - 8;
        ports = {{"Xi", lit_of(ce[0])}, {"Xj", "0"}, {"Xk", "0"}};
      }
      const int a = tj - tk - 4, b = ti - tj - 3;
      if (a < 0 || b < 0)
        throw Error(ErrorCode::RoutingFailure, "inputs of " + cn + " are too close together");
      const std::string desc = with_side("clause:" + std::to_string(a) + ":" + std::to_string(b), side->mirrored);
      blocks.push_back({side->c_stage[side->height.at(c)], cn + ".clause", desc, tk - 2, ports});
      const std::size_t cb = blocks.size() - 1;
      const char* names[3] = {"Xi", "Xj", "Xk"};
      std::size_t real = 0;
      for (int k = 0; k < 3; ++k) {
        if (ports[names[k]] == "0") continue;
        paths[{side, ce[real++]}].push_back({cb, names[k]});
      }
    }
  }

  // Stage heights and overlap check.
  int H = 0;
  std::vector<std::vector<std::size_t>> in_stage(num_stages);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    in_stage[blocks[i].stage].push_back(i);
    H = std::max(H, blocks[i].offset + cached_gadget(blocks[i].desc).height);
  }
  for (auto& list : in_stage) {
    std::sort(list.begin(), list.end(), [&](auto a, auto b) { return blocks[a].offset < blocks[b].offset; });
    for (std::size_t k = 1; k < list.size(); ++k) {
      const auto& p = blocks[list[k - 1]];
      if (p.offset + cached_gadget(p.desc).height > blocks[list[k]].offset)
        throw Error(ErrorCode::RoutingFailure, "blocks " + p.label + " and " + blocks[list[k]].label + " collide");
    }
  }

  // Columns: frame, gap, stages separated by gaps, gap, frame.
  const int W = num_stages * (kStageWidth + 1) + 3;
  const int B = W - 1;  // level of the fixing gadget's top gate
  auto stage_col = [&](int s) { return 3 + s * (kStageWidth + 1); };

  CompiledInstance out;
  out.formula = f;
  out.stage_count = num_stages;
  out.stage_height = H;
  out.h = B + H;

  struct Pending {
    GateId id;
    std::set<int> cols;
    int level;
    std::string tag;
  };
  std::vector<Pending> gates;
  std::map<GateId, std::size_t> gate_pos;
  // per column: (drawn level, gate id)
  std::vector<std::vector<std::pair<int, GateId>>> column(W + 1);
  auto add_gate = [&](const GateId& id, int lo, int hi, int level, const std::string& tag) {
    gate_pos[id] = gates.size();
    Pending p{id, {}, level, tag};
    for (int c = lo; c <= hi; ++c) {
      p.cols.insert(c);
      column[c].push_back({level, id});
    }
    gates.push_back(std::move(p));
  };

  {
    GadgetPlacement fix{"fixing:" + std::to_string(W), 0, 0, {}, {}, "fixing gadget"};
    for (const auto& g : fixing_gadget(W).gates) {
      const GateId id = "fix/" + g.id;
      add_gate(id, g.lo, g.hi, g.level, "fixed");
      fix.instance_gate_ids[g.id] = id;
    }
    out.placements.push_back(std::move(fix));
  }
  for (int l = 1; l <= H; ++l) {
    const GateId a = "frame.L/" + std::to_string(l), b = "frame.R/" + std::to_string(l);
    add_gate(a, 1, 1, B + l, "filler");
    add_gate(b, W, W, B + l, "filler");
    out.filler_levels[a] = B + l;
    out.filler_levels[b] = B + l;
  }

  std::vector<std::size_t> placement_of(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    const Gadget& g = cached_gadget(b.desc);
    const std::string prefix = stage_names[b.stage] + "/" + b.label + "/";
    GadgetPlacement pl{b.desc, stage_col(b.stage) - 1, B + b.offset, {}, b.signals, b.label};
    for (const auto& x : g.gates) {
      const GateId id = prefix + x.id;
      pl.instance_gate_ids[x.id] = id;
      add_gate(id, pl.column_offset + x.lo, pl.column_offset + x.hi, pl.level_offset + x.level,
               role_name(x.role));
    }
    placement_of[i] = out.placements.size();
    out.placements.push_back(std::move(pl));
  }
  for (int s = 0; s < num_stages; ++s) {
    std::vector<char> used(H + 1, 0);
    for (auto i : in_stage[s]) {
      const auto& b = blocks[i];
      for (int l = b.offset + 1; l <= b.offset + cached_gadget(b.desc).height; ++l) used[l] = 1;
    }
    for (int l = 1; l <= H; ++l)
      if (!used[l]) {
        const GateId id = stage_names[s] + "/fill/" + std::to_string(l);
        add_gate(id, stage_col(s), stage_col(s) + kStageWidth - 1, B + l, "filler");
        out.filler_levels[id] = B + l;
      }
  }

  // Nets: a right-side port meets a left-side port of the next stage in the same band.
  auto lower_level = [&](std::size_t bi, const std::string& gid) {
    const auto& x = cached_gadget(blocks[bi].desc).gate(gid);
    return B + blocks[bi].offset + x.canonical_levels.front();
  };
  std::map<GateId, GateId> alias;
  std::set<std::pair<std::size_t, std::string>> matched;
  std::set<std::size_t> lone_blocks;
  for (std::size_t v = 0; v < nv; ++v)
    if (right.var_edges[v].empty() && left.var_edges[v].empty()) lone_blocks.insert(var_block.at(v));
  for (int s = 0; s + 1 < num_stages; ++s) {
    std::map<int, std::pair<std::size_t, std::string>> outs, ins;
    for (auto i : in_stage[s])
      for (const auto& p : cached_gadget(blocks[i].desc).ports)
        if (p.side == Side::Right) outs[lower_level(i, p.gate)] = {i, p.gate};
    for (auto i : in_stage[s + 1])
      for (const auto& p : cached_gadget(blocks[i].desc).ports)
        if (p.side == Side::Left) ins[lower_level(i, p.gate)] = {i, p.gate};
    for (const auto& [lvl, a] : outs) {
      auto it = ins.find(lvl);
      if (it == ins.end()) continue;
      const auto& b = it->second;
      const GateId ida = out.placements[placement_of[a.first]].instance_gate_ids.at(a.second);
      const GateId idb = out.placements[placement_of[b.first]].instance_gate_ids.at(b.second);
      alias[idb] = ida;
      out.placements[placement_of[b.first]].instance_gate_ids[b.second] = ida;
      matched.insert(a);
      matched.insert(b);
      const int gap = stage_col(s) + kStageWidth;
      column[gap].push_back({gates[gate_pos.at(ida)].level, ida});
    }
  }
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (const auto& p : cached_gadget(blocks[i].desc).ports) {
      if (p.side != Side::Left && p.side != Side::Right) continue;
      if (matched.count({i, p.gate})) continue;
      // Only the output of a variable with no occurrences may stay open.
      if (!lone_blocks.count(i))
        throw Error(ErrorCode::RoutingFailure, "port " + p.gate + " of " + blocks[i].label + " is unconnected");
    }

  // Assemble gates (nets take the columns of both ports and the gap between).
  std::vector<Gate> final_gates;
  std::map<GateId, std::size_t> final_pos;
  for (const auto& g : gates) {
    if (alias.count(g.id)) continue;
    final_pos[g.id] = final_gates.size();
    final_gates.push_back({g.id, std::vector<int>(g.cols.begin(), g.cols.end()), g.tag});
  }
  for (const auto& [from, to] : alias) {
    auto& dst = final_gates[final_pos.at(to)].qubits;
    std::set<int> cols(dst.begin(), dst.end());
    for (int c : gates[gate_pos.at(from)].cols) cols.insert(c);
    // The gap column sits between the two ports.
    int lo = *cols.begin(), hi = *cols.rbegin();
    for (int c = lo; c <= hi; ++c) cols.insert(c);
    dst.assign(cols.begin(), cols.end());
    final_gates[final_pos.at(to)].tag = "movable";
  }
  std::vector<std::vector<GateId>> orders(W);
  for (int c = 1; c <= W; ++c) {
    auto& col = column[c];
    std::sort(col.begin(), col.end());
    for (auto& [lvl, id] : col) {
      auto it = alias.find(id);
      orders[c - 1].push_back(it == alias.end() ? id : it->second);
    }
  }
  out.instance = Instance(W, std::move(final_gates), std::move(orders));

  for (std::size_t v = 0; v < nv; ++v) {
    out.variable_block[f.variables[v]] = placement_of[var_block.at(v)];
    out.variable_probe[f.variables[v]] = out.placements[placement_of[var_block.at(v)]].instance_gate_ids.at("V4");
  }
  for (const auto& [key, p] : paths) {
    const auto& se = key.first->edges[key.second];
    std::vector<GateId> chain;
    for (const auto& [bi, gid] : p) {
      const GateId id = out.placements[placement_of[bi]].instance_gate_ids.at(gid);
      if (chain.empty() || chain.back() != id) chain.push_back(id);
    }
    out.signal_map[f.variables[se.var] + "->" + f.clause_name(se.clause)] = std::move(chain);
  }
  return out;
}

inline CompiledInstance compile(const RectilinearInstance& ri) { return compile(ri.formula, ri.drawing); }

struct WitnessResult {
  Packing packing;
  /// True when some clause gadget could not be packed (the packing then fails verification).
  bool flagged = false;
  std::vector<std::string> falsified;
};

namespace detail {

inline bool literal_value(const std::string& lit, const Assignment& a) {
  if (lit == "0") return false;
  if (!lit.empty() && lit[0] == '!') return !a.at(lit.substr(1));
  return a.at(lit);
}

// Levels of a gadget under the identity order with the given port states,
// or nothing when no minimum packing has them.
inline std::optional<std::vector<int>> block_levels(const Gadget& g, const std::map<std::string, bool>& states) {
  static thread_local std::map<std::string, std::optional<std::vector<int>>> cache;
  std::string key = g.name + "|" + std::to_string(g.width) + "x" + std::to_string(g.height);
  for (const auto& x : g.gates) key += "," + std::to_string(x.lo) + "-" + std::to_string(x.hi);
  for (const auto& [p, s] : states) key += "|" + p + (s ? "1" : "0");
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  SearchLimits lim;
  lim.fixed_pi = identity_permutation(g.width);
  lim.workers = 1;
  for (const auto& [p, s] : states) {
    const auto& lv = g.gate(p).canonical_levels;
    lim.pinned_levels[p] = {s ? lv.back() : lv.front()};
  }
  std::optional<std::vector<int>> found;
  enumerate_packings(g.instantiate(), g.height, lim, [&](const std::vector<int>&, const std::vector<int>& lv) {
    found = lv;
    return false;
  });
  cache[key] = found;
  return found;
}

}  // namespace detail

/**
 * Packing built from an assignment: identity order, every gadget in a minimum
 * packing agreeing with the propagated signals. A clause with no true input
 * keeps its drawn shape with all inputs lowered, which breaks verification.
 */
inline WitnessResult witness_packing(const CompiledInstance& ci, const Assignment& a) {
  for (const auto& v : ci.formula.variables)
    if (!a.count(v)) throw Error(ErrorCode::IncompleteAssignment, "no value for variable '" + v + "'");
  WitnessResult res;
  res.packing.pi = identity_permutation(ci.instance.num_qubits());
  auto& mu = res.packing.mu;
  for (const auto& [id, l] : ci.filler_levels) mu[id] = l;
  for (const auto& pl : ci.placements) {
    const Gadget& g = detail::cached_gadget(pl.gadget);
    std::map<std::string, bool> states;
    for (const auto& [port, lit] : pl.port_signals) states[port] = detail::literal_value(lit, a);
    std::vector<int> levels;
    bool drawn_ok = true;
    for (const auto& [port, s] : states) {
      const auto& x = g.gate(port);
      drawn_ok = drawn_ok && x.level == (s ? x.canonical_levels.back() : x.canonical_levels.front());
    }
    if (drawn_ok) {
      for (const auto& x : g.gates) levels.push_back(x.level);
    } else if (auto lv = detail::block_levels(g, states)) {
      levels = *lv;
    } else {
      res.flagged = true;
      res.falsified.push_back(pl.label);
      for (const auto& x : g.gates) {
        auto it = states.find(x.id);
        levels.push_back(it == states.end() ? x.level
                                            : (it->second ? x.canonical_levels.back() : x.canonical_levels.front()));
      }
    }
    for (std::size_t i = 0; i < g.gates.size(); ++i) {
      const GateId& id = pl.instance_gate_ids.at(g.gates[i].id);
      const int level = pl.level_offset + levels[i];
      auto [it, fresh] = mu.emplace(id, level);
      if (!fresh && it->second != level)
        throw std::logic_error("net " + id + " gets two different levels");
    }
  }
  return res;
}

/// Reads each variable's value off its probe gate.
inline Assignment extract_assignment(const CompiledInstance& ci, const Packing& p) {
  Assignment out;
  for (const auto& [var, idx] : ci.variable_block) {
    const auto& pl = ci.placements.at(idx);
    const auto& probe = detail::cached_gadget(pl.gadget).gate("V4");
    auto it = p.mu.find(ci.variable_probe.at(var));
    if (it == p.mu.end()) throw Error(ErrorCode::NonCanonicalLevel, "probe of '" + var + "' has no level");
    const int rel = it->second - pl.level_offset;
    if (rel == probe.canonical_levels.back()) {
      out[var] = true;
    } else if (rel == probe.canonical_levels.front()) {
      out[var] = false;
    } else {
      throw Error(ErrorCode::NonCanonicalLevel,
                  "probe of '" + var + "' sits at relative level " + std::to_string(rel));
    }
  }
  return out;
}

}  // namespace braidpack
