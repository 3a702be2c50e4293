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
#include <string>
#include <utility>
#include <vector>

#include "braidpack/core.hpp"
#include "braidpack/error.hpp"
#include "braidpack/exact.hpp"

namespace braidpack {

enum class GateRole { Fixed, Movable, Filler };

inline const char* role_name(GateRole r) {
  switch (r) {
    case GateRole::Fixed: return "fixed";
    case GateRole::Movable: return "movable";
    case GateRole::Filler: return "filler";
  }
  return "?";
}

enum class Side { Left, Right, Top, Bottom };
enum class Polarity { Input, Output };

inline const char* side_name(Side s) {
  switch (s) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Top: return "top";
    case Side::Bottom: return "bottom";
  }
  return "?";
}

/// One gate of a gadget: columns [lo, hi] (1-based, gadget-local), the level
/// it is drawn at, and the levels it may take in minimum packings.
struct GadgetGate {
  std::string id;
  int lo = 1;
  int hi = 1;
  int level = 1;
  GateRole role = GateRole::Fixed;
  std::vector<int> canonical_levels;

  friend bool operator==(const GadgetGate&, const GadgetGate&) = default;
};

struct Port {
  std::string gate;
  Side side = Side::Left;
  Polarity polarity = Polarity::Input;

  friend bool operator==(const Port&, const Port&) = default;
};

/**
 * A reusable block of gates. Column orders follow the drawn levels (bottom to
 * top), so the drawn picture is always one valid packing of the gadget.
 * Movable gates list their two canonical levels as {lower, upper}; upper
 * encodes "true".
 */
struct Gadget {
  std::string name;
  int width = 0;
  int height = 0;
  std::vector<GadgetGate> gates;
  std::vector<Port> ports;

  const GadgetGate& gate(const std::string& id) const {
    for (const auto& g : gates)
      if (g.id == id) return g;
    throw Error(ErrorCode::UnknownGateId, name + " has no gate '" + id + "'");
  }

  std::vector<std::string> movables() const {
    std::vector<std::string> out;
    for (const auto& g : gates)
      if (g.role == GateRole::Movable) out.push_back(g.id);
    return out;
  }

  /// Per-column gate ids, bottom to top.
  std::vector<std::vector<std::string>> column_orders() const {
    std::vector<std::vector<const GadgetGate*>> cols(width);
    for (const auto& g : gates)
      for (int c = g.lo; c <= g.hi; ++c) cols.at(c - 1).push_back(&g);
    std::vector<std::vector<std::string>> out(width);
    for (int c = 0; c < width; ++c) {
      auto& v = cols[c];
      std::sort(v.begin(), v.end(), [](auto* a, auto* b) { return a->level < b->level; });
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k > 0 && v[k]->level == v[k - 1]->level)
          throw Error(ErrorCode::InvalidInstance, name + ": gates '" + v[k - 1]->id + "' and '" +
                                                      v[k]->id + "' share column " +
                                                      std::to_string(c + 1) + " at one level");
        out[c].push_back(v[k]->id);
      }
    }
    return out;
  }

  /// The gadget on its own, qubits = columns.
  Instance instantiate() const {
    std::vector<Gate> gs;
    for (const auto& g : gates) {
      Gate x{g.id, {}, std::string(role_name(g.role))};
      for (int c = g.lo; c <= g.hi; ++c) x.qubits.push_back(c);
      gs.push_back(std::move(x));
    }
    return Instance(width, std::move(gs), column_orders());
  }

  /// Identity order with every gate at its drawn level.
  Packing drawn_packing() const {
    Packing p{identity_permutation(width), {}};
    for (const auto& g : gates) p.mu[g.id] = g.level;
    return p;
  }
};

namespace detail {

struct Row {
  const char* id;
  int lo, hi, level;
  GateRole role;
  std::vector<int> levels;  // canonical levels; empty = {level}
};

inline Gadget make_gadget(std::string name, int width, int height, const std::vector<Row>& rows,
                          std::vector<Port> ports) {
  Gadget g{std::move(name), width, height, {}, std::move(ports)};
  for (const auto& r : rows)
    g.gates.push_back({r.id, r.lo, r.hi, r.level, r.role,
                       r.levels.empty() ? std::vector<int>{r.level} : r.levels});
  return g;
}

constexpr GateRole F = GateRole::Fixed;
constexpr GateRole M = GateRole::Movable;
constexpr GateRole I = GateRole::Filler;

}  // namespace detail

// Geometry below is transcribed from the gadget drawings: a bar drawn between
// vertical lines l and r covers the columns strictly inside, and its row y
// (0-based from the bottom) becomes level y + 1.

inline Gadget variable_gadget() {
  using namespace detail;
  return make_gadget("variable", 3, 4,
                     {{"V1", 1, 3, 1, F, {}},
                      {"V2", 1, 1, 2, F, {}},
                      {"V3", 1, 1, 3, F, {}},
                      {"V4", 3, 3, 3, M, {2, 3}},
                      {"V5", 1, 3, 4, F, {}}},
                     {{"V4", Side::Right, Polarity::Output}});
}

/// Variable gadget whose movable gate is held at its lower (false) level by an
/// extra gate stacked above it.
inline Gadget dummy_variable_gadget() {
  using namespace detail;
  return make_gadget("dummy-variable", 3, 4,
                     {{"V1", 1, 3, 1, F, {}},
                      {"V2", 1, 1, 2, F, {}},
                      {"V3", 1, 1, 3, F, {}},
                      {"V4", 3, 3, 2, M, {2}},
                      {"D1", 3, 3, 3, F, {}},
                      {"V5", 1, 3, 4, F, {}}},
                     {{"V4", Side::Right, Polarity::Output}});
}

inline Gadget not_gadget() {
  using namespace detail;
  return make_gadget("not", 4, 4,
                     {{"N1", 1, 4, 1, F, {}},
                      {"N5", 2, 2, 2, I, {2, 3}},
                      {"N3", 4, 4, 2, M, {2, 3}},
                      {"N2", 1, 1, 3, M, {2, 3}},
                      {"N4", 3, 3, 3, I, {2, 3}},
                      {"N6", 1, 4, 4, F, {}}},
                     {{"N2", Side::Left, Polarity::Input}, {"N3", Side::Right, Polarity::Output}});
}

inline Gadget clause_gadget() {
  using namespace detail;
  return make_gadget("clause", 9, 11,
                     {{"F1", 1, 9, 1, F, {}},
                      {"F2", 9, 9, 2, F, {}},
                      {"I1", 2, 2, 2, I, {2, 3}},
                      {"I2", 6, 7, 2, I, {2, 3, 4}},
                      {"Xk", 1, 1, 3, M, {2, 3}},
                      {"F3", 9, 9, 3, F, {}},
                      {"I3", 3, 5, 3, I, {2, 3}},
                      {"I4", 7, 7, 3, I, {3, 4, 5}},
                      {"F4", 1, 4, 4, F, {}},
                      {"F5", 9, 9, 4, F, {}},
                      {"I5", 6, 7, 4, I, {4, 5, 6}},
                      {"F6", 1, 2, 5, F, {}},
                      {"F7", 9, 9, 5, F, {}},
                      {"F8", 9, 9, 6, F, {}},
                      {"I6", 2, 2, 6, I, {6, 7}},
                      {"I7", 4, 5, 6, I, {5, 6}},
                      {"Xj", 1, 1, 7, M, {6, 7}},
                      {"F9", 9, 9, 7, F, {}},
                      {"I8", 3, 4, 7, I, {6, 7}},
                      {"I9", 7, 7, 7, I, {5, 6, 7}},
                      {"F10", 1, 5, 8, F, {}},
                      {"F11", 9, 9, 8, F, {}},
                      {"I10", 7, 7, 8, I, {6, 7, 8}},
                      {"F12", 9, 9, 9, F, {}},
                      {"I11", 2, 2, 9, I, {9, 10}},
                      {"I12", 7, 7, 9, I, {7, 8, 9}},
                      {"Xi", 1, 1, 10, M, {9, 10}},
                      {"F13", 9, 9, 10, F, {}},
                      {"I13", 3, 7, 10, I, {9, 10}},
                      {"F14", 1, 9, 11, F, {}}},
                     {{"Xi", Side::Left, Polarity::Input},
                      {"Xj", Side::Left, Polarity::Input},
                      {"Xk", Side::Left, Polarity::Input}});
}

inline Gadget copy_gadget() {
  using namespace detail;
  return make_gadget("copy", 9, 10,
                     {{"F1", 1, 9, 1, F, {}},
                      {"F2", 1, 1, 2, F, {}},
                      {"F3", 8, 9, 2, F, {}},
                      {"I1", 3, 4, 2, I, {2, 3}},
                      {"F4", 1, 1, 3, F, {}},
                      {"I2", 3, 3, 3, I, {3, 4}},
                      {"I3", 5, 6, 3, I, {2, 3}},
                      {"I4", 8, 8, 3, I, {3, 4}},
                      {"F5", 1, 1, 4, F, {}},
                      {"I5", 3, 4, 4, I, {4, 5}},
                      {"I6", 6, 7, 4, I, {3, 4}},
                      {"C3", 9, 9, 4, M, {3, 4}},
                      {"F6", 1, 1, 5, F, {}},
                      {"F7", 8, 9, 5, F, {}},
                      {"I7", 3, 3, 5, I, {5, 6}},
                      {"I8", 5, 6, 5, I, {4, 5}},
                      {"F8", 8, 9, 6, F, {}},
                      {"I9", 2, 4, 6, I, {6, 7}},
                      {"I10", 6, 6, 6, I, {5, 6}},
                      {"C1", 1, 1, 7, M, {6, 7}},
                      {"I11", 3, 3, 7, I, {7, 8}},
                      {"I12", 5, 6, 7, I, {6, 7}},
                      {"I13", 8, 8, 7, I, {7, 8}},
                      {"F9", 1, 1, 8, F, {}},
                      {"I14", 3, 4, 8, I, {8, 9}},
                      {"I15", 6, 7, 8, I, {7, 8}},
                      {"C2", 9, 9, 8, M, {7, 8}},
                      {"F10", 1, 1, 9, F, {}},
                      {"F11", 8, 9, 9, F, {}},
                      {"I16", 5, 6, 9, I, {8, 9}},
                      {"F12", 1, 9, 10, F, {}}},
                     {{"C1", Side::Left, Polarity::Input},
                      {"C2", Side::Right, Polarity::Output},
                      {"C3", Side::Right, Polarity::Output}});
}

inline Gadget bending_gadget() {
  using namespace detail;
  return make_gadget("bending", 10, 8,
                     {{"F1", 1, 10, 1, F, {}},
                      {"F2", 1, 3, 2, F, {}},
                      {"F3", 10, 10, 2, F, {}},
                      {"I1", 5, 6, 2, I, {2, 3}},
                      {"F4", 10, 10, 3, F, {}},
                      {"I2", 2, 2, 3, I, {3, 4}},
                      {"I3", 4, 5, 3, I, {3, 4}},
                      {"I4", 7, 8, 3, I, {2, 3}},
                      {"B2", 1, 1, 4, M, {3, 4}},
                      {"F5", 10, 10, 4, F, {}},
                      {"I5", 3, 3, 4, I, {3, 4}},
                      {"I6", 5, 6, 4, I, {4, 5}},
                      {"I7", 8, 8, 4, I, {3, 4}},
                      {"F6", 1, 3, 5, F, {}},
                      {"F7", 10, 10, 5, F, {}},
                      {"I8", 5, 5, 5, I, {5, 6}},
                      {"I9", 7, 8, 5, I, {4, 5}},
                      {"F8", 10, 10, 6, F, {}},
                      {"I10", 2, 2, 6, I, {6, 7}},
                      {"I11", 4, 6, 6, I, {6, 7}},
                      {"I12", 8, 8, 6, I, {5, 6}},
                      {"B1", 1, 1, 7, M, {6, 7}},
                      {"F9", 10, 10, 7, F, {}},
                      {"I13", 3, 3, 7, I, {6, 7}},
                      {"I14", 7, 8, 7, I, {6, 7}},
                      {"F10", 1, 10, 8, F, {}}},
                     {{"B1", Side::Left, Polarity::Input}, {"B2", Side::Left, Polarity::Output}});
}

/// Forces the identity column order (or its mirror): a full gate on top and,
/// at level i, the pair {1..i}, {i+2..n} with a one-column gap.
inline Gadget fixing_gadget(int n) {
  if (n < 3) throw Error(ErrorCode::InvalidN, "fixing gadget needs n >= 3");
  Gadget g{"fixing", n, n - 1, {}, {}};
  for (int i = 1; i <= n - 2; ++i) {
    g.gates.push_back({"L" + std::to_string(i), 1, i, i, GateRole::Fixed, {i}});
    g.gates.push_back({"R" + std::to_string(i), i + 2, n, i, GateRole::Fixed, {i}});
  }
  g.gates.push_back({"T", 1, n, n - 1, GateRole::Fixed, {n - 1}});
  return g;
}

/// Straight signal corridor of 2*length+1 alternating one-column pieces
/// between two full bars. Odd pieces share the state of the entry piece.
inline Gadget extension_gadget(int length) {
  if (length < 1) throw Error(ErrorCode::InvalidN, "extension length must be >= 1");
  const int w = 2 * length + 1;
  Gadget g{"extension", w, 4, {}, {}};
  g.gates.push_back({"F1", 1, w, 1, GateRole::Fixed, {1}});
  for (int c = 1; c <= w; ++c) {
    GateRole role = (c == 1 || c == w) ? GateRole::Movable : GateRole::Filler;
    g.gates.push_back({"P" + std::to_string(c), c, c, c % 2 == 1 ? 3 : 2, role, {2, 3}});
  }
  g.gates.push_back({"F2", 1, w, 4, GateRole::Fixed, {4}});
  g.ports = {{"P1", Side::Left, Polarity::Input}, {"P" + std::to_string(w), Side::Right, Polarity::Output}};
  return g;
}

/// Inserts `times` copies of column `col` right after it. Row compatibility
/// of every pair of gates is unchanged under the identity order.
inline Gadget stretch_columns(const Gadget& g, int col, int times) {
  if (col < 1 || col > g.width || times < 0) throw Error(ErrorCode::InvalidN, "bad column stretch");
  Gadget out = g;
  out.width += times;
  for (auto& x : out.gates) {
    if (x.lo > col) x.lo += times;
    if (x.hi >= col) x.hi += times;
  }
  return out;
}

/// Widens a gadget to `width` columns by repeating its second column (or its
/// only column).
inline Gadget widen(const Gadget& g, int width) {
  if (width < g.width) throw Error(ErrorCode::InvalidN, "cannot narrow a gadget");
  if (width == g.width) return g;
  return stretch_columns(g, g.width >= 2 ? 2 : 1, width - g.width);
}

namespace detail {

// Repeats the band of rows [row, row+span-1] `times` times. Gates above the
// band shift up; gates inside it are copied. Movables must not sit in it.
inline Gadget stretch_band(const Gadget& g, int row, int span, int times) {
  if (row < 1 || row + span - 1 > g.height || times < 0)
    throw Error(ErrorCode::InvalidN, "bad row stretch");
  const int top = row + span - 1;
  const int shift = span * times;
  Gadget out{g.name, g.width, g.height + shift, {}, g.ports};
  auto moved = [&](std::vector<int> lv, int by) {
    for (auto& v : lv) v += by;
    return lv;
  };
  for (const auto& x : g.gates) {
    if (x.level > top) {
      GadgetGate y = x;
      y.level += shift;
      y.canonical_levels = moved(x.canonical_levels, shift);
      out.gates.push_back(std::move(y));
    } else if (x.level >= row) {
      if (x.role == GateRole::Movable)
        throw Error(ErrorCode::InvalidN, "cannot repeat a row holding movable '" + x.id + "'");
      out.gates.push_back(x);
      for (int t = 1; t <= times; ++t) {
        GadgetGate y = x;
        y.id = x.id + "." + std::to_string(t);
        y.level += span * t;
        y.canonical_levels = moved(x.canonical_levels, span * t);
        out.gates.push_back(std::move(y));
      }
    } else {
      out.gates.push_back(x);
    }
  }
  std::stable_sort(out.gates.begin(), out.gates.end(),
                   [](const GadgetGate& a, const GadgetGate& b) { return a.level < b.level; });
  return out;
}

}  // namespace detail

/// Repeats drawn row `row` `times` times (clause rows 4 and 8 stretch the
/// distances between its inputs).
inline Gadget stretch_rows(const Gadget& g, int row, int times) {
  return detail::stretch_band(g, row, 1, times);
}

/// Repeats the pair of drawn rows (row, row+1) `times` times (copy rows 5-6
/// move C1 and C2 up by two per repetition while C3 stays).
inline Gadget stretch_row_pair(const Gadget& g, int row, int times) {
  return detail::stretch_band(g, row, 2, times);
}

/// Left-right mirror image; port sides swap.
inline Gadget mirror(const Gadget& g) {
  Gadget out = g;
  for (auto& x : out.gates) {
    int lo = g.width + 1 - x.hi, hi = g.width + 1 - x.lo;
    x.lo = lo;
    x.hi = hi;
  }
  for (auto& p : out.ports) {
    if (p.side == Side::Left) p.side = Side::Right;
    else if (p.side == Side::Right) p.side = Side::Left;
  }
  return out;
}

/**
 * Recomputes height and canonical levels by enumerating every minimum packing
 * under the identity order. A fixed gate that turns out to take several
 * levels is demoted to filler.
 */
inline Gadget annotate_levels(Gadget g) {
  auto inst = g.instantiate();
  SearchLimits lim;
  lim.fixed_pi = identity_permutation(g.width);
  lim.workers = 1;
  auto best = min_height(inst, lim);
  if (!best.feasible) throw Error(ErrorCode::InvalidInstance, g.name + " admits no packing");
  g.height = *best.best_height;
  std::vector<std::vector<char>> seen(g.gates.size(), std::vector<char>(g.height + 1, 0));
  enumerate_packings(inst, g.height, lim, [&](const std::vector<int>&, const std::vector<int>& lv) {
    for (std::size_t i = 0; i < lv.size(); ++i) seen[i][lv[i]] = 1;  // gate order is kept
    return true;
  });
  for (std::size_t i = 0; i < g.gates.size(); ++i) {
    auto& x = g.gates[i];
    const auto& row = seen[i];
    x.canonical_levels.clear();
    for (int l = 1; l <= g.height; ++l)
      if (row[l]) x.canonical_levels.push_back(l);
    if (x.role == GateRole::Fixed && x.canonical_levels.size() > 1) x.role = GateRole::Filler;
  }
  return g;
}

/// Clause gadget with its inputs pulled apart: Xj-Xk grows by `a`, Xi-Xj by `b`.
inline Gadget stretched_clause(int a, int b) {
  if (a == 0 && b == 0) return clause_gadget();
  return annotate_levels(stretch_rows(stretch_rows(clause_gadget(), 8, b), 4, a));
}

/// Copy gadget whose lower output C3 sits 2k further below the other ports.
inline Gadget stretched_copy(int k) {
  if (k == 0) return copy_gadget();
  return annotate_levels(stretch_row_pair(copy_gadget(), 5, k));
}

/// All base gadgets shipped as data files (fixing gadget at n = 6).
inline std::vector<Gadget> base_gadgets() {
  return {variable_gadget(), clause_gadget(),     not_gadget(),         copy_gadget(),
          bending_gadget(),  fixing_gadget(6),    extension_gadget(1),  dummy_variable_gadget()};
}

/// Gadget placed in a larger instance.
struct GadgetPlacement {
  std::string gadget;  // descriptor understood by build_gadget()
  int column_offset = 0;
  int level_offset = 0;
  std::map<std::string, std::string> instance_gate_ids;
  /// Literal carried by each port ("x1", "!x1", or "0" for constant false).
  std::map<std::string, std::string> port_signals;
  std::string label;

  friend bool operator==(const GadgetPlacement&, const GadgetPlacement&) = default;
};

/**
 * Builds a gadget from a descriptor such as "copy", "clause:2:1", "copy:1",
 * "extension:1", "fixing:12", optionally followed by "/w=9" (widen) and
 * "/mirror". Descriptors make placements serializable.
 */
inline Gadget build_gadget(const std::string& desc) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto slash = desc.find('/', start);
    parts.push_back(desc.substr(start, slash - start));
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
  std::vector<std::string> head;
  start = 0;
  while (true) {
    auto colon = parts[0].find(':', start);
    head.push_back(parts[0].substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  auto arg = [&](std::size_t i, int def) {
    if (head.size() <= i) return def;
    try {
      return std::stoi(head[i]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidN, "bad gadget descriptor '" + desc + "'");
    }
  };
  const auto& kind = head[0];
  Gadget g;
  if (kind == "variable") g = variable_gadget();
  else if (kind == "dummy-variable") g = dummy_variable_gadget();
  else if (kind == "not") g = not_gadget();
  else if (kind == "clause") g = stretched_clause(arg(1, 0), arg(2, 0));
  else if (kind == "copy") g = stretched_copy(arg(1, 0));
  else if (kind == "bending") g = bending_gadget();
  else if (kind == "fixing") g = fixing_gadget(arg(1, 3));
  else if (kind == "extension") g = extension_gadget(arg(1, 1));
  else throw Error(ErrorCode::InvalidN, "unknown gadget '" + kind + "'");
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i] == "mirror") g = mirror(g);
    else if (parts[i].rfind("w=", 0) == 0) g = widen(g, std::stoi(parts[i].substr(2)));
    else throw Error(ErrorCode::InvalidN, "bad gadget modifier '" + parts[i] + "'");
  }
  return g;
}

}  // namespace braidpack
