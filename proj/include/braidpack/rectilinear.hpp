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
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "braidpack/error.hpp"

namespace braidpack {

struct Literal {
  std::string var;
  bool neg = false;
  friend bool operator==(const Literal&, const Literal&) = default;
};

/// 3-CNF formula. Clause i is named clause_names[i] (default "C<i+1>").
struct Formula {
  std::vector<std::string> variables;
  std::vector<std::vector<Literal>> clauses;
  std::vector<std::string> clause_names;

  std::string clause_name(std::size_t i) const {
    return i < clause_names.size() ? clause_names[i] : "C" + std::to_string(i + 1);
  }
  friend bool operator==(const Formula&, const Formula&) = default;
};

struct Box {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  friend bool operator==(const Box&, const Box&) = default;
};

/// Vertical segment at column x from a variable box to a clause box.
struct DrawnEdge {
  std::string var;
  std::string clause;
  int x = 0;
  bool neg = false;
  friend bool operator==(const DrawnEdge&, const DrawnEdge&) = default;
};

struct Drawing {
  std::map<std::string, Box> boxes;
  std::vector<DrawnEdge> edges;
  friend bool operator==(const Drawing&, const Drawing&) = default;
};

struct RectilinearInstance {
  Formula formula;
  Drawing drawing;
  friend bool operator==(const RectilinearInstance&, const RectilinearInstance&) = default;
};

using Assignment = std::map<std::string, bool>;

namespace detail {

inline std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline const nlohmann::json& need(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw Error(ErrorCode::SyntaxError, where + ": missing \"" + key + "\"");
  return j.at(key);
}

template <typename T>
T get_as(const nlohmann::json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::SyntaxError, where + ": wrong type");
  }
}

}  // namespace detail

/// Parses the JSON formula-with-drawing document.
inline RectilinearInstance parse_rectilinear(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw Error(ErrorCode::SyntaxError,
                "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
  RectilinearInstance out;
  auto& f = out.formula;
  const auto& vars = detail::need(doc, "variables", "document");
  if (!vars.is_array()) throw Error(ErrorCode::SyntaxError, "variables: expected an array");
  std::set<std::string> known;
  for (const auto& v : vars) {
    auto name = detail::get_as<std::string>(v, "variables");
    if (!known.insert(name).second) throw Error(ErrorCode::SyntaxError, "variable '" + name + "' declared twice");
    f.variables.push_back(name);
  }
  const auto& cls = detail::need(doc, "clauses", "document");
  if (!cls.is_array()) throw Error(ErrorCode::SyntaxError, "clauses: expected an array");
  for (std::size_t i = 0; i < cls.size(); ++i) {
    const std::string where = "clause " + std::to_string(i + 1);
    if (!cls[i].is_array()) throw Error(ErrorCode::SyntaxError, where + ": expected an array of literals");
    if (cls[i].empty() || cls[i].size() > 3)
      throw Error(ErrorCode::ArityError, where + " has " + std::to_string(cls[i].size()) + " literals");
    std::vector<Literal> clause;
    std::set<std::string> used;
    for (const auto& lit : cls[i]) {
      Literal l{detail::get_as<std::string>(detail::need(lit, "var", where), where),
                lit.contains("neg") ? detail::get_as<bool>(lit.at("neg"), where) : false};
      if (!known.count(l.var)) throw Error(ErrorCode::UnknownVariable, where + " uses '" + l.var + "'");
      if (!used.insert(l.var).second) throw Error(ErrorCode::ArityError, where + " repeats '" + l.var + "'");
      clause.push_back(l);
    }
    f.clauses.push_back(std::move(clause));
  }
  if (doc.contains("clause_names")) {
    f.clause_names = detail::get_as<std::vector<std::string>>(doc.at("clause_names"), "clause_names");
    if (f.clause_names.size() != f.clauses.size())
      throw Error(ErrorCode::SyntaxError, "clause_names must name every clause");
  }
  std::set<std::string> clause_set;
  for (std::size_t i = 0; i < f.clauses.size(); ++i)
    if (!clause_set.insert(f.clause_name(i)).second || known.count(f.clause_name(i)))
      throw Error(ErrorCode::SyntaxError, "vertex name '" + f.clause_name(i) + "' is not unique");
  if (doc.contains("drawing")) {
    const auto& d = doc.at("drawing");
    if (d.contains("boxes")) {
      if (!d.at("boxes").is_object()) throw Error(ErrorCode::SyntaxError, "boxes: expected an object");
      for (const auto& [name, b] : d.at("boxes").items()) {
        auto c = detail::get_as<std::vector<int>>(b, "box " + name);
        if (c.size() != 4) throw Error(ErrorCode::SyntaxError, "box " + name + ": expected [x0,y0,x1,y1]");
        out.drawing.boxes[name] = {c[0], c[1], c[2], c[3]};
      }
    }
    if (d.contains("edges")) {
      for (const auto& e : d.at("edges")) {
        DrawnEdge de{detail::get_as<std::string>(detail::need(e, "var", "edge"), "edge"),
                     detail::get_as<std::string>(detail::need(e, "clause", "edge"), "edge"),
                     detail::get_as<int>(detail::need(e, "x", "edge"), "edge"),
                     e.contains("neg") ? detail::get_as<bool>(e.at("neg"), "edge") : false};
        if (!known.count(de.var)) throw Error(ErrorCode::UnknownVariable, "edge uses variable '" + de.var + "'");
        if (!clause_set.count(de.clause))
          throw Error(ErrorCode::UnknownVariable, "edge uses unknown clause '" + de.clause + "'");
        out.drawing.edges.push_back(de);
      }
    }
  }
  return out;
}

inline nlohmann::ordered_json to_json(const RectilinearInstance& ri) {
  nlohmann::ordered_json doc;
  doc["variables"] = ri.formula.variables;
  auto cls = nlohmann::ordered_json::array();
  for (const auto& c : ri.formula.clauses) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& l : c) arr.push_back({{"var", l.var}, {"neg", l.neg}});
    cls.push_back(arr);
  }
  doc["clauses"] = cls;
  if (!ri.formula.clause_names.empty()) doc["clause_names"] = ri.formula.clause_names;
  nlohmann::ordered_json boxes = nlohmann::ordered_json::object();
  for (const auto& [name, b] : ri.drawing.boxes) boxes[name] = {b.x0, b.y0, b.x1, b.y1};
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : ri.drawing.edges)
    edges.push_back({{"var", e.var}, {"clause", e.clause}, {"x", e.x}, {"neg", e.neg}});
  doc["drawing"] = {{"boxes", boxes}, {"edges", edges}};
  return doc;
}

inline std::string serialize_rectilinear(const RectilinearInstance& ri) { return to_json(ri).dump(2) + "\n"; }

struct DrawingViolation {
  std::string kind;
  std::vector<std::string> subjects;
  std::string detail;
};

/**
 * Checks the rectilinear conditions: rectangles, variable boxes on one
 * horizontal line, edges as vertical segments between the boundaries of their
 * boxes, no crossings, and drawn edges equal to the formula's incidences.
 */
inline std::vector<DrawingViolation> validate_drawing(const Formula& f, const Drawing& d) {
  std::vector<DrawingViolation> out;
  std::set<std::string> var_names(f.variables.begin(), f.variables.end());
  std::set<std::string> clause_names;
  for (std::size_t i = 0; i < f.clauses.size(); ++i) clause_names.insert(f.clause_name(i));

  for (const auto& v : f.variables)
    if (!d.boxes.count(v)) out.push_back({"missing-box", {v}, "variable has no box"});
  for (const auto& c : clause_names)
    if (!d.boxes.count(c)) out.push_back({"missing-box", {c}, "clause has no box"});
  for (const auto& [name, b] : d.boxes) {
    if (!var_names.count(name) && !clause_names.count(name))
      out.push_back({"unknown-box", {name}, "box names no variable or clause"});
    if (b.x0 >= b.x1 || b.y0 >= b.y1)
      out.push_back({"degenerate-box", {name}, "box needs x0 < x1 and y0 < y1"});
  }
  for (auto a = d.boxes.begin(); a != d.boxes.end(); ++a)
    for (auto b = std::next(a); b != d.boxes.end(); ++b) {
      const Box &p = a->second, &q = b->second;
      if (p.x0 <= q.x1 && q.x0 <= p.x1 && p.y0 <= q.y1 && q.y0 <= p.y1)
        out.push_back({"box-overlap", {a->first, b->first}, "boxes intersect"});
    }

  // One horizontal line must meet every variable box: pick the line hitting
  // the most boxes and report the others.
  std::vector<std::pair<std::string, Box>> vboxes;
  for (const auto& v : f.variables)
    if (auto it = d.boxes.find(v); it != d.boxes.end()) vboxes.emplace_back(v, it->second);
  if (!vboxes.empty()) {
    int best_y = 0;
    std::size_t best = 0;
    for (const auto& [_, b] : vboxes)
      for (int y : {b.y0, b.y1}) {
        std::size_t hit = 0;
        for (const auto& [__, c] : vboxes) hit += (c.y0 <= y && y <= c.y1);
        if (hit > best || (hit == best && y < best_y)) {
          best = hit;
          best_y = y;
        }
      }
    for (const auto& [name, b] : vboxes)
      if (!(b.y0 <= best_y && best_y <= b.y1))
        out.push_back({"off-line", {name}, "variable box misses the line y=" + std::to_string(best_y)});
  }

  struct Seg {
    std::size_t edge;
    int x, ya, yb;
  };
  std::vector<Seg> segs;
  for (std::size_t i = 0; i < d.edges.size(); ++i) {
    const auto& e = d.edges[i];
    const std::string label = e.var + "-" + e.clause;
    auto vb = d.boxes.find(e.var);
    auto cb = d.boxes.find(e.clause);
    if (vb == d.boxes.end() || cb == d.boxes.end()) continue;
    const Box &V = vb->second, &C = cb->second;
    if (e.x < V.x0 || e.x > V.x1 || e.x < C.x0 || e.x > C.x1) {
      out.push_back({"edge-endpoint", {label}, "x=" + std::to_string(e.x) + " is outside a box it joins"});
      continue;
    }
    Seg s{i, e.x, 0, 0};
    if (C.y0 > V.y1) {
      s.ya = V.y1;
      s.yb = C.y0;
    } else if (C.y1 < V.y0) {
      s.ya = C.y1;
      s.yb = V.y0;
    } else {
      out.push_back({"edge-endpoint", {label}, "clause box is neither above nor below the variable box"});
      continue;
    }
    for (const auto& [name, B] : d.boxes) {
      if (name == e.var || name == e.clause) continue;
      if (B.x0 <= s.x && s.x <= B.x1 && B.y0 <= s.yb && s.ya <= B.y1)
        out.push_back({"edge-crosses-box", {label, name}, "segment meets another box"});
    }
    segs.push_back(s);
  }
  for (std::size_t a = 0; a < segs.size(); ++a)
    for (std::size_t b = a + 1; b < segs.size(); ++b)
      if (segs[a].x == segs[b].x && segs[a].ya <= segs[b].yb && segs[b].ya <= segs[a].yb) {
        const auto& ea = d.edges[segs[a].edge];
        const auto& eb = d.edges[segs[b].edge];
        out.push_back({"edge-crossing", {ea.var + "-" + ea.clause, eb.var + "-" + eb.clause},
                       "segments overlap at x=" + std::to_string(segs[a].x)});
      }

  std::map<std::pair<std::string, std::string>, bool> wanted;
  for (std::size_t i = 0; i < f.clauses.size(); ++i)
    for (const auto& l : f.clauses[i]) wanted[{l.var, f.clause_name(i)}] = l.neg;
  std::set<std::pair<std::string, std::string>> drawn;
  for (const auto& e : d.edges) {
    const std::string label = e.var + "-" + e.clause;
    auto it = wanted.find({e.var, e.clause});
    if (it == wanted.end()) {
      out.push_back({"graph-mismatch", {label}, "edge has no matching literal"});
    } else if (it->second != e.neg) {
      out.push_back({"graph-mismatch", {label}, "edge polarity differs from the literal"});
    }
    if (!drawn.insert({e.var, e.clause}).second)
      out.push_back({"graph-mismatch", {label}, "edge drawn twice"});
  }
  for (const auto& [key, neg] : wanted)
    if (!drawn.count(key)) out.push_back({"graph-mismatch", {key.first + "-" + key.second}, "literal has no edge"});
  return out;
}

inline bool evaluate(const Formula& f, const Assignment& a) {
  for (const auto& c : f.clauses) {
    bool sat = false;
    for (const auto& l : c) sat = sat || (a.at(l.var) != l.neg);
    if (!sat) return false;
  }
  return true;
}

struct SatResult {
  bool satisfiable = false;
  std::optional<Assignment> assignment;
};

/// Truth-table search; the first variable is the lowest bit.
inline SatResult brute_sat(const Formula& f) {
  const std::size_t k = f.variables.size();
  if (k > 20) throw Error(ErrorCode::CapExceeded, "brute_sat handles at most 20 variables");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    Assignment a;
    for (std::size_t i = 0; i < k; ++i) a[f.variables[i]] = (mask >> i) & 1;
    if (evaluate(f, a)) return {true, a};
  }
  return {false, std::nullopt};
}

/// Every assignment of the formula's variables, first variable fastest.
inline std::vector<Assignment> all_assignments(const Formula& f) {
  const std::size_t k = f.variables.size();
  if (k > 20) throw Error(ErrorCode::CapExceeded, "too many variables to enumerate");
  std::vector<Assignment> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    Assignment a;
    for (std::size_t i = 0; i < k; ++i) a[f.variables[i]] = (mask >> i) & 1;
    out.push_back(std::move(a));
  }
  return out;
}

/**
 * Random formula together with a valid drawing. Clauses on each side are
 * opened and closed with a stack while sweeping the variables left to right,
 * which yields exactly the non-crossing (nested or disjoint) families a
 * rectilinear drawing can carry.
 */
inline RectilinearInstance random_rectilinear(std::uint64_t seed, int num_vars, int max_ports_per_side = 2) {
  std::mt19937_64 rng(seed);
  auto roll = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  RectilinearInstance ri;
  auto& f = ri.formula;
  for (int v = 1; v <= num_vars; ++v) f.variables.push_back("x" + std::to_string(v));

  struct Open {
    std::vector<Literal> lits;
    std::vector<int> xs;
    int height = 1;
  };
  struct Done {
    std::vector<Literal> lits;
    std::vector<int> xs;
    int height;
    bool upper;
  };
  std::vector<Done> done;
  std::vector<std::vector<int>> ports(num_vars, std::vector<int>(2, 0));
  for (int v = 0; v < num_vars; ++v)
    for (int s = 0; s < 2; ++s) ports[v][s] = roll(0, max_ports_per_side);

  int x = 0;
  std::vector<int> box_x0(num_vars), box_x1(num_vars);
  std::vector<std::vector<int>> port_x(num_vars, std::vector<int>(2, 0));
  for (int v = 0; v < num_vars; ++v) {
    box_x0[v] = x;
    int width = 2 * std::max({ports[v][0], ports[v][1], 1});
    box_x1[v] = x + width;
    x += width + 2;
  }
  for (int s = 0; s < 2; ++s) {
    std::vector<Open> stack;
    auto close_top = [&] {
      Open c = std::move(stack.back());
      stack.pop_back();
      if (!stack.empty()) stack.back().height = std::max(stack.back().height, c.height + 1);
      done.push_back({std::move(c.lits), std::move(c.xs), c.height, s == 0});
    };
    for (int v = 0; v < num_vars; ++v) {
      for (int p = 0; p < ports[v][s]; ++p) {
        Literal lit{f.variables[v], roll(0, 2) == 0};
        int px = box_x0[v] + 1 + 2 * p;
        bool joined = false;
        if (!stack.empty() && roll(0, 1) == 1) {
          auto& top = stack.back();
          bool has = std::any_of(top.lits.begin(), top.lits.end(), [&](const Literal& l) { return l.var == lit.var; });
          if (!has && top.lits.size() < 3) {
            top.lits.push_back(lit);
            top.xs.push_back(px);
            joined = true;
          }
        }
        if (!joined) stack.push_back({{lit}, {px}, 1});
        if (stack.back().lits.size() == 3 || roll(0, 2) == 0) close_top();
      }
      // Clauses may only stay open while nothing from this variable blocks them.
    }
    while (!stack.empty()) close_top();
  }
  std::stable_sort(done.begin(), done.end(), [](const Done& a, const Done& b) {
    if (a.upper != b.upper) return a.upper;
    return a.xs.front() < b.xs.front();
  });
  for (std::size_t i = 0; i < done.size(); ++i) {
    const auto& c = done[i];
    std::string name = "C" + std::to_string(i + 1);
    f.clauses.push_back(c.lits);
    int lo = *std::min_element(c.xs.begin(), c.xs.end());
    int hi = *std::max_element(c.xs.begin(), c.xs.end());
    int y0 = c.upper ? 2 * c.height : -2 * c.height;
    ri.drawing.boxes[name] = {lo, y0, hi + 1, y0 + 1};
    for (std::size_t k = 0; k < c.lits.size(); ++k)
      ri.drawing.edges.push_back({c.lits[k].var, name, c.xs[k], c.lits[k].neg});
  }
  for (int v = 0; v < num_vars; ++v) ri.drawing.boxes[f.variables[v]] = {box_x0[v], 0, box_x1[v], 1};
  return ri;
}

}  // namespace braidpack
