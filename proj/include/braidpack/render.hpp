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
#include <sstream>
#include <string>
#include <vector>

#include "braidpack/core.hpp"
#include "braidpack/error.hpp"
#include "braidpack/verifier.hpp"

namespace braidpack {

enum class RenderFormat { Ascii, Svg };

/// TopDownTime draws level 1 as the first row; BottomUpLevel puts it last.
enum class LevelDirection { TopDownTime, BottomUpLevel };

struct RenderOptions {
  RenderFormat format = RenderFormat::Ascii;
  bool color_roles = true;
  LevelDirection level_direction = LevelDirection::TopDownTime;
  int scale = 12;  // svg cell size in px
};

namespace detail {

inline char role_glyph(const Gate& g, bool by_role) {
  if (!by_role || !g.tag) return '=';
  if (*g.tag == "fixed") return '#';
  if (*g.tag == "movable") return '@';
  if (*g.tag == "filler") return '+';
  return '=';
}

inline const char* role_color(const Gate& g, bool by_role) {
  if (!by_role) return "#37474f";
  if (g.tag && *g.tag == "fixed") return "#9e9e9e";
  if (g.tag && *g.tag == "movable") return "#ef6c00";
  if (g.tag && *g.tag == "filler") return "#d7ccc8";
  return "#1565c0";
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/**
 * Draws the packing as a 1D braiding diagram: one vertical line per qubit in
 * column order, one horizontal bar per gate at its level. ASCII output uses
 * one cell per (column, level): '|' is an idle qubit line, '#' fixed, '@'
 * movable, '+' filler and '=' any other gate.
 */
inline std::string render(const Instance& inst, const Packing& p, const RenderOptions& opt = {}) {
  if (opt.scale < 1) throw Error(ErrorCode::InvalidConfig, "scale must be >= 1");
  auto rep = check_packing(inst, p);
  if (!rep.ok) {
    std::string what = rep.violations.empty() ? "" : std::string(": ") + violation_kind_name(rep.violations[0].kind);
    throw Error(ErrorCode::InvalidPacking, "cannot render a packing that fails verification" + what);
  }
  const int n = inst.num_qubits();
  const int h = height_or_zero(p);
  const auto sigma = column_order(p.pi);
  auto row_of = [&](int level) { return opt.level_direction == LevelDirection::TopDownTime ? level - 1 : h - level; };

  std::ostringstream out;
  if (opt.format == RenderFormat::Ascii) {
    std::vector<std::string> grid(std::max(h, 1), std::string(n, '|'));
    for (const auto& g : inst.gates()) {
      auto span = gate_span(g, p.pi);
      int r = row_of(p.mu.at(g.id));
      for (int c = span.lo; c <= span.hi; ++c) grid[r][c - 1] = detail::role_glyph(g, opt.color_roles);
    }
    const int lw = static_cast<int>(std::to_string(std::max(h, 1)).size());
    out << std::string(lw, ' ') << ' ';
    for (int q : sigma) out << static_cast<char>('0' + q % 10);
    out << '\n';
    for (int r = 0; r < static_cast<int>(grid.size()); ++r) {
      int level = opt.level_direction == LevelDirection::TopDownTime ? r + 1 : h - r;
      std::string lab = h == 0 ? "" : std::to_string(level);
      out << std::string(lw - lab.size(), ' ') << lab << ' ' << grid[r] << '\n';
    }
    return out.str();
  }

  const int s = opt.scale;
  const int width = (n + 1) * s;
  const int height = (std::max(h, 1) + 1) * s;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  for (int c = 1; c <= n; ++c) {
    const int x = c * s;
    out << "<line x1=\"" << x << "\" y1=\"" << s / 2 << "\" x2=\"" << x << "\" y2=\"" << height - s / 2
        << "\" stroke=\"#bdbdbd\" stroke-width=\"" << std::max(1, s / 6) << "\"><title>q" << sigma[c - 1]
        << "</title></line>\n";
  }
  for (const auto& g : inst.gates()) {
    auto span = gate_span(g, p.pi);
    const int r = row_of(p.mu.at(g.id));
    const int x = span.lo * s - s / 3;
    const int w = (span.hi - span.lo) * s + 2 * (s / 3);
    const int y = (r + 1) * s - s / 4;
    out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << std::max(w, 1) << "\" height=\""
        << std::max(1, s / 2) << "\" fill=\"" << detail::role_color(g, opt.color_roles) << "\"><title>" << detail::xml_escape(g.id)
        << " @" << p.mu.at(g.id) << "</title></rect>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace braidpack
