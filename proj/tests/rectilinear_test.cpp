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

#include <gtest/gtest.h>

#include <string>

#include "braidpack/json_io.hpp"
#include "braidpack/rectilinear.hpp"

namespace braidpack {
namespace {

RectilinearInstance phi1() {
  return parse_rectilinear(read_text_file(std::string(BRAIDPACK_DATA_DIR) + "/formulas/phi1.json"));
}

ErrorCode parse_code(const std::string& text) {
  try {
    parse_rectilinear(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "parsed: " << text;
  return ErrorCode::InvalidInstance;
}

std::set<std::string> kinds(const std::vector<DrawingViolation>& vs) {
  std::set<std::string> out;
  for (const auto& v : vs) out.insert(v.kind);
  return out;
}

// Test-side satisfiability by splitting on variables in order.
bool split_sat(const Formula& f, std::size_t i, Assignment& a) {
  for (const auto& c : f.clauses) {
    bool open = false, sat = false;
    for (const auto& l : c) {
      auto it = a.find(l.var);
      if (it == a.end()) open = true;
      else if (it->second != l.neg) sat = true;
    }
    if (!sat && !open) return false;
  }
  if (i == f.variables.size()) return true;
  for (bool v : {false, true}) {
    a[f.variables[i]] = v;
    if (split_sat(f, i + 1, a)) return true;
  }
  a.erase(f.variables[i]);
  return false;
}

TEST(Parse, Phi1) {
  auto ri = phi1();
  EXPECT_EQ(ri.formula.variables, (std::vector<std::string>{"x1", "x2", "x3", "x4"}));
  ASSERT_EQ(ri.formula.clauses.size(), 3u);
  EXPECT_EQ(ri.formula.clauses[2].size(), 3u);
  EXPECT_TRUE(ri.formula.clauses[2][2].neg);
  EXPECT_EQ(ri.drawing.edges.size(), 7u);
  EXPECT_TRUE(validate_drawing(ri.formula, ri.drawing).empty());
}

TEST(Parse, ErrorsCarryTheirClass) {
  EXPECT_EQ(parse_code("{\"variables\": [\"x\"],\n \"clauses\": [[{\"var\": \"x\"}]"), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_code(R"({"variables": ["x"], "clauses": [[{"var": "y"}]]})"), ErrorCode::UnknownVariable);
  EXPECT_EQ(parse_code(R"({"variables": ["x"], "clauses": [[]]})"), ErrorCode::ArityError);
  EXPECT_EQ(parse_code(R"({"variables": ["a","b","c","d"], "clauses": [[{"var":"a"},{"var":"b"},{"var":"c"},{"var":"d"}]]})"),
            ErrorCode::ArityError);
  EXPECT_EQ(parse_code(R"({"variables": ["x"], "clauses": [[{"var":"x"},{"var":"x","neg":true}]]})"),
            ErrorCode::ArityError);
  EXPECT_EQ(parse_code(R"({"variables": ["x","x"], "clauses": []})"), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_code(R"({"clauses": []})"), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_code(R"({"variables": ["x"], "clauses": [[{"var":"x"}]],
                           "drawing": {"boxes": {}, "edges": [{"var":"x","clause":"C9","x":0}]}})"),
            ErrorCode::UnknownVariable);
}

TEST(Parse, SyntaxErrorReportsLineAndColumn) {
  try {
    parse_rectilinear("{\n  \"variables\": [\"x\",]\n}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Validate, ReportsEachKind) {
  auto base = phi1();
  auto check = [&](auto mutate, const std::string& kind) {
    auto ri = base;
    mutate(ri);
    EXPECT_TRUE(kinds(validate_drawing(ri.formula, ri.drawing)).count(kind)) << kind;
  };
  check([](RectilinearInstance& r) { r.drawing.boxes.erase("x3"); }, "missing-box");
  check([](RectilinearInstance& r) { r.drawing.boxes["zz"] = {40, 0, 41, 1}; }, "unknown-box");
  check([](RectilinearInstance& r) { r.drawing.boxes["x4"] = {14, 0, 14, 1}; }, "degenerate-box");
  check([](RectilinearInstance& r) { r.drawing.boxes["x3"] = {8, 0, 12, 1}; }, "box-overlap");
  check([](RectilinearInstance& r) { r.drawing.boxes["x4"] = {14, 5, 16, 6}; }, "off-line");
  check([](RectilinearInstance& r) { r.drawing.edges[0].x = 30; }, "edge-endpoint");
  check([](RectilinearInstance& r) { r.drawing.edges[0].neg = !r.drawing.edges[0].neg; }, "graph-mismatch");
  check([](RectilinearInstance& r) { r.drawing.edges.pop_back(); }, "graph-mismatch");
  check(
      [](RectilinearInstance& r) {
        // A box parked between x2 and C3 blocks the x2-C3 edge at x=7.
        r.formula.variables.push_back("x5");
        r.drawing.boxes["x5"] = {18, 0, 19, 1};
        r.formula.clauses.push_back({{"x5", false}});
        r.drawing.boxes["C4"] = {6, 1, 7, 2};
        r.drawing.edges.push_back({"x5", "C4", 18, false});
      },
      "edge-crosses-box");
  check([](RectilinearInstance& r) { r.drawing.edges.push_back(r.drawing.edges[0]); }, "edge-crossing");
}

TEST(Sat, Phi1IsSatisfiable) {
  auto ri = phi1();
  auto s = brute_sat(ri.formula);
  ASSERT_TRUE(s.satisfiable);
  EXPECT_TRUE(evaluate(ri.formula, *s.assignment));
  Assignment a{{"x1", true}, {"x2", false}, {"x3", false}, {"x4", true}};
  EXPECT_FALSE(evaluate(ri.formula, a));  // C1 needs !x1 or x2
}

TEST(Sat, AllAssignmentsFirstVariableFastest) {
  Formula f{{"a", "b"}, {}, {}};
  auto all = all_assignments(f);
  ASSERT_EQ(all.size(), 4u);
  EXPECT_TRUE(all[1].at("a"));
  EXPECT_FALSE(all[1].at("b"));
}

TEST(Random, DrawingsAreValidAndDeterministic) {
  int unsat = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    int k = 1 + static_cast<int>(seed % 7);
    auto ri = random_rectilinear(seed, k, 1 + static_cast<int>(seed % 3));
    ASSERT_TRUE(validate_drawing(ri.formula, ri.drawing).empty()) << "seed " << seed;
    EXPECT_EQ(ri, random_rectilinear(seed, k, 1 + static_cast<int>(seed % 3)));
    for (const auto& c : ri.formula.clauses) EXPECT_TRUE(c.size() >= 1 && c.size() <= 3);
    Assignment a;
    bool ours = brute_sat(ri.formula).satisfiable;
    EXPECT_EQ(ours, split_sat(ri.formula, 0, a)) << "seed " << seed;
    unsat += !ours;
  }
  EXPECT_GT(unsat, 0);
}

TEST(RoundTrip, SerializeParseIsIdentity) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto ri = random_rectilinear(seed, 1 + static_cast<int>(seed % 5));
    auto text = serialize_rectilinear(ri);
    EXPECT_EQ(parse_rectilinear(text), ri);
    EXPECT_EQ(serialize_rectilinear(parse_rectilinear(text)), text);
  }
}

}  // namespace
}  // namespace braidpack
