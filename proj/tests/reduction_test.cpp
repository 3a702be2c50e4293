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

#include <set>

#include "braidpack/braidpack.hpp"
#include "support/reference.hpp"

namespace braidpack {
namespace {

RectilinearInstance load(const std::string& name) {
  return parse_rectilinear(read_text_file(std::string(BRAIDPACK_DATA_DIR) + "/formulas/" + name));
}

// Clause-by-clause truth, written out here rather than calling evaluate().
bool satisfies(const Formula& f, const Assignment& a) {
  for (const auto& c : f.clauses) {
    bool any = false;
    for (const auto& l : c) any = any || (l.neg ? !a.at(l.var) : a.at(l.var));
    if (!any) return false;
  }
  return true;
}

TEST(Compile, Phi1Shape) {
  auto ci = compile(load("phi1.json"));
  const int n = ci.instance.num_qubits();
  // Stages of nine columns, one gap column between neighbours and a frame
  // column plus gap at each end.
  EXPECT_EQ(n, 10 * ci.stage_count + 3);
  EXPECT_EQ(ci.h, (n - 1) + ci.stage_height);
  EXPECT_EQ(ci.placements.front().gadget, "fixing:" + std::to_string(n));
  EXPECT_EQ(ci.variable_probe.size(), 4u);
  EXPECT_EQ(ci.signal_map.size(), 7u);  // one per drawn edge
  for (const auto& [edge, chain] : ci.signal_map) {
    EXPECT_FALSE(chain.empty()) << edge;
    for (const auto& id : chain) EXPECT_TRUE(ci.instance.find(id).has_value()) << id;
  }
  for (const auto& pl : ci.placements)
    for (const auto& [local, global] : pl.instance_gate_ids)
      EXPECT_TRUE(ci.instance.find(global).has_value()) << pl.label << " " << local;
  EXPECT_NO_THROW(derive_order(ci.instance));
}

TEST(Compile, IsDeterministic) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto ri = random_rectilinear(seed, 3 + static_cast<int>(seed % 3));
    EXPECT_EQ(serialize(compile(ri)), serialize(compile(ri)));
  }
}

TEST(Compile, SizeIsPolynomial) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    int k = 1 + static_cast<int>(seed % 8);
    auto ri = random_rectilinear(seed * 7 + 1, k, 2);
    auto ci = compile(ri);
    std::size_t lits = 0;
    for (const auto& c : ri.formula.clauses) lits += c.size();
    const double size = static_cast<double>(k + ri.formula.clauses.size() + lits);
    const double n = ci.instance.num_qubits();
    EXPECT_LE(n, 25 * size) << "seed " << seed;
    EXPECT_LE(ci.h, 30 * size) << "seed " << seed;
    // Gates in one row are disjoint, so a packing of height h holds at most n*h gates.
    EXPECT_LE(static_cast<double>(ci.instance.num_gates()), n * ci.h);
  }
}

TEST(Compile, RejectsInvalidDrawing) {
  auto ri = load("phi1.json");
  ri.drawing.boxes["x4"] = {14, 5, 16, 6};
  try {
    compile(ri);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidDrawing);
  }
}

TEST(Witness, VerifiesExactlyForSatisfyingAssignments) {
  auto ri = load("phi1.json");
  auto ci = compile(ri);
  int good = 0;
  for (const auto& a : all_assignments(ri.formula)) {
    auto w = witness_packing(ci, a);
    auto rep = check_packing(ci.instance, w.packing);
    const bool verified = rep.ok && rep.height_used <= ci.h;
    EXPECT_EQ(verified, satisfies(ri.formula, a));
    EXPECT_EQ(w.flagged, !verified);
    EXPECT_EQ(reftest::ref_valid(ci.instance, w.packing), rep.ok);
    EXPECT_EQ(extract_assignment(ci, w.packing), a);
    good += verified;
  }
  EXPECT_GT(good, 0);
  EXPECT_LT(good, 16);
}

TEST(Witness, FalsifiedClauseIsNamed) {
  auto ci = compile(load("phi1.json"));
  auto w = witness_packing(ci, {{"x1", true}, {"x2", false}, {"x3", true}, {"x4", false}});
  ASSERT_TRUE(w.flagged);
  ASSERT_EQ(w.falsified.size(), 1u);
  EXPECT_NE(w.falsified[0].find("C1"), std::string::npos) << w.falsified[0];
}

TEST(Witness, RandomFormulas) {
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    auto ri = random_rectilinear(seed, 1 + static_cast<int>(seed % 4), 2);
    auto ci = compile(ri);
    for (const auto& a : all_assignments(ri.formula)) {
      auto w = witness_packing(ci, a);
      auto rep = check_packing(ci.instance, w.packing);
      ASSERT_EQ(rep.ok && rep.height_used <= ci.h, satisfies(ri.formula, a)) << "seed " << seed;
      ASSERT_EQ(extract_assignment(ci, w.packing), a);
    }
  }
}

TEST(Witness, MissingVariableThrows) {
  auto ci = compile(load("phi1.json"));
  try {
    witness_packing(ci, {{"x1", true}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IncompleteAssignment);
  }
}

TEST(Extract, NonCanonicalProbe) {
  auto ci = compile(load("phi1.json"));
  auto w = witness_packing(ci, {{"x1", false}, {"x2", true}, {"x3", false}, {"x4", false}});
  w.packing.mu[ci.variable_probe.at("x3")] += 5;
  try {
    extract_assignment(ci, w.packing);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonCanonicalLevel);
  }
}

// Any packing of height h is readable, not just the ones witness_packing builds.
TEST(Reverse, SolverPackingOfTheSmallestInstanceDecodes) {
  auto ri = load("single_positive.json");
  auto ci = compile(ri);
  auto r = decide(ci.instance, ci.h);
  ASSERT_TRUE(r.feasible);
  auto a = extract_assignment(ci, *r.witness);
  EXPECT_TRUE(a.at("x"));
  EXPECT_FALSE(decide(ci.instance, ci.h - 1).feasible);
}

TEST(Reverse, TimeLimitIsInconclusive) {
  auto ci = compile(load("contradiction_split.json"));
  SearchLimits lim;
  lim.time_limit_seconds = 0.05;
  auto r = decide(ci.instance, ci.h, lim);
  EXPECT_FALSE(r.feasible);
  EXPECT_TRUE(r.time_limit_hit);
}

TEST(RoundTrip, CompiledDocument) {
  auto ci = compile(load("phi1.json"));
  auto text = serialize(ci);
  auto back = parse_compiled(text);
  EXPECT_EQ(back.instance, ci.instance);
  EXPECT_EQ(back.placements, ci.placements);
  EXPECT_EQ(serialize(back), text);
  auto a = Assignment{{"x1", false}, {"x2", true}, {"x3", true}, {"x4", true}};
  EXPECT_EQ(witness_packing(back, a).packing, witness_packing(ci, a).packing);
}

}  // namespace
}  // namespace braidpack
