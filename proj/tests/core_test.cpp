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

#include <random>

#include "braidpack/core.hpp"
#include "support/reference.hpp"

namespace braidpack {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no braidpack::Error thrown";
  return ErrorCode::InvalidInstance;
}

TEST(Instance, NormalizesQubitSets) {
  Instance inst(3, {{"A", {3, 1, 3}, {}}}, {{"A"}, {}, {"A"}});
  EXPECT_EQ(inst.gate(0).qubits, (std::vector<int>{1, 3}));
  EXPECT_EQ(inst.index_of("A"), 0u);
  EXPECT_FALSE(inst.find("B").has_value());
}

TEST(Instance, RejectsMalformedInput) {
  EXPECT_EQ(code_of([] { Instance(0, {}, {}); }), ErrorCode::InvalidInstance);
  EXPECT_EQ(code_of([] { Instance(2, {{"A", {}, {}}}, {{}, {}}); }), ErrorCode::InvalidInstance);
  EXPECT_EQ(code_of([] { Instance(2, {{"A", {3}, {}}}, {{}, {}}); }), ErrorCode::InvalidInstance);
  EXPECT_EQ(code_of([] { Instance(2, {{"A", {1}, {}}, {"A", {2}, {}}}, {{"A"}, {"A"}}); }),
            ErrorCode::InvalidInstance);
  EXPECT_EQ(code_of([] { Instance(2, {{"A", {1}, {}}}, {{"A"}}); }), ErrorCode::IncompleteWireOrder);
  EXPECT_EQ(code_of([] { Instance(2, {{"A", {1}, {}}}, {{}, {}}); }), ErrorCode::IncompleteWireOrder);
  EXPECT_EQ(code_of([] { Instance(2, {{"A", {1}, {}}}, {{"A"}, {"A"}}); }), ErrorCode::IncompleteWireOrder);
  EXPECT_EQ(code_of([] { Instance(1, {{"A", {1}, {}}}, {{"A", "A"}}); }), ErrorCode::IncompleteWireOrder);
  EXPECT_EQ(code_of([] { Instance(1, {{"A", {1}, {}}}, {{"B"}}); }), ErrorCode::UnknownGateId);
}

TEST(Instance, DuplicateQubitSetsAreDistinctGates) {
  Instance inst(3, {{"V1", {1, 2, 3}, {}}, {"V5", {1, 2, 3}, {}}},
                {{"V1", "V5"}, {"V1", "V5"}, {"V1", "V5"}});
  auto dag = derive_order(inst);
  EXPECT_EQ(dag.succ[0], (std::vector<std::size_t>{1}));
  EXPECT_EQ(dag.raw_edges.size(), 3u);
}

TEST(DeriveOrder, DetectsCycles) {
  Instance inst(2, {{"A", {1, 2}, {}}, {"B", {1, 2}, {}}}, {{"A", "B"}, {"B", "A"}});
  EXPECT_EQ(code_of([&] { derive_order(inst); }), ErrorCode::CyclicOrder);
}

TEST(DeriveOrder, TopologicalOrderRespectsEdges) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    auto inst = reftest::random_instance(rng);
    auto dag = derive_order(inst);
    ASSERT_EQ(dag.topo.size(), inst.num_gates());
    std::vector<std::size_t> pos(inst.num_gates());
    for (std::size_t i = 0; i < dag.topo.size(); ++i) pos[dag.topo[i]] = i;
    for (auto [a, b] : dag.raw_edges) EXPECT_LT(pos[a], pos[b]);
  }
}

TEST(Spans, FootprintIsMinMaxUnderPi) {
  Gate g{"X", {1, 3}, {}};
  auto s = gate_span(g, {2, 1, 4, 3});
  EXPECT_EQ(s.lo, 2);
  EXPECT_EQ(s.hi, 4);
  EXPECT_FALSE(spans_separated({1, 2}, {3, 3}));
  EXPECT_TRUE(spans_separated({1, 1}, {3, 3}));
  EXPECT_TRUE(spans_separated({5, 6}, {1, 3}));
}

TEST(Permutations, MirrorAndColumnOrder) {
  std::vector<int> pi{3, 1, 2};
  EXPECT_EQ(column_order(pi), (std::vector<int>{2, 3, 1}));
  EXPECT_EQ(mirror_permutation(mirror_permutation(pi)), pi);
  EXPECT_EQ(mirror_permutation(identity_permutation(4)), (std::vector<int>{4, 3, 2, 1}));
  EXPECT_TRUE(is_permutation_of_n(pi, 3));
  EXPECT_FALSE(is_permutation_of_n({1, 1, 2}, 3));
  EXPECT_FALSE(is_permutation_of_n({1, 2}, 3));
}

TEST(Packing, HeightOfEmptyPackingThrows) {
  Packing p{{1}, {}};
  EXPECT_EQ(code_of([&] { p.height(); }), ErrorCode::EmptyPacking);
  EXPECT_EQ(height_or_zero(p), 0);
  p.mu["A"] = 3;
  p.mu["B"] = 7;
  EXPECT_EQ(packing_height(p), 7);
}

}  // namespace
}  // namespace braidpack
