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
#include <set>

#include "braidpack/exact.hpp"
#include "braidpack/gadgets.hpp"
#include "braidpack/oracle.hpp"
#include "support/reference.hpp"

namespace braidpack {
namespace {

TEST(MinHeight, MatchesBfsReference) {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 150; ++t) {
    auto inst = reftest::random_instance(rng, 6, 9);
    auto r = min_height(inst);
    ASSERT_TRUE(r.feasible);
    ASSERT_EQ(*r.best_height, reftest::ref_min_height(inst)) << "trial " << t;
    ASSERT_TRUE(reftest::ref_valid(inst, *r.witness));
    EXPECT_LE(chain_lower_bound(inst), *r.best_height);
  }
}

TEST(Decide, IsMonotoneAroundTheMinimum) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 60; ++t) {
    auto inst = reftest::random_instance(rng, 5, 8);
    int h = reftest::ref_min_height(inst);
    EXPECT_FALSE(decide(inst, h - 1).feasible);
    auto at = decide(inst, h);
    ASSERT_TRUE(at.feasible);
    EXPECT_LE(at.witness->height(), h);
    EXPECT_TRUE(decide(inst, h + 2).feasible);
  }
}

TEST(FixedPi, SearchesOnlyThatOrder) {
  std::mt19937_64 rng(55);
  for (int t = 0; t < 60; ++t) {
    auto inst = reftest::random_instance(rng, 6, 8);
    std::vector<int> pi(inst.num_qubits());
    std::iota(pi.begin(), pi.end(), 1);
    std::shuffle(pi.begin(), pi.end(), rng);
    SearchLimits lim;
    lim.fixed_pi = pi;
    auto r = min_height(inst, lim);
    ASSERT_TRUE(r.feasible);
    EXPECT_EQ(r.witness->pi, pi);
    EXPECT_EQ(*r.best_height, reftest::ref_min_height_for(inst, pi));
  }
}

TEST(PinnedLevels, AreRespectedOrMakeItInfeasible) {
  // Two gates on one wire: A before B.
  Instance inst(1, {{"A", {1}, {}}, {"B", {1}, {}}}, {{"A", "B"}});
  SearchLimits lim;
  lim.pinned_levels["A"] = {3};
  auto r = min_height(inst, lim);
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.witness->mu.at("A"), 3);
  EXPECT_EQ(*r.best_height, 4);
  lim.pinned_levels["B"] = {2};
  EXPECT_FALSE(decide(inst, 5, lim).feasible);
}

TEST(Workers, ResultDoesNotDependOnThreadCount) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    auto inst = reftest::random_instance(rng, 6, 8);
    SearchLimits one, four;
    one.workers = 1;
    four.workers = 4;
    auto a = min_height(inst, one), b = min_height(inst, four);
    ASSERT_EQ(a.best_height, b.best_height);
    EXPECT_EQ(*a.witness, *b.witness);
  }
}

TEST(Enumerate, CountsMatchBruteForce) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 40; ++t) {
    auto inst = reftest::random_instance(rng, 5, 6);
    int h = reftest::ref_min_height(inst);
    auto all = reftest::ref_count_packings(inst, h);
    std::uint64_t canonical = count_min_packings(inst, true);
    std::uint64_t full = count_min_packings(inst, false);
    if (inst.num_qubits() >= 2) {
      EXPECT_EQ(canonical * 2, all) << "trial " << t;
    } else {
      EXPECT_EQ(canonical, all);
    }
    EXPECT_EQ(full, all);
  }
}

TEST(Enumerate, ReportsDistinctValidPackings) {
  auto g = copy_gadget();
  auto inst = g.instantiate();
  SearchLimits lim;
  lim.fixed_pi = identity_permutation(g.width);
  std::set<std::vector<int>> seen;
  enumerate_packings(inst, 10, lim, [&](const std::vector<int>& pi, const std::vector<int>& lv) {
    Packing p{pi, {}};
    for (std::size_t i = 0; i < lv.size(); ++i) p.mu[inst.gate(i).id] = lv[i];
    EXPECT_TRUE(reftest::ref_valid(inst, p));
    EXPECT_TRUE(seen.insert(lv).second);
    return true;
  });
  EXPECT_EQ(seen.size(), 2u);
}

TEST(Caps, CountingAboveTheQubitCapThrows) {
  try {
    count_min_packings(fixing_gadget(11).instantiate(), true);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CapExceeded);
  }
}

TEST(Oracle, CapsAndAgreement) {
  EXPECT_THROW(oracle_min_height(fixing_gadget(9).instantiate(), 8), Error);
  auto v = variable_gadget().instantiate();
  EXPECT_EQ(oracle_min_height(v, 6).best_height, 4);
  EXPECT_FALSE(oracle_min_height(v, 3).feasible);
}

TEST(Empty, NoGatesHasHeightZero) {
  Instance inst(2, {}, {{}, {}});
  auto r = min_height(inst);
  EXPECT_TRUE(r.feasible);
  EXPECT_EQ(r.best_height, 0);
}

}  // namespace
}  // namespace braidpack
