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

#include "braidpack/exact.hpp"
#include "braidpack/gadgets.hpp"
#include "braidpack/json_io.hpp"
#include "support/reference.hpp"

namespace braidpack {
namespace {

ErrorCode instance_error(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "parsed: " << text;
  return ErrorCode::InvalidInstance;
}

TEST(Instance, DocumentedShape) {
  auto inst = parse_instance(R"({"num_qubits": 2,
    "gates": [{"id": "a", "qubits": [1, 2], "tag": "fixed"}, {"id": "b", "qubits": [2]}],
    "wire_orders": {"1": ["a"], "2": ["a", "b"]}})");
  EXPECT_EQ(inst.num_qubits(), 2);
  EXPECT_EQ(inst.gate(0).tag, std::optional<std::string>("fixed"));
  EXPECT_FALSE(inst.gate(1).tag.has_value());
  EXPECT_EQ(inst.wire_order(2), (std::vector<GateId>{"a", "b"}));
}

TEST(Instance, RandomRoundTrips) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    auto inst = reftest::random_instance(rng, 7, 9);
    auto text = serialize(inst);
    auto back = parse_instance(text);
    EXPECT_EQ(back, inst);
    EXPECT_EQ(serialize(back), text);
  }
}

TEST(Instance, Errors) {
  EXPECT_EQ(instance_error("{"), ErrorCode::SyntaxError);
  EXPECT_EQ(instance_error(R"({"gates": [], "wire_orders": {}})"), ErrorCode::SyntaxError);
  EXPECT_EQ(instance_error(R"({"num_qubits": "2", "gates": [], "wire_orders": {}})"), ErrorCode::SyntaxError);
  EXPECT_EQ(instance_error(R"({"num_qubits": 1, "gates": {}, "wire_orders": {}})"), ErrorCode::SyntaxError);
  EXPECT_EQ(instance_error(R"({"num_qubits": 1, "gates": [], "wire_orders": {"2": []}})"),
            ErrorCode::InvalidInstance);
  EXPECT_EQ(instance_error(R"({"num_qubits": 1, "gates": [], "wire_orders": {"1x": []}})"),
            ErrorCode::InvalidInstance);
  EXPECT_EQ(instance_error(R"({"num_qubits": 1, "gates": [{"id": "a", "qubits": [1]}], "wire_orders": {}})"),
            ErrorCode::IncompleteWireOrder);
  EXPECT_EQ(instance_error(R"({"num_qubits": 1, "gates": [{"id": "a", "qubits": [1]}], "wire_orders": {"1": ["z"]}})"),
            ErrorCode::UnknownGateId);
}

TEST(Packing, RoundTripAndErrors) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    auto inst = reftest::random_instance(rng);
    auto p = reftest::random_packing(rng, inst, 6);
    auto text = serialize(p);
    EXPECT_EQ(parse_packing(text), p);
    EXPECT_EQ(serialize(parse_packing(text)), text);
  }
  EXPECT_THROW(parse_packing(R"({"pi": [1]})"), Error);
  EXPECT_THROW(parse_packing(R"({"pi": [1], "mu": {"a": "x"}})"), Error);
}

TEST(SolveResult, RoundTrip) {
  auto r = min_height(variable_gadget().instantiate());
  auto j = nlohmann::json::parse(dump(to_json(r)));
  auto back = solve_result_from_json(j);
  EXPECT_EQ(back.feasible, r.feasible);
  EXPECT_EQ(back.best_height, r.best_height);
  EXPECT_EQ(back.witness, r.witness);
  EXPECT_EQ(back.nodes_explored, r.nodes_explored);
  SolveResult empty;
  EXPECT_FALSE(solve_result_from_json(nlohmann::json::parse(dump(to_json(empty)))).best_height.has_value());
}

TEST(Gadget, FileDoublesAsInstance) {
  for (const auto& g : base_gadgets()) {
    auto text = dump(to_json(g));
    EXPECT_EQ(parse_instance(text), g.instantiate()) << g.name;
    auto back = gadget_from_json(nlohmann::json::parse(text));
    EXPECT_EQ(dump(to_json(back)), text);
  }
}

TEST(Files, MissingFileIsAnError) {
  EXPECT_THROW(read_text_file("/nonexistent/braidpack.json"), Error);
}

}  // namespace
}  // namespace braidpack
