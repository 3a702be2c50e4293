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

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "braidpack/core.hpp"
#include "braidpack/error.hpp"
#include "braidpack/exact.hpp"
#include "braidpack/gadgets.hpp"
#include "braidpack/rectilinear.hpp"
#include "braidpack/reduction.hpp"
#include "braidpack/verifier.hpp"

// JSON documents. Writers use insertion-ordered objects and sorted maps, so
// equal values always serialize to identical bytes.

namespace braidpack {

using ojson = nlohmann::ordered_json;

inline nlohmann::json parse_json_text(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw Error(ErrorCode::SyntaxError,
                "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::SyntaxError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write '" + path + "'");
  out << text;
}

inline std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

namespace detail {

template <typename T>
T field(const nlohmann::json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key))
    throw Error(ErrorCode::SyntaxError, std::string(what) + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::SyntaxError, std::string(what) + ": \"" + key + "\" has the wrong type");
  }
}

}  // namespace detail

// ---- Instance --------------------------------------------------------------

inline ojson to_json(const Instance& inst) {
  ojson j;
  j["num_qubits"] = inst.num_qubits();
  auto gates = ojson::array();
  for (const auto& g : inst.gates()) {
    ojson x;
    x["id"] = g.id;
    x["qubits"] = g.qubits;
    if (g.tag) x["tag"] = *g.tag;
    gates.push_back(std::move(x));
  }
  j["gates"] = std::move(gates);
  ojson wires = ojson::object();
  for (int q = 1; q <= inst.num_qubits(); ++q) wires[std::to_string(q)] = inst.wire_order(q);
  j["wire_orders"] = std::move(wires);
  return j;
}

inline Instance instance_from_json(const nlohmann::json& j) {
  const int n = detail::field<int>(j, "num_qubits", "instance");
  if (n < 1) throw Error(ErrorCode::InvalidInstance, "num_qubits must be positive");
  std::vector<Gate> gates;
  if (!j.contains("gates") || !j.at("gates").is_array())
    throw Error(ErrorCode::SyntaxError, "instance: \"gates\" must be an array");
  for (const auto& g : j.at("gates")) {
    Gate x{detail::field<std::string>(g, "id", "gate"), detail::field<std::vector<int>>(g, "qubits", "gate"), {}};
    if (g.contains("tag")) x.tag = detail::field<std::string>(g, "tag", "gate");
    gates.push_back(std::move(x));
  }
  std::vector<std::vector<GateId>> wires(n);
  if (!j.contains("wire_orders") || !j.at("wire_orders").is_object())
    throw Error(ErrorCode::SyntaxError, "instance: \"wire_orders\" must be an object");
  for (const auto& [key, ids] : j.at("wire_orders").items()) {
    int q = 0;
    try {
      std::size_t used = 0;
      q = std::stoi(key, &used);
      if (used != key.size()) q = 0;
    } catch (const std::exception&) {
      q = 0;
    }
    if (q < 1 || q > n) throw Error(ErrorCode::InvalidInstance, "wire_orders has bad qubit key '" + key + "'");
    try {
      wires[q - 1] = ids.get<std::vector<GateId>>();
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::SyntaxError, "wire_orders[" + key + "] must be a list of gate ids");
    }
  }
  return Instance(n, std::move(gates), std::move(wires));
}

inline Instance parse_instance(const std::string& text) { return instance_from_json(parse_json_text(text)); }
inline std::string serialize(const Instance& inst) { return dump(to_json(inst)); }

// ---- Packing ---------------------------------------------------------------

inline ojson to_json(const Packing& p) {
  ojson j;
  j["pi"] = p.pi;
  ojson mu = ojson::object();
  for (const auto& [id, l] : p.mu) mu[id] = l;
  j["mu"] = std::move(mu);
  return j;
}

inline Packing packing_from_json(const nlohmann::json& j) {
  Packing p;
  p.pi = detail::field<std::vector<int>>(j, "pi", "packing");
  p.mu = detail::field<std::map<GateId, int>>(j, "mu", "packing");
  return p;
}

inline Packing parse_packing(const std::string& text) { return packing_from_json(parse_json_text(text)); }
inline std::string serialize(const Packing& p) { return dump(to_json(p)); }

// ---- Results ---------------------------------------------------------------

inline ojson to_json(const SolveResult& r) {
  ojson j;
  j["feasible"] = r.feasible;
  j["best_height"] = r.best_height ? ojson(*r.best_height) : ojson(nullptr);
  j["witness"] = r.witness ? to_json(*r.witness) : ojson(nullptr);
  j["nodes_explored"] = r.nodes_explored;
  j["time_limit_hit"] = r.time_limit_hit;
  return j;
}

inline SolveResult solve_result_from_json(const nlohmann::json& j) {
  SolveResult r;
  r.feasible = detail::field<bool>(j, "feasible", "result");
  if (j.contains("best_height") && !j.at("best_height").is_null()) r.best_height = j.at("best_height").get<int>();
  if (j.contains("witness") && !j.at("witness").is_null()) r.witness = packing_from_json(j.at("witness"));
  r.nodes_explored = detail::field<std::uint64_t>(j, "nodes_explored", "result");
  r.time_limit_hit = detail::field<bool>(j, "time_limit_hit", "result");
  return r;
}

inline ojson to_json(const VerificationReport& rep) {
  ojson j;
  j["ok"] = rep.ok;
  j["height_used"] = rep.height_used;
  auto vs = ojson::array();
  for (const auto& v : rep.violations)
    vs.push_back({{"kind", violation_kind_name(v.kind)}, {"offenders", v.offenders}, {"detail", v.detail}});
  j["violations"] = std::move(vs);
  return j;
}

// ---- Gadgets ---------------------------------------------------------------

inline Side side_from_name(const std::string& s) {
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  if (s == "top") return Side::Top;
  if (s == "bottom") return Side::Bottom;
  throw Error(ErrorCode::SyntaxError, "unknown port side '" + s + "'");
}

inline GateRole role_from_name(const std::string& s) {
  if (s == "fixed") return GateRole::Fixed;
  if (s == "movable") return GateRole::Movable;
  if (s == "filler") return GateRole::Filler;
  throw Error(ErrorCode::SyntaxError, "unknown gate role '" + s + "'");
}

/// Gadget file: the instance shape plus drawn level, role and canonical levels per gate.
inline ojson to_json(const Gadget& g) {
  ojson j;
  j["name"] = g.name;
  j["num_qubits"] = g.width;
  j["height"] = g.height;
  auto gates = ojson::array();
  for (const auto& x : g.gates) {
    std::vector<int> qs;
    for (int c = x.lo; c <= x.hi; ++c) qs.push_back(c);
    gates.push_back({{"id", x.id},
                     {"qubits", qs},
                     {"tag", role_name(x.role)},
                     {"level", x.level},
                     {"canonical_levels", x.canonical_levels}});
  }
  j["gates"] = std::move(gates);
  ojson wires = ojson::object();
  auto cols = g.column_orders();
  for (int c = 1; c <= g.width; ++c) wires[std::to_string(c)] = cols[c - 1];
  j["wire_orders"] = std::move(wires);
  auto ports = ojson::array();
  for (const auto& p : g.ports)
    ports.push_back({{"gate", p.gate},
                     {"side", side_name(p.side)},
                     {"polarity", p.polarity == Polarity::Input ? "input" : "output"}});
  j["ports"] = std::move(ports);
  return j;
}

inline Gadget gadget_from_json(const nlohmann::json& j) {
  Gadget g;
  g.name = detail::field<std::string>(j, "name", "gadget");
  g.width = detail::field<int>(j, "num_qubits", "gadget");
  g.height = detail::field<int>(j, "height", "gadget");
  for (const auto& x : j.at("gates")) {
    auto qs = detail::field<std::vector<int>>(x, "qubits", "gadget gate");
    if (qs.empty()) throw Error(ErrorCode::InvalidInstance, "gadget gate without qubits");
    for (std::size_t i = 1; i < qs.size(); ++i)
      if (qs[i] != qs[i - 1] + 1) throw Error(ErrorCode::InvalidInstance, "gadget gates must be contiguous");
    g.gates.push_back({detail::field<std::string>(x, "id", "gadget gate"), qs.front(), qs.back(),
                       detail::field<int>(x, "level", "gadget gate"),
                       role_from_name(detail::field<std::string>(x, "tag", "gadget gate")),
                       detail::field<std::vector<int>>(x, "canonical_levels", "gadget gate")});
  }
  if (j.contains("ports"))
    for (const auto& p : j.at("ports"))
      g.ports.push_back({detail::field<std::string>(p, "gate", "port"),
                         side_from_name(detail::field<std::string>(p, "side", "port")),
                         detail::field<std::string>(p, "polarity", "port") == "input" ? Polarity::Input
                                                                                      : Polarity::Output});
  // The stored wire orders must agree with the drawn levels.
  auto inst = instance_from_json(j);
  if (!(inst == g.instantiate()))
    throw Error(ErrorCode::InvalidInstance, "gadget '" + g.name + "' wire orders disagree with its levels");
  return g;
}

// ---- Compiled instances ------------------------------------------------------

inline ojson to_json(const GadgetPlacement& p) {
  ojson j;
  j["gadget"] = p.gadget;
  j["label"] = p.label;
  j["column_offset"] = p.column_offset;
  j["level_offset"] = p.level_offset;
  ojson ids = ojson::object();
  for (const auto& [a, b] : p.instance_gate_ids) ids[a] = b;
  j["instance_gate_ids"] = std::move(ids);
  ojson sig = ojson::object();
  for (const auto& [a, b] : p.port_signals) sig[a] = b;
  j["port_signals"] = std::move(sig);
  return j;
}

inline GadgetPlacement placement_from_json(const nlohmann::json& j) {
  GadgetPlacement p;
  p.gadget = detail::field<std::string>(j, "gadget", "placement");
  p.label = detail::field<std::string>(j, "label", "placement");
  p.column_offset = detail::field<int>(j, "column_offset", "placement");
  p.level_offset = detail::field<int>(j, "level_offset", "placement");
  p.instance_gate_ids = detail::field<std::map<std::string, std::string>>(j, "instance_gate_ids", "placement");
  p.port_signals = detail::field<std::map<std::string, std::string>>(j, "port_signals", "placement");
  return p;
}

inline ojson to_json(const CompiledInstance& ci) {
  ojson j;
  j["h"] = ci.h;
  j["stage_count"] = ci.stage_count;
  j["stage_height"] = ci.stage_height;
  RectilinearInstance f{ci.formula, {}};
  auto fj = to_json(f);
  j["formula"] = {{"variables", fj["variables"]}, {"clauses", fj["clauses"]}};
  if (fj.contains("clause_names")) j["formula"]["clause_names"] = fj["clause_names"];
  ojson probe = ojson::object();
  for (const auto& [v, id] : ci.variable_probe) probe[v] = id;
  j["variable_probe"] = std::move(probe);
  ojson vb = ojson::object();
  for (const auto& [v, i] : ci.variable_block) vb[v] = i;
  j["variable_block"] = std::move(vb);
  ojson sm = ojson::object();
  for (const auto& [k, chain] : ci.signal_map) sm[k] = chain;
  j["signal_map"] = std::move(sm);
  auto pls = ojson::array();
  for (const auto& p : ci.placements) pls.push_back(to_json(p));
  j["placements"] = std::move(pls);
  ojson fl = ojson::object();
  for (const auto& [id, l] : ci.filler_levels) fl[id] = l;
  j["filler_levels"] = std::move(fl);
  j["instance"] = to_json(ci.instance);
  return j;
}

inline CompiledInstance compiled_from_json(const nlohmann::json& j) {
  CompiledInstance ci;
  ci.h = detail::field<int>(j, "h", "compiled");
  ci.stage_count = detail::field<int>(j, "stage_count", "compiled");
  ci.stage_height = detail::field<int>(j, "stage_height", "compiled");
  {
    nlohmann::json fj = detail::field<nlohmann::json>(j, "formula", "compiled");
    ci.formula = parse_rectilinear(fj.dump()).formula;
  }
  ci.variable_probe = detail::field<std::map<std::string, GateId>>(j, "variable_probe", "compiled");
  ci.variable_block = detail::field<std::map<std::string, std::size_t>>(j, "variable_block", "compiled");
  ci.signal_map = detail::field<std::map<std::string, std::vector<GateId>>>(j, "signal_map", "compiled");
  for (const auto& p : j.at("placements")) ci.placements.push_back(placement_from_json(p));
  ci.filler_levels = detail::field<std::map<GateId, int>>(j, "filler_levels", "compiled");
  ci.instance = instance_from_json(j.at("instance"));
  for (const auto& [v, i] : ci.variable_block)
    if (i >= ci.placements.size()) throw Error(ErrorCode::SyntaxError, "variable_block index out of range");
  return ci;
}

inline CompiledInstance parse_compiled(const std::string& text) { return compiled_from_json(parse_json_text(text)); }
inline std::string serialize(const CompiledInstance& ci) { return dump(to_json(ci)); }

}  // namespace braidpack
