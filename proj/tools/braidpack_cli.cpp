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

// braidpack command-line front end.
//
// Exit codes: 0 success or feasible, 1 infeasible or invalid input,
// 2 inconclusive (time limit) or internal error.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "braidpack/braidpack.hpp"

namespace bp = braidpack;

namespace {

constexpr int kOk = 0;
constexpr int kNo = 1;
constexpr int kInconclusive = 2;

void print(const bp::ojson& j) { std::cout << bp::dump(j); }

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    bp::write_text_file(path, text);
  }
}

bp::Assignment parse_assignment(const std::string& text, const bp::Formula& f) {
  if (text == "auto") {
    auto s = bp::brute_sat(f);
    if (!s.satisfiable) throw bp::Error(bp::ErrorCode::IncompleteAssignment, "formula is unsatisfiable");
    return *s.assignment;
  }
  bp::Assignment a;
  std::size_t start = 0;
  while (start < text.size()) {
    auto comma = text.find(',', start);
    std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    start = comma == std::string::npos ? text.size() : comma + 1;
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw bp::Error(bp::ErrorCode::SyntaxError, "expected var=T|F, got '" + item + "'");
    std::string var = item.substr(0, eq), val = item.substr(eq + 1);
    if (val == "T" || val == "t" || val == "1" || val == "true") {
      a[var] = true;
    } else if (val == "F" || val == "f" || val == "0" || val == "false") {
      a[var] = false;
    } else {
      throw bp::Error(bp::ErrorCode::SyntaxError, "bad truth value '" + val + "' for " + var);
    }
  }
  for (const auto& [var, _] : a) {
    bool known = false;
    for (const auto& v : f.variables) known = known || v == var;
    if (!known) throw bp::Error(bp::ErrorCode::UnknownVariable, "assignment names unknown variable '" + var + "'");
  }
  return a;
}

bp::ojson assignment_json(const bp::Assignment& a, const bp::Formula& f) {
  bp::ojson j = bp::ojson::object();
  for (const auto& v : f.variables)
    if (a.count(v)) j[v] = a.at(v);
  return j;
}

bp::Instance load_instance(const std::string& path) { return bp::parse_instance(bp::read_text_file(path)); }
bp::Packing load_packing(const std::string& path) { return bp::parse_packing(bp::read_text_file(path)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"braidpack: depth minimization of 1D braided circuits"};
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, "Worker threads for solvers (default: BRAIDPACK_WORKERS or 1)");

  // validate
  auto* validate = app.add_subcommand("validate", "Check a formula and its rectilinear drawing");
  std::string v_input;
  validate->add_option("--input", v_input, "Formula document")->required();

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Compile a formula with its drawing into a braiding instance");
  std::string r_input, r_out, r_compiled, r_placements;
  reduce->add_option("--input", r_input, "Formula document")->required();
  reduce->add_option("--out", r_out, "Instance file to write")->required();
  reduce->add_option("--compiled", r_compiled, "Also write the full compiled document (needed by witness/extract)");
  reduce->add_option("--emit-placements", r_placements, "Write the gadget placements");

  // witness
  auto* witness = app.add_subcommand("witness", "Build the packing that encodes an assignment");
  std::string w_compiled, w_assign, w_out;
  witness->add_option("--compiled", w_compiled, "Compiled document from reduce --compiled")->required();
  witness->add_option("--assignment", w_assign, "x1=T,x2=F,... or 'auto' for the first satisfying one")->required();
  witness->add_option("--out", w_out, "Packing file to write")->required();

  // extract
  auto* extract = app.add_subcommand("extract", "Read the assignment encoded by a packing");
  std::string e_compiled, e_packing;
  extract->add_option("--compiled", e_compiled, "Compiled document")->required();
  extract->add_option("--packing", e_packing, "Packing file")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Pack an instance (exact or heuristic)");
  std::string s_instance, s_out, s_neigh = "swap", s_init = "identity";
  bool s_exact = false, s_heur = false;
  std::optional<int> s_height;
  std::optional<double> s_time;
  std::uint64_t s_seed = 1;
  long s_iters = 1000;
  int s_restarts = 1;
  auto* fx = solve->add_flag("--exact", s_exact, "Exact branch and bound");
  auto* fh = solve->add_flag("--heuristic", s_heur, "List scheduling with simulated annealing");
  fx->excludes(fh);
  solve->add_option("--instance", s_instance, "Instance file")->required();
  solve->add_option("--height", s_height, "Decide feasibility at this height instead of minimizing");
  solve->add_option("--time-limit", s_time, "Seconds before giving up (exact)");
  solve->add_option("--workers", workers, "Worker threads");
  solve->add_option("--seed", s_seed, "Heuristic seed");
  solve->add_option("--iterations", s_iters, "Annealing steps per restart");
  solve->add_option("--restarts", s_restarts, "Independent restarts");
  solve->add_option("--neighborhood", s_neigh, "adjacent | swap | reverse")
      ->check(CLI::IsMember({"adjacent", "swap", "reverse"}));
  solve->add_option("--initial-order", s_init, "identity | random | span")
      ->check(CLI::IsMember({"identity", "random", "span"}));
  solve->add_option("--out", s_out, "Write the witness packing here");

  // verify
  auto* verify = app.add_subcommand("verify", "Check a packing against an instance");
  std::string vf_instance, vf_packing;
  std::optional<int> vf_height;
  verify->add_option("--instance", vf_instance, "Instance file")->required();
  verify->add_option("--packing", vf_packing, "Packing file")->required();
  verify->add_option("--height", vf_height, "Also require height <= H");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Brute-force minimum height (n <= 8, at most 10 gates)");
  std::string o_instance;
  int o_hmax = 10;
  oracle->add_option("--instance", o_instance, "Instance file")->required();
  oracle->add_option("--h-max", o_hmax, "Largest height tried");

  // render
  auto* rend = app.add_subcommand("render", "Draw a packing as ASCII or SVG");
  std::string rd_instance, rd_packing, rd_gadget, rd_out, rd_format = "ascii", rd_dir = "top-down-time";
  bool rd_plain = false;
  int rd_scale = 12;
  rend->add_option("--instance", rd_instance, "Instance file");
  rend->add_option("--packing", rd_packing, "Packing file");
  rend->add_option("--gadget", rd_gadget, "Draw a gadget as drawn (descriptor such as copy:1/mirror)");
  rend->add_option("--format", rd_format, "ascii | svg")->check(CLI::IsMember({"ascii", "svg"}));
  rend->add_option("--direction", rd_dir, "top-down-time | bottom-up-level")
      ->check(CLI::IsMember({"top-down-time", "bottom-up-level"}));
  rend->add_flag("--no-color", rd_plain, "Same glyph/colour for every role");
  rend->add_option("--scale", rd_scale, "SVG cell size")->check(CLI::PositiveNumber);
  rend->add_option("--out", rd_out, "Output file (default stdout)");

  // gadgets
  auto* gadgets = app.add_subcommand("gadgets", "Gadget library");
  gadgets->require_subcommand(1);
  auto* g_list = gadgets->add_subcommand("list", "Summarize the base gadgets");
  auto* g_show = gadgets->add_subcommand("show", "Print one gadget as JSON");
  std::string g_desc;
  g_show->add_option("descriptor", g_desc, "e.g. clause, copy:2, fixing:8, not/w=9/mirror")->required();
  auto* g_export = gadgets->add_subcommand("export", "Write every base gadget file into a directory");
  std::string g_dir;
  g_export->add_option("--dir", g_dir, "Target directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kNo;
  }

  try {
    if (*validate) {
      auto ri = bp::parse_rectilinear(bp::read_text_file(v_input));
      auto problems = bp::validate_drawing(ri.formula, ri.drawing);
      bp::ojson j;
      j["valid"] = problems.empty();
      j["variables"] = ri.formula.variables.size();
      j["clauses"] = ri.formula.clauses.size();
      j["edges"] = ri.drawing.edges.size();
      auto vs = bp::ojson::array();
      for (const auto& p : problems) vs.push_back({{"kind", p.kind}, {"subjects", p.subjects}, {"detail", p.detail}});
      j["violations"] = vs;
      print(j);
      return problems.empty() ? kOk : kNo;
    }
    if (*reduce) {
      auto ri = bp::parse_rectilinear(bp::read_text_file(r_input));
      auto ci = bp::compile(ri);
      bp::write_text_file(r_out, bp::serialize(ci.instance));
      if (!r_compiled.empty()) bp::write_text_file(r_compiled, bp::serialize(ci));
      if (!r_placements.empty()) {
        auto arr = bp::ojson::array();
        for (const auto& p : ci.placements) arr.push_back(bp::to_json(p));
        bp::write_text_file(r_placements, bp::dump(arr));
      }
      print({{"h", ci.h},
             {"num_qubits", ci.instance.num_qubits()},
             {"num_gates", ci.instance.num_gates()},
             {"stages", ci.stage_count},
             {"stage_height", ci.stage_height},
             {"placements", ci.placements.size()}});
      return kOk;
    }
    if (*witness) {
      auto ci = bp::parse_compiled(bp::read_text_file(w_compiled));
      auto a = parse_assignment(w_assign, ci.formula);
      auto w = bp::witness_packing(ci, a);
      bp::write_text_file(w_out, bp::serialize(w.packing));
      auto rep = bp::check_packing(ci.instance, w.packing);
      const bool good = rep.ok && rep.height_used <= ci.h;
      print({{"verified", good},
             {"flagged", w.flagged},
             {"falsified", w.falsified},
             {"height", rep.height_used},
             {"h", ci.h},
             {"assignment", assignment_json(a, ci.formula)}});
      return good ? kOk : kNo;
    }
    if (*extract) {
      auto ci = bp::parse_compiled(bp::read_text_file(e_compiled));
      auto a = bp::extract_assignment(ci, load_packing(e_packing));
      print({{"assignment", assignment_json(a, ci.formula)}, {"satisfies", bp::evaluate(ci.formula, a)}});
      return kOk;
    }
    if (*solve) {
      auto inst = load_instance(s_instance);
      bp::SolveResult res;
      if (s_heur) {
        bp::HeuristicConfig cfg;
        cfg.seed = s_seed;
        cfg.iterations = s_iters;
        cfg.restarts = s_restarts;
        cfg.workers = workers;
        cfg.neighborhood = s_neigh == "adjacent" ? bp::Neighborhood::AdjacentSwap
                           : s_neigh == "reverse" ? bp::Neighborhood::SegmentReversal
                                                  : bp::Neighborhood::ArbitrarySwap;
        cfg.initial_order = s_init == "random" ? bp::InitialOrder::Random
                            : s_init == "span" ? bp::InitialOrder::SpanSorted
                                               : bp::InitialOrder::Identity;
        res = bp::local_search(inst, cfg);
        if (s_height && *res.best_height > *s_height) res.feasible = false;
      } else {
        bp::SearchLimits lim;
        lim.time_limit_seconds = s_time;
        lim.workers = workers;
        res = s_height ? bp::decide(inst, *s_height, lim) : bp::min_height(inst, lim);
      }
      print(bp::to_json(res));
      if (!s_out.empty() && res.witness) bp::write_text_file(s_out, bp::serialize(*res.witness));
      if (res.feasible) return kOk;
      // A heuristic miss says nothing about feasibility.
      return (res.time_limit_hit || s_heur) ? kInconclusive : kNo;
    }
    if (*verify) {
      auto inst = load_instance(vf_instance);
      auto rep = bp::check_packing(inst, load_packing(vf_packing));
      auto j = bp::to_json(rep);
      bool ok = rep.ok;
      if (vf_height && rep.height_used > *vf_height) {
        ok = false;
        j["height_exceeded"] = true;
      }
      print(j);
      return ok ? kOk : kNo;
    }
    if (*oracle) {
      auto res = bp::oracle_min_height(load_instance(o_instance), o_hmax);
      print(bp::to_json(res));
      return res.feasible ? kOk : kNo;
    }
    if (*rend) {
      bp::RenderOptions opt;
      opt.format = rd_format == "svg" ? bp::RenderFormat::Svg : bp::RenderFormat::Ascii;
      opt.level_direction =
          rd_dir == "bottom-up-level" ? bp::LevelDirection::BottomUpLevel : bp::LevelDirection::TopDownTime;
      opt.color_roles = !rd_plain;
      opt.scale = rd_scale;
      if (!rd_gadget.empty()) {
        auto g = bp::build_gadget(rd_gadget);
        emit(rd_out, bp::render(g.instantiate(), g.drawn_packing(), opt));
        return kOk;
      }
      if (rd_instance.empty() || rd_packing.empty()) {
        std::cerr << "render needs --instance and --packing, or --gadget\n";
        return kNo;
      }
      emit(rd_out, bp::render(load_instance(rd_instance), load_packing(rd_packing), opt));
      return kOk;
    }
    if (*gadgets) {
      if (*g_list) {
        auto arr = bp::ojson::array();
        for (const auto& g : bp::base_gadgets()) {
          arr.push_back({{"name", g.name},
                         {"width", g.width},
                         {"height", g.height},
                         {"gates", g.gates.size()},
                         {"movables", g.movables()}});
        }
        print(arr);
      } else if (*g_show) {
        print(bp::to_json(bp::build_gadget(g_desc)));
      } else if (*g_export) {
        std::filesystem::create_directories(g_dir);
        for (const auto& g : bp::base_gadgets())
          bp::write_text_file((std::filesystem::path(g_dir) / (g.name + ".json")).string(), bp::dump(bp::to_json(g)));
      }
      return kOk;
    }
  } catch (const bp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == bp::ErrorCode::NonCanonicalLevel ? kInconclusive : kNo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInconclusive;
  }
  return kNo;
}
