// SPDX-License-Identifier: Apache-2.0
//
// aosd: headless entry points for pack authors and CI.
//
//   aosd validate <pack> [--certify] [--max-states N]
//   aosd score <pack> <puzzle-id> <design-file>
//   aosd solve <pack> <puzzle-id> [--max-states N] [--max-depth D]
//   aosd flows <pack> <puzzle-id> <design-file> [--format dot|json]
//   aosd serve --pack <path> [--data-dir <path>] [--port N] [--cbo-warn N]
//
// Exit codes: 0 ok, 1 usage, 2 load/validation error, 3 design not accepted,
// 4 solver cap exceeded.

#include <algorithm>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "aosd/engine.hpp"
#include "aosd/json_codec.hpp"
#include "aosd/pack_io.hpp"
#include "aosd/service.hpp"
#include "aosd/solver.hpp"

namespace {

using namespace aosd;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitLoad = 2;
constexpr int kExitNotAccepted = 3;
constexpr int kExitCapExceeded = 4;

// Failures before any result exists: human text on stderr only.
int report_error(const Error& e) {
  std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
  return kExitLoad;
}

const PuzzleDef& require_puzzle(const PuzzlePack& pack, const std::string& id) {
  const PuzzleDef* p = pack.find(id);
  if (!p) throw Error(Errc::UnknownId, "pack has no puzzle '" + id + "'", id);
  return *p;
}

Design read_design(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read design file '" + path + "'", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  Json j = parse_json_text(buf.str(), path);
  // Accept a bare Design or a wrapper object with a "design" field.
  Design d = j.is_object() && j.contains("design") ? decode_design(j["design"], "design") : decode_design(j, "design");
  if (auto v = validate_design(d); !v.empty()) {
    throw Error(Errc::InvariantError, "design file: " + v.front().message, v.front().id);
  }
  return d;
}

int cmd_validate(const std::string& pack_path, bool certify, std::optional<std::size_t> max_states) {
  PuzzlePack pack;
  try {
    pack = load_pack(pack_path);
  } catch (const Error& e) {
    std::cout << dump_canonical(Json{{"ok", false}, {"error", error_body(e)}});
    return report_error(e);
  }
  PackReport report = validate_pack(pack, certify, max_states);
  std::cout << dump_canonical(encode(report));
  for (const auto& row : report.puzzles) {
    for (const auto& p : row.problems) std::cerr << row.id << ": " << p << "\n";
  }
  for (const auto& p : report.tree_problems) std::cerr << "tree: " << p << "\n";
  return report.ok() ? kExitOk : kExitLoad;
}

int cmd_score(const std::string& pack_path, const std::string& puzzle_id, const std::string& design_path) {
  PuzzlePack pack;
  Design design;
  try {
    pack = load_pack(pack_path);
    require_puzzle(pack, puzzle_id);
    design = read_design(design_path);
  } catch (const Error& e) {
    return report_error(e);
  }
  const PuzzleDef& puzzle = require_puzzle(pack, puzzle_id);
  Evaluation ev;
  try {
    ev = evaluate(design, puzzle, effective_warning_threshold(puzzle));
  } catch (const Error& e) {
    return report_error(e);
  }
  Json out = encode(ev);
  out["puzzle"] = puzzle_id;
  std::cout << dump_canonical(out);
  std::cerr << puzzle_id << ": composite " << ev.report().composite << ", "
            << (ev.accepted() ? "accepted" : "not accepted") << "\n";
  return ev.accepted() ? kExitOk : kExitNotAccepted;
}

int cmd_solve(const std::string& pack_path, const std::string& puzzle_id, std::optional<std::size_t> max_states,
              std::optional<std::size_t> max_depth, bool serial) {
  PuzzlePack pack;
  try {
    pack = load_pack(pack_path);
    require_puzzle(pack, puzzle_id);
  } catch (const Error& e) {
    return report_error(e);
  }
  const PuzzleDef& puzzle = require_puzzle(pack, puzzle_id);
  SolverCaps caps = puzzle.solver_caps;
  if (max_states) caps.max_states = *max_states;
  if (max_depth) caps.max_depth = *max_depth;
  SolveResult r = serial ? enumerate_solutions_serial(puzzle, caps) : enumerate_solutions(puzzle, caps);

  std::vector<const Solution*> sorted;
  for (const auto& s : r.solutions) sorted.push_back(&s);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Solution* x, const Solution* y) { return x->composite() > y->composite(); });
  Json solutions = Json::array();
  for (const auto* s : sorted) {
    Json moves = Json::array();
    for (const auto& m : s->path) moves.push_back(encode(m));
    solutions.push_back(Json{{"composite", s->composite()},
                             {"design", encode(s->design)},
                             {"moves", moves},
                             {"report", encode(s->report)}});
  }
  std::cout << dump_canonical(Json{{"puzzle", puzzle_id},
                                   {"exhaustive", r.exhaustive},
                                   {"cap_exceeded", r.cap_exceeded},
                                   {"states_visited", r.states_visited},
                                   {"depth_reached", r.depth_reached},
                                   {"solvable", !r.solutions.empty()},
                                   {"caps", Json{{"max_states", caps.max_states}, {"max_depth", caps.max_depth}}},
                                   {"solutions", solutions}});
  std::cerr << puzzle_id << ": " << r.solutions.size() << " solution(s), " << r.states_visited << " states"
            << (r.exhaustive ? ", exhaustive" : ", not exhaustive") << "\n";
  if (r.cap_exceeded) {
    std::cerr << "error: CapExceeded: state cap of " << caps.max_states << " reached\n";
    return kExitCapExceeded;
  }
  return kExitOk;
}

int cmd_flows(const std::string& pack_path, const std::string& puzzle_id, const std::string& design_path,
              const std::string& format) {
  PuzzlePack pack;
  Design design;
  try {
    pack = load_pack(pack_path);
    require_puzzle(pack, puzzle_id);
    design = read_design(design_path);
  } catch (const Error& e) {
    return report_error(e);
  }
  FlowGraph g = derive_flows(design);
  annotate(g, pack.annotations_for(puzzle_id));
  if (format == "dot") {
    std::cout << to_dot(g, design);
  } else {
    std::cout << dump_canonical(encode(g));
  }
  return kExitOk;
}

HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const std::string& pack_path, const std::string& data_dir, int port, int cbo_warn) {
  std::shared_ptr<const PuzzlePack> pack;
  try {
    pack = std::make_shared<const PuzzlePack>(load_pack(pack_path));
  } catch (const Error& e) {
    return report_error(e);
  }
  try {
    GameService service(pack, ServiceConfig{data_dir, cbo_warn});
    HttpServer server(service);
    int bound = server.bind("0.0.0.0", port);
    if (bound < 0) {
      std::cerr << "error: cannot bind port " << port << "\n";
      return kExitLoad;
    }
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "serving pack '" << pack->id << "' on port " << bound << ", data in " << data_dir << "\n";
    server.listen();
    g_server = nullptr;
  } catch (const Error& e) {
    return report_error(e);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Software design puzzle engine: validate packs, score designs, enumerate solutions, serve the game"};
  app.require_subcommand(1);

  std::string pack_path;
  std::string puzzle_id;
  std::string design_path;
  std::optional<std::size_t> max_states;
  std::optional<std::size_t> max_depth;
  bool certify = false;
  bool serial = false;
  std::string format = "json";
  std::string data_dir = "data";
  int port = kDefaultPort;
  int cbo_warn = kDefaultCboWarningThreshold;

  auto* validate = app.add_subcommand("validate", "Check a pack's structure and, with --certify, solvability");
  validate->add_option("pack", pack_path, "Pack file")->required();
  validate->add_flag("--certify", certify, "Run the solver on every puzzle");
  validate->add_option("--max-states", max_states, "Override per-puzzle state caps")->check(CLI::PositiveNumber);

  auto* score = app.add_subcommand("score", "Score a design file against a puzzle");
  score->add_option("pack", pack_path, "Pack file")->required();
  score->add_option("puzzle", puzzle_id, "Puzzle id")->required();
  score->add_option("design", design_path, "Design JSON file")->required();
  score->add_option("--format", format, "Output format")->check(CLI::IsMember({"json"}));

  auto* solve = app.add_subcommand("solve", "Enumerate accepted designs reachable from the initial fragment");
  solve->add_option("pack", pack_path, "Pack file")->required();
  solve->add_option("puzzle", puzzle_id, "Puzzle id")->required();
  solve->add_option("--max-states", max_states, "State cap")->check(CLI::PositiveNumber);
  solve->add_option("--max-depth", max_depth, "Move depth cap")->check(CLI::PositiveNumber);
  solve->add_flag("--serial", serial, "Use the single-threaded reference search");
  solve->add_option("--format", format, "Output format")->check(CLI::IsMember({"json"}));

  auto* flows = app.add_subcommand("flows", "Derive the control/data flow graph of a design");
  flows->add_option("pack", pack_path, "Pack file")->required();
  flows->add_option("puzzle", puzzle_id, "Puzzle id")->required();
  flows->add_option("design", design_path, "Design JSON file")->required();
  flows->add_option("--format", format, "dot or json")->check(CLI::IsMember({"dot", "json"}));

  auto* serve = app.add_subcommand("serve", "Run the HTTP game service");
  serve->add_option("--pack", pack_path, "Pack file")->required();
  serve->add_option("--data-dir", data_dir, "Directory for save files");
  serve->add_option("--port", port, "Listen port")->check(CLI::Range(0, 65535));
  serve->add_option("--cbo-warn", cbo_warn, "Default per-class CBO warning threshold")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*validate) return cmd_validate(pack_path, certify, max_states);
  if (*score) return cmd_score(pack_path, puzzle_id, design_path);
  if (*solve) return cmd_solve(pack_path, puzzle_id, max_states, max_depth, serial);
  if (*flows) return cmd_flows(pack_path, puzzle_id, design_path, format);
  if (*serve) return cmd_serve(pack_path, data_dir, port, cbo_warn);
  return kExitUsage;
}
