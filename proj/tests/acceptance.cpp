// SPDX-License-Identifier: Apache-2.0
//
// One PASS/FAIL line per acceptance criterion, each with its time budget.
// Exits non-zero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <thread>

#include "httplib.h"

#include "aosd/engine.hpp"
#include "aosd/json_codec.hpp"
#include "aosd/metrics.hpp"
#include "aosd/pack_io.hpp"
#include "aosd/progression.hpp"
#include "aosd/service.hpp"
#include "aosd/solver.hpp"
#include "support.hpp"

using namespace aosd;
using namespace aosd::testing;

namespace {

using Check = std::function<std::string()>;  // empty string on success

int g_failed = 0;

void criterion(const std::string& name, double budget_s, const Check& check) {
  auto t0 = std::chrono::steady_clock::now();
  std::string failure;
  try {
    failure = check();
  } catch (const std::exception& e) {
    failure = std::string("exception: ") + e.what();
  }
  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (failure.empty() && elapsed >= budget_s) failure = "over time budget";
  bool pass = failure.empty();
  if (!pass) ++g_failed;
  std::printf("%s  %-28s %8.3fs  (budget %.0fs)%s%s\n", pass ? "PASS" : "FAIL", name.c_str(), elapsed, budget_s,
              pass ? "" : "  ", failure.c_str());
  std::fflush(stdout);
}

template <typename F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::IoError;
}

// Mean Jaccard ratio over every unordered pair of keyword sets.
Rational oracle_cohesion(const std::vector<std::set<std::string>>& sets) {
  if (sets.size() < 2) return Rational(1);
  int64_t pairs = 0;
  Rational sum(0);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      std::size_t inter = 0;
      for (const auto& w : sets[i]) inter += sets[j].count(w);
      std::size_t uni = sets[i].size() + sets[j].size() - inter;
      sum += Rational(static_cast<int64_t>(inter), static_cast<int64_t>(uni));
      ++pairs;
    }
  }
  return sum / pairs;
}

std::string cohesion_oracle() {
  std::mt19937_64 rng(1001);
  for (int i = 0; i < 1000; ++i) {
    int alphabet = 1 + static_cast<int>(rng() % 4);
    std::vector<std::set<std::string>> raw;
    int elements = 1 + static_cast<int>(rng() % 6);
    for (int e = 0; e < elements; ++e) {
      KeywordSet k = random_keywords(rng, alphabet, 3);
      raw.emplace_back(k.begin(), k.end());
    }
    ClassBox c = box("c", KeywordSet::from(raw[0]));
    for (int e = 1; e < elements; ++e) {
      Member m = rng() % 2 ? attribute("m" + std::to_string(e), KeywordSet::from(raw[e]))
                           : method("m" + std::to_string(e), KeywordSet::from(raw[e]));
      c.members.push_back(m);
    }
    if (class_cohesion(c) != oracle_cohesion(raw)) return "mismatch at class " + std::to_string(i);
  }
  return {};
}

std::string coupling_oracle() {
  std::mt19937_64 rng(2002);
  for (int g = 0; g < 1000; ++g) {
    int n = 1 + static_cast<int>(rng() % 8);
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    Design d;
    for (int i = 0; i < n; ++i) d.classes.push_back(box("c" + std::to_string(i), {"k"}));
    int attempts = static_cast<int>(rng() % (2 * n * n + 1));
    for (int e = 0; e < attempts; ++e) {
      int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
      Move m = Connect{d.classes[a].id, d.classes[b].id};
      if (a == b) {
        if (code_of([&] { apply_structural_edit(d, m); }) != Errc::IllegalSelfAssociation) {
          return "self edge accepted in graph " + std::to_string(g);
        }
        continue;
      }
      d = apply_structural_edit(d, m);
      adj[a][b] = adj[b][a] = true;
    }
    int total = 0;
    for (int i = 0; i < n; ++i) {
      int degree = 0;
      for (int j = 0; j < n; ++j) degree += adj[i][j] ? 1 : 0;
      total += degree;
      if (cbo_per_class(d, d.classes[i].id) != degree) return "per-class mismatch in graph " + std::to_string(g);
    }
    if (avg_cbo(d) != Rational(total, n)) return "avg mismatch in graph " + std::to_string(g);
    if (d.associations.size() * 2 != static_cast<std::size_t>(total)) return "parallel edge kept";
  }
  return {};
}

std::string two_solutions() {
  auto p = bundled_puzzle("garage");
  SolveResult r = enumerate_solutions(*p, p->solver_caps);
  if (!r.exhaustive) return "search not exhaustive";
  if (r.solutions.size() < 2) return std::to_string(r.solutions.size()) + " solution(s)";
  std::set<int> composites;
  for (const auto& s : r.solutions) {
    composites.insert(s.composite());
    Session played = replay(p, s.path).session;
    if (!finish(played).report.accepted) return "finish rejected a solution";
  }
  if (composites.size() < 2) return "composites are all equal";
  return {};
}

std::string unlock_semantics() {
  std::mt19937_64 rng(4004);
  ScoreReport ok;
  ok.accepted = true;
  for (int round = 0; round < 300; ++round) {
    int n = 1 + static_cast<int>(rng() % 20);
    PuzzleTree t;
    for (int i = 0; i < n; ++i) {
      std::string id = "p" + std::to_string(i);
      t.order.push_back(id);
      t.prerequisites[id];
      for (int j = 0; j < i; ++j) {
        if (rng() % 3 == 0) t.prerequisites[id].insert("p" + std::to_string(j));
      }
    }
    validate_tree(t);
    SaveGame s = new_save("p");
    std::set<std::string> done;
    for (int step = 0; step < 3 * n; ++step) {
      std::string pick = t.order[rng() % n];
      auto before = unlocked(t, s);
      // Independent rule: unlocked iff every prerequisite is done.
      bool expect = std::all_of(t.prerequisites[pick].begin(), t.prerequisites[pick].end(),
                                [&](const std::string& q) { return done.count(q) > 0; });
      if (before.count(pick) != (expect ? 1u : 0u)) return "unlocked() disagrees with prerequisite rule";
      if (!expect) {
        if (code_of([&] { complete(t, s, pick, ok); }) != Errc::LockedPuzzle) return "locked completion allowed";
        continue;
      }
      ok.composite = static_cast<int>(rng() % 101);
      SaveGame next = complete(t, s, pick, ok);
      done.insert(pick);
      for (const auto& id : before) {
        if (!unlocked(t, next).count(id)) return "unlock set shrank";
      }
      s = next;
    }
  }
  if (code_of([] { load_pack(fixture("cycle.json")); }) != Errc::InvariantError) return "cyclic pack loaded";
  return {};
}

std::string worked_values() {
  ClassBox v = box("v", {"vehicle"}, {attribute("x", {"wheel"}), attribute("y", {"vehicle", "wheel"})});
  if (class_cohesion(v) != Rational(1, 3)) return "CC = " + to_string(class_cohesion(v));
  Design d = chain({"A", "B", "C"});
  if (avg_cbo(d) != Rational(4, 3)) return "avg_cbo = " + to_string(avg_cbo(d));

  PuzzleDef p;
  p.id = "progress";
  p.initial.classes = {box("a", {"k"})};
  PatternSlot slot{"s", {}, {}};
  for (int i = 1; i <= 4; ++i) {
    p.initial.unplaced.push_back(attribute("t" + std::to_string(i), {"k"}));
    slot.members.push_back({MemberKind::attribute, "t" + std::to_string(i)});
  }
  SolutionSpec spec;
  spec.kind = SolutionKind::pattern;
  spec.pattern = PatternTemplate{{slot}, {}, {}};
  p.solutions = {spec};
  Design half = apply_structural_edit(p.initial, PlaceMember{"t1", "a"});
  half = apply_structural_edit(half, PlaceMember{"t2", "a"});
  if (progress(half, p) != Rational(1, 2)) return "progress = " + to_string(progress(half, p));
  return {};
}

std::vector<Move> illegal_moves(const Design& d) {
  std::vector<Move> out = {PlaceMember{"ghost", d.classes[0].id}, RemoveMember{"ghost"},
                           Connect{d.classes[0].id, d.classes[0].id}, Disconnect{"ghost", d.classes[0].id},
                           DeleteClass{"ghost"}};
  for (const auto& c : d.classes) {
    for (const auto& m : c.members) out.push_back(PlaceMember{m.id, c.id});
  }
  return out;
}

std::string replay_determinism() {
  std::mt19937_64 rng(6006);
  for (const auto& puzzle : bundled_pack().puzzles) {
    auto p = std::make_shared<const PuzzleDef>(puzzle);
    for (int trial = 0; trial < 200; ++trial) {
      Session s = start_session(p).session;
      std::vector<int> trace = {s.last_report.composite};
      int steps = 1 + static_cast<int>(rng() % 12);
      for (int step = 0; step < steps; ++step) {
        auto moves = candidate_moves(*p, s.design);
        if (moves.empty()) break;
        MoveOutcome o = play_move(s, moves[rng() % moves.size()]);
        if (!o.event.move_accepted) {
          if (!(o.session == s)) return puzzle.id + ": rejected candidate changed the session";
          continue;
        }
        s = o.session;
        trace.push_back(s.last_report.composite);

        auto bad = illegal_moves(s.design);
        const Move& m = bad[rng() % bad.size()];
        std::string before = dump_canonical(encode(s.design));
        MoveOutcome rejected = play_move(s, m);
        if (rejected.event.move_accepted) return puzzle.id + ": illegal move accepted: " + describe(m);
        if (!(rejected.session == s) || dump_canonical(encode(rejected.session.design)) != before) {
          return puzzle.id + ": illegal move changed state";
        }
      }
      Replay a = replay(p, s.move_log);
      Replay b = replay(p, s.move_log);
      if (a.session.design != s.design || b.session.design != s.design) return puzzle.id + ": replayed design differs";
      if (a.composites != trace || b.composites != trace) return puzzle.id + ": composite trace differs";
    }
  }
  return {};
}

std::string flow_conservation() {
  std::mt19937_64 rng(7007);
  for (const auto& p : bundled_pack().puzzles) {
    std::vector<std::string> ids;
    for (const auto& c : p.initial.classes) {
      for (const auto& m : c.members) ids.push_back(m.id);
    }
    for (const auto& m : p.initial.unplaced) ids.push_back(m.id);
    for (int trial = 0; trial < 500; ++trial) {
      Design d = p.initial;
      for (const auto& id : ids) {
        std::size_t slot = rng() % (d.classes.size() + 1);
        auto where = d.location_of(id);
        if (slot == d.classes.size()) {
          if (!where->empty()) d = apply_structural_edit(d, RemoveMember{id});
        } else if (*where != d.classes[slot].id) {
          d = apply_structural_edit(d, PlaceMember{id, d.classes[slot].id});
        }
      }
      FlowGraph g = derive_flows(d);
      // Count placed declared calls directly from member behaviour.
      std::size_t declared = 0;
      for (const auto& c : d.classes) {
        for (const auto& m : c.members) declared += m.behavior.calls.size();
      }
      std::size_t unresolved = 0;
      for (const auto& u : g.unresolved) unresolved += u.kind == ReferenceKind::call ? 1 : 0;
      if (g.control_edges.size() + unresolved != declared) return p.id + ": calls not conserved";

      const std::string& mover = ids[rng() % ids.size()];
      const std::string& target = d.classes[rng() % d.classes.size()].id;
      if (d.location_of(mover) == target) continue;
      FlowDelta delta = flow_delta(g, derive_flows(apply_structural_edit(d, PlaceMember{mover, target})));
      const Member* moved = d.find_member(mover);
      for (const auto* list : {&delta.control_added, &delta.control_removed}) {
        for (const auto& e : *list) {
          if (e.caller.member_id != mover && e.callee.member_id != mover) return p.id + ": non-incident control edge";
        }
      }
      for (const auto* list : {&delta.data_added, &delta.data_removed}) {
        for (const auto& e : *list) {
          if (e.method.member_id != mover && e.attribute.member_id != mover) return p.id + ": non-incident data edge";
        }
      }
      for (const auto* list : {&delta.unresolved_added, &delta.unresolved_removed}) {
        for (const auto& u : *list) {
          if (u.method.member_id != mover && u.name != moved->name) return p.id + ": non-incident reference";
        }
      }
    }
  }
  return {};
}

std::string pack_round_trip() {
  for (const char* name : {"small.json", "unsolvable.json"}) {
    PuzzlePack first = load_pack(fixture(name));
    std::string text = serialize_pack(first);
    PuzzlePack second = parse_pack(text);
    if (!(first == second) || serialize_pack(second) != text) return std::string(name) + " not idempotent";
  }
  PuzzlePack bundled = load_pack(bundled_pack_path());
  if (!(parse_pack(serialize_pack(bundled)) == bundled)) return "bundled pack not idempotent";

  auto error_of = [](const std::string& name, LoadOptions opts) -> std::optional<Error> {
    try {
      load_pack(fixture(name), opts);
    } catch (const Error& e) {
      return e;
    }
    return std::nullopt;
  };
  auto cycle = error_of("cycle.json", {});
  if (!cycle || cycle->code() != Errc::InvariantError || std::string(cycle->what()).find("cycle") == std::string::npos) {
    return "cycle fixture";
  }
  auto dangling = error_of("dangling.json", {});
  if (!dangling || dangling->code() != Errc::InvariantError || dangling->subject() != "missing-puzzle") {
    return "dangling fixture";
  }
  auto unsolvable = error_of("unsolvable.json", LoadOptions{true, std::nullopt});
  if (!unsolvable || std::string(unsolvable->what()).find("unsolvable") == std::string::npos) {
    return "unsolvable fixture";
  }
  return {};
}

const std::vector<Move> kGarageSolution = {
    PlaceMember{"license-plate", "car"}, PlaceMember{"tire-pressure", "wheel"}, PlaceMember{"horsepower", "engine"},
    PlaceMember{"drive", "engine"},      PlaceMember{"inflate", "wheel"},       PlaceMember{"start", "engine"}};

std::string service_transparency() {
  auto dir = std::filesystem::temp_directory_path() / ("aosd-acceptance-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  auto pack = std::make_shared<const PuzzlePack>(load_pack(bundled_pack_path()));
  const std::string player = "Ada Lovelace";
  std::string failure;
  Json tree_before;
  {
    GameService service(pack, ServiceConfig{dir, kDefaultCboWarningThreshold});
    HttpServer server(service);
    int port = server.bind("127.0.0.1", 0);
    std::thread loop([&] { server.listen(); });
    httplib::Client client("127.0.0.1", port);
    for (int i = 0; i < 100 && !client.Get("/packs/current"); ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    auto post = [&](const std::string& path, const Json& body) {
      auto r = client.Post(path, body.is_null() ? "" : body.dump(), "application/json");
      if (!r) throw std::runtime_error("no response for " + path);
      return std::make_pair(r->status, Json::parse(r->body));
    };
    post("/players", Json{{"name", player}});
    auto [st, session] = post("/players/Ada%20Lovelace/sessions", Json{{"puzzle_id", "garage"}});
    std::string token = session.value("token", "");
    for (const auto& m : kGarageSolution) post("/sessions/" + token + "/moves", encode(m));
    auto [fin_status, fin] = post("/sessions/" + token + "/finish", nullptr);
    if (fin_status != 200) failure = "finish returned " + std::to_string(fin_status);
    else if (fin["newly_unlocked"] != Json::array({"thermostat"})) failure = "unexpected unlocks " + fin["newly_unlocked"].dump();
    auto tree = client.Get("/players/Ada%20Lovelace/tree");
    if (tree) tree_before = Json::parse(tree->body);
    server.stop();
    loop.join();
  }
  if (failure.empty()) {
    auto p = std::make_shared<const PuzzleDef>(*pack->find("garage"));
    Session s = start_session(p, "direct").session;
    for (const auto& m : kGarageSolution) s = play_move(s, m).session;
    SaveGame direct = new_save(player);
    direct.active_session = SessionSnapshot{"garage", s.move_log};
    direct = complete(pack->tree, direct, "garage", finish(s).report);
    SaveStore store(dir);
    if (read_file(store.path_for(player)) != dump_canonical(encode(direct))) failure = "save file differs";
  }
  if (failure.empty()) {
    GameService restarted(pack, ServiceConfig{dir, kDefaultCboWarningThreshold});
    ApiResponse r = restarted.handle("GET", "/players/Ada%20Lovelace/tree", "");
    if (r.status != 200 || r.body != tree_before) failure = "tree lost across restart";
  }
  std::filesystem::remove_all(dir);
  return failure;
}

}  // namespace

int main() {
  criterion("cohesion-oracle", 5, cohesion_oracle);
  criterion("coupling-oracle", 5, coupling_oracle);
  criterion("cohesion-two-solutions", 30, two_solutions);
  criterion("unlock-semantics", 30, unlock_semantics);
  criterion("worked-values", 5, worked_values);
  criterion("replay-determinism", 120, replay_determinism);
  criterion("flow-conservation", 60, flow_conservation);
  criterion("pack-round-trip", 60, pack_round_trip);
  criterion("service-transparency", 60, service_transparency);
  std::printf("%s: %d criterion(s) failed\n", g_failed ? "FAIL" : "PASS", g_failed);
  return g_failed ? 1 : 0;
}
