// SPDX-License-Identifier: Apache-2.0
#include "aosd/pack_io.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "aosd/solver.hpp"

namespace aosd {

const PuzzleDef* PuzzlePack::find(std::string_view puzzle_id) const {
  auto it = std::find_if(puzzles.begin(), puzzles.end(), [&](const PuzzleDef& p) { return p.id == puzzle_id; });
  return it == puzzles.end() ? nullptr : &*it;
}

const std::vector<FlowAnnotation>& PuzzlePack::annotations_for(std::string_view puzzle_id) const {
  static const std::vector<FlowAnnotation> kNone;
  auto it = annotations.find(std::string(puzzle_id));
  return it == annotations.end() ? kNone : it->second;
}

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& message) {
  throw Error(Errc::SchemaError, path + ": " + message, path);
}

[[noreturn]] void invariant_fail(const std::string& message, const std::string& subject) {
  throw Error(Errc::InvariantError, message, subject);
}

std::string str(const Json& obj, const char* key, const std::string& path, bool required = true) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (required) schema_fail(path + "." + key, "missing required field");
    return {};
  }
  if (!it->is_string()) schema_fail(path + "." + key, "expected a string");
  return it->get<std::string>();
}

std::size_t chain_depth(const PuzzleTree& tree) {
  std::map<std::string, std::size_t> memo;
  std::function<std::size_t(const std::string&)> depth = [&](const std::string& id) -> std::size_t {
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    memo[id] = 1;  // cuts cycles; only called on validated trees
    std::size_t d = 1;
    for (const auto& p : tree.requires_of(id)) {
      if (tree.contains(p)) d = std::max(d, depth(p) + 1);
    }
    return memo[id] = d;
  };
  std::size_t out = 0;
  for (const auto& id : tree.order) out = std::max(out, depth(id));
  return out;
}

SolverCaps caps_for(const PuzzleDef& p, std::optional<std::size_t> max_states) {
  SolverCaps caps = p.solver_caps;
  if (max_states) caps.max_states = *max_states;
  return caps;
}

}  // namespace

PuzzlePack parse_pack(std::string_view text, std::string_view source, const LoadOptions& options) {
  const Json root = parse_json_text(text, source);
  const std::string path = "pack";
  if (!root.is_object()) schema_fail(path, "expected an object");
  auto sv = root.find("schema_version");
  if (sv == root.end()) schema_fail(path + ".schema_version", "missing required field");
  if (!sv->is_number_integer()) schema_fail(path + ".schema_version", "expected an integer");
  if (sv->get<int>() != kPackSchemaVersion) {
    schema_fail(path + ".schema_version", "unsupported schema version " + sv->dump());
  }

  PuzzlePack pack;
  pack.id = str(root, "id", path);
  pack.title = str(root, "title", path, false);
  pack.version = str(root, "version", path, false);
  if (auto md = root.find("metadata"); md != root.end() && !md->is_null()) {
    if (!md->is_object()) schema_fail(path + ".metadata", "expected an object");
    for (const auto& [k, v] : md->items()) {
      if (!v.is_string()) schema_fail(path + ".metadata." + k, "expected a string");
      pack.metadata[k] = v.get<std::string>();
    }
  }

  auto puzzles = root.find("puzzles");
  if (puzzles == root.end()) schema_fail(path + ".puzzles", "missing required field");
  if (!puzzles->is_array()) schema_fail(path + ".puzzles", "expected an array");
  for (std::size_t i = 0; i < puzzles->size(); ++i) {
    pack.puzzles.push_back(decode_puzzle((*puzzles)[i], path + ".puzzles[" + std::to_string(i) + "]"));
  }

  std::set<std::string> ids;
  for (const auto& p : pack.puzzles) {
    if (!ids.insert(p.id).second) invariant_fail("puzzle id '" + p.id + "' declared twice", p.id);
    pack.tree.order.push_back(p.id);
    pack.tree.prerequisites[p.id];
  }

  if (auto tree = root.find("tree"); tree != root.end() && !tree->is_null()) {
    const std::string tp = path + ".tree";
    if (!tree->is_array()) schema_fail(tp, "expected an array");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < tree->size(); ++i) {
      const std::string ep = tp + "[" + std::to_string(i) + "]";
      const Json& entry = (*tree)[i];
      if (!entry.is_object()) schema_fail(ep, "expected an object");
      std::string id = str(entry, "puzzle", ep);
      if (!ids.count(id)) invariant_fail("tree references unknown puzzle '" + id + "'", id);
      if (!seen.insert(id).second) invariant_fail("tree lists puzzle '" + id + "' twice", id);
      auto req = entry.find("requires");
      if (req == entry.end() || req->is_null()) continue;
      if (!req->is_array()) schema_fail(ep + ".requires", "expected an array");
      for (std::size_t k = 0; k < req->size(); ++k) {
        if (!(*req)[k].is_string()) schema_fail(ep + ".requires[" + std::to_string(k) + "]", "expected a string");
        pack.tree.prerequisites[id].insert((*req)[k].get<std::string>());
      }
    }
  }
  validate_tree(pack.tree);

  if (auto notes = root.find("flow_annotations"); notes != root.end() && !notes->is_null()) {
    const std::string np = path + ".flow_annotations";
    if (!notes->is_array()) schema_fail(np, "expected an array");
    for (std::size_t i = 0; i < notes->size(); ++i) {
      const std::string ep = np + "[" + std::to_string(i) + "]";
      const Json& n = (*notes)[i];
      if (!n.is_object()) schema_fail(ep, "expected an object");
      std::string puzzle = str(n, "puzzle", ep);
      FlowAnnotation a{str(n, "from", ep), str(n, "to", ep), str(n, "note", ep)};
      const PuzzleDef* p = pack.find(puzzle);
      if (!p) invariant_fail("flow annotation references unknown puzzle '" + puzzle + "'", puzzle);
      for (const auto* member : {&a.from_member, &a.to_member}) {
        if (!p->initial.find_member(*member)) {
          invariant_fail("flow annotation in puzzle '" + puzzle + "' references unknown member '" + *member + "'",
                         *member);
        }
      }
      pack.annotations[puzzle].push_back(std::move(a));
    }
  }

  for (const auto& p : pack.puzzles) {
    if (auto problems = validate_puzzle(p); !problems.empty()) invariant_fail(problems.front(), p.id);
  }

  if (options.certify) {
    for (const auto& p : pack.puzzles) {
      SolveResult r = enumerate_solutions(p, caps_for(p, options.max_states));
      if (r.solutions.empty()) {
        invariant_fail("puzzle '" + p.id + "' is unsolvable: no accepted design reachable within caps" +
                           (r.exhaustive ? " (search space exhausted)" : ""),
                       p.id);
      }
    }
  }
  return pack;
}

PuzzlePack load_pack(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read pack file '" + path.string() + "'", path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_pack(buf.str(), path.filename().string(), options);
}

Json encode(const PuzzlePack& pack) {
  Json puzzles = Json::array();
  Json tree = Json::array();
  for (const auto& p : pack.puzzles) {
    puzzles.push_back(encode(p));
    tree.push_back(Json{{"puzzle", p.id}, {"requires", pack.tree.requires_of(p.id)}});
  }
  Json notes = Json::array();
  for (const auto& p : pack.puzzles) {
    for (const auto& a : pack.annotations_for(p.id)) {
      notes.push_back(Json{{"puzzle", p.id}, {"from", a.from_member}, {"to", a.to_member}, {"note", a.note}});
    }
  }
  return Json{{"schema_version", kPackSchemaVersion},
              {"id", pack.id},
              {"title", pack.title},
              {"version", pack.version},
              {"metadata", pack.metadata},
              {"puzzles", puzzles},
              {"tree", tree},
              {"flow_annotations", notes}};
}

std::string serialize_pack(const PuzzlePack& pack) { return dump_canonical(encode(pack)); }

// ---------------------------------------------------------------- validation

bool PackReport::ok() const {
  if (!tree_problems.empty()) return false;
  return std::all_of(puzzles.begin(), puzzles.end(),
                     [](const PuzzleRow& r) { return r.problems.empty() && (!r.certified || r.solvable); });
}

PackReport validate_pack(const PuzzlePack& pack, bool certify, std::optional<std::size_t> max_states) {
  PackReport report;
  try {
    validate_tree(pack.tree);
    report.roots = pack.tree.roots();
    report.depth = chain_depth(pack.tree);
  } catch (const Error& e) {
    report.tree_problems.push_back(e.what());
  }
  for (const auto& p : pack.puzzles) {
    if (!pack.tree.contains(p.id)) report.tree_problems.push_back("puzzle '" + p.id + "' is missing from the tree");
  }

  for (const auto& p : pack.puzzles) {
    PuzzleRow row;
    row.id = p.id;
    row.problems = validate_puzzle(p);
    if (certify && row.problems.empty()) {
      SolveResult r = enumerate_solutions(p, caps_for(p, max_states));
      row.certified = true;
      row.solvable = !r.solutions.empty();
      row.exhaustive = r.exhaustive;
      row.solutions = r.solutions.size();
      row.states_visited = r.states_visited;
      if (!r.solutions.empty()) {
        auto [lo, hi] = std::minmax_element(r.solutions.begin(), r.solutions.end(),
                                            [](const Solution& x, const Solution& y) { return x.composite() < y.composite(); });
        row.min_score = lo->composite();
        row.max_score = hi->composite();
      } else {
        row.problems.push_back(std::string("unsolvable: no accepted design found") +
                               (r.exhaustive ? " (search space exhausted)" : " within caps"));
      }
    }
    report.puzzles.push_back(std::move(row));
  }
  return report;
}

Json encode(const PackReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.puzzles) {
    Json row{{"id", r.id}, {"problems", r.problems}, {"certified", r.certified}};
    if (r.certified) {
      row["solvable"] = r.solvable;
      row["exhaustive"] = r.exhaustive;
      row["solutions"] = r.solutions;
      row["states_visited"] = r.states_visited;
      row["min_score"] = r.min_score;
      row["max_score"] = r.max_score;
      row["score_spread"] = r.score_spread();
    }
    rows.push_back(std::move(row));
  }
  return Json{{"ok", report.ok()},
              {"puzzles", rows},
              {"tree", Json{{"problems", report.tree_problems}, {"roots", report.roots}, {"depth", report.depth}}}};
}

}  // namespace aosd
