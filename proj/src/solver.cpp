// SPDX-License-Identifier: Apache-2.0
#include "aosd/solver.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "aosd/engine.hpp"

namespace aosd {

// ---------------------------------------------------------------- canonical form

namespace {

std::string member_list(const ClassBox& c) {
  std::vector<std::string> ids;
  ids.reserve(c.members.size());
  for (const auto& m : c.members) ids.push_back(m.id);
  std::sort(ids.begin(), ids.end());
  std::string out = "{";
  for (const auto& id : ids) out += id + ",";
  out += "}";
  return out;
}

std::string keyword_list(const KeywordSet& k) {
  std::string out = "<";
  for (const auto& w : k) out += w + ",";
  out += ">";
  return out;
}

}  // namespace

std::string canonical_key(const PuzzleDef& puzzle, const Design& d) {
  std::set<std::string> fixed_ids;
  for (const auto& c : puzzle.initial.classes) fixed_ids.insert(c.id);

  std::vector<const ClassBox*> fixed;
  struct Created {
    const ClassBox* box;
    std::string signature;
  };
  std::vector<Created> created;
  for (const auto& c : d.classes) {
    if (fixed_ids.count(c.id)) {
      fixed.push_back(&c);
    } else {
      created.push_back({&c, keyword_list(c.keywords) + member_list(c)});
    }
  }
  std::sort(fixed.begin(), fixed.end(), [](const ClassBox* x, const ClassBox* y) { return x->id < y->id; });
  std::sort(created.begin(), created.end(),
            [](const Created& x, const Created& y) { return x.signature < y.signature; });

  std::string key;
  for (const auto* c : fixed) key += "F" + c->id + member_list(*c) + ";";
  for (const auto& c : created) key += "N" + c.signature + ";";
  key += "|";

  if (created.empty()) {
    for (const auto& a : d.associations) key += a.a + "-" + a.b + ";";
    return key;
  }

  // Relabel created classes; ties between equal signatures are broken by
  // taking the smallest association encoding over their permutations.
  std::vector<std::size_t> perm(created.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::optional<std::string> best;
  do {
    bool order_kept = true;
    for (std::size_t i = 0; i + 1 < perm.size() && order_kept; ++i) {
      order_kept = created[perm[i]].signature <= created[perm[i + 1]].signature;
    }
    if (!order_kept) continue;
    auto label = [&](const std::string& id) -> std::string {
      for (std::size_t slot = 0; slot < perm.size(); ++slot) {
        if (created[perm[slot]].box->id == id) return "#" + std::to_string(slot);
      }
      return id;
    };
    std::vector<std::string> edges;
    for (const auto& a : d.associations) {
      std::string x = label(a.a);
      std::string y = label(a.b);
      if (y < x) std::swap(x, y);
      edges.push_back(x + "-" + y);
    }
    std::sort(edges.begin(), edges.end());
    std::string encoded;
    for (const auto& e : edges) encoded += e + ";";
    if (!best || encoded < *best) best = std::move(encoded);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return key + *best;
}

// ---------------------------------------------------------------- moves

std::vector<Move> candidate_moves(const PuzzleDef& puzzle, const Design& d) {
  std::vector<Move> out;
  const auto& allowed = puzzle.allowed_moves;
  if (allowed.count(MoveKind::place_member)) {
    auto place_into_others = [&](const Member& m, std::string_view current) {
      for (const auto& c : d.classes) {
        if (c.id != current) out.push_back(PlaceMember{m.id, c.id});
      }
    };
    for (const auto& m : d.unplaced) place_into_others(m, "");
    for (const auto& c : d.classes) {
      for (const auto& m : c.members) place_into_others(m, c.id);
    }
  }
  if (allowed.count(MoveKind::remove_member)) {
    for (const auto& c : d.classes) {
      for (const auto& m : c.members) out.push_back(RemoveMember{m.id});
    }
  }
  const bool connect = allowed.count(MoveKind::connect) > 0;
  const bool disconnect = allowed.count(MoveKind::disconnect) > 0;
  if (connect || disconnect) {
    for (std::size_t i = 0; i < d.classes.size(); ++i) {
      for (std::size_t j = i + 1; j < d.classes.size(); ++j) {
        const auto& a = d.classes[i].id;
        const auto& b = d.classes[j].id;
        bool linked = d.connected(a, b);
        if (!linked && connect) out.push_back(Connect{a, b});
        if (linked && disconnect) out.push_back(Disconnect{a, b});
      }
    }
  }
  if (allowed.count(MoveKind::create_class)) {
    for (const auto& b : puzzle.class_palette) out.push_back(CreateClass{b.name, b.keywords});
  }
  if (allowed.count(MoveKind::delete_class)) {
    for (const auto& c : d.classes) out.push_back(DeleteClass{c.id});
  }
  return out;
}

// ---------------------------------------------------------------- search

namespace {

// Move tree shared by both searches; paths are rebuilt from parent links.
struct Arena {
  struct Node {
    std::size_t parent;
    Move move;
  };
  static constexpr std::size_t kRoot = static_cast<std::size_t>(-1);
  std::vector<Node> nodes;

  std::size_t add(std::size_t parent, Move m) {
    nodes.push_back({parent, std::move(m)});
    return nodes.size() - 1;
  }
  std::vector<Move> path(std::size_t index) const {
    std::vector<Move> out;
    while (index != kRoot) {
      out.push_back(nodes[index].move);
      index = nodes[index].parent;
    }
    std::reverse(out.begin(), out.end());
    return out;
  }
};

struct Frontier {
  std::size_t node;  // arena index, kRoot for the initial design
  Design design;
  std::size_t depth;
};

struct Successor {
  Move move;
  Design design;
  std::string key;
};

// Successors whose key is already in `seen` are dropped. `seen` is only read.
std::vector<Successor> expand(const PuzzleDef& puzzle, const Design& d, const std::unordered_set<std::string>& seen) {
  std::vector<Successor> out;
  for (auto& m : candidate_moves(puzzle, d)) {
    if (move_gate(puzzle, d, m)) continue;
    Design next;
    try {
      next = apply_structural_edit(d, m);
    } catch (const Error&) {
      continue;
    }
    std::string key = canonical_key(puzzle, next);
    if (seen.count(key)) continue;
    out.push_back({std::move(m), std::move(next), std::move(key)});
  }
  return out;
}

std::optional<Evaluation> try_evaluate(const PuzzleDef& puzzle, const Design& d, int threshold) {
  try {
    return evaluate(d, puzzle, threshold);
  } catch (const Error&) {
    return std::nullopt;
  }
}

bool has_unvisited_successor(const PuzzleDef& puzzle, const Design& d,
                             const std::unordered_set<std::string>& visited) {
  return !expand(puzzle, d, visited).empty();
}

void record_if_accepted(SolveResult& result, const Arena& arena, std::size_t node, const std::string& key,
                        const Design& d, const Evaluation& ev) {
  if (!ev.accepted()) return;
  result.solutions.push_back(Solution{key, d, arena.path(node), ev.report()});
}

}  // namespace

SolveResult enumerate_solutions_serial(const PuzzleDef& puzzle, const SolverCaps& caps, int warning_fallback) {
  const int threshold = effective_warning_threshold(puzzle, warning_fallback);
  SolveResult result;
  Arena arena;
  std::unordered_set<std::string> visited;
  std::deque<Frontier> queue;

  const std::string root_key = canonical_key(puzzle, puzzle.initial);
  visited.insert(root_key);
  if (auto ev = try_evaluate(puzzle, puzzle.initial, threshold)) {
    record_if_accepted(result, arena, Arena::kRoot, root_key, puzzle.initial, *ev);
    queue.push_back({Arena::kRoot, puzzle.initial, 0});
  }

  bool exhausted = true;
  while (!queue.empty() && !result.cap_exceeded) {
    Frontier cur = std::move(queue.front());
    queue.pop_front();
    result.depth_reached = std::max(result.depth_reached, cur.depth);
    if (cur.depth >= caps.max_depth) {
      if (exhausted && has_unvisited_successor(puzzle, cur.design, visited)) exhausted = false;
      continue;
    }
    for (auto& s : expand(puzzle, cur.design, visited)) {
      if (visited.count(s.key)) continue;
      if (visited.size() >= caps.max_states) {
        result.cap_exceeded = true;
        break;
      }
      visited.insert(s.key);
      auto ev = try_evaluate(puzzle, s.design, threshold);
      if (!ev) continue;
      std::size_t node = arena.add(cur.node, std::move(s.move));
      record_if_accepted(result, arena, node, s.key, s.design, *ev);
      queue.push_back({node, std::move(s.design), cur.depth + 1});
    }
  }
  result.states_visited = visited.size();
  result.exhaustive = exhausted && !result.cap_exceeded;
  return result;
}

SolveResult enumerate_solutions(const PuzzleDef& puzzle, const SolverCaps& caps, int warning_fallback) {
  const int threshold = effective_warning_threshold(puzzle, warning_fallback);
  SolveResult result;
  Arena arena;
  std::unordered_set<std::string> visited;
  std::vector<Frontier> frontier;

  const std::string root_key = canonical_key(puzzle, puzzle.initial);
  visited.insert(root_key);
  if (auto ev = try_evaluate(puzzle, puzzle.initial, threshold)) {
    record_if_accepted(result, arena, Arena::kRoot, root_key, puzzle.initial, *ev);
    frontier.push_back({Arena::kRoot, puzzle.initial, 0});
  }

  bool exhausted = true;
  std::size_t depth = 0;
  while (!frontier.empty()) {
    result.depth_reached = depth;
    const auto n = static_cast<std::ptrdiff_t>(frontier.size());
    if (depth >= caps.max_depth) {
      int open = 0;
#pragma omp parallel for schedule(dynamic) reduction(|| : open)
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        open = open || has_unvisited_successor(puzzle, frontier[i].design, visited);
      }
      if (open) exhausted = false;
      break;
    }

    std::vector<std::vector<Successor>> successors(frontier.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) successors[i] = expand(puzzle, frontier[i].design, visited);

    // Merge in frontier order so discovery order matches the FIFO search.
    struct Pending {
      std::size_t parent;
      Successor succ;
    };
    std::vector<Pending> pending;
    for (std::size_t i = 0; i < successors.size() && !result.cap_exceeded; ++i) {
      for (auto& s : successors[i]) {
        if (visited.count(s.key)) continue;
        if (visited.size() >= caps.max_states) {
          result.cap_exceeded = true;
          break;
        }
        visited.insert(s.key);
        pending.push_back({frontier[i].node, std::move(s)});
      }
    }

    std::vector<std::optional<Evaluation>> evals(pending.size());
    const auto m = static_cast<std::ptrdiff_t>(pending.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t j = 0; j < m; ++j) evals[j] = try_evaluate(puzzle, pending[j].succ.design, threshold);

    std::vector<Frontier> next;
    next.reserve(pending.size());
    for (std::size_t j = 0; j < pending.size(); ++j) {
      if (!evals[j]) continue;
      std::size_t node = arena.add(pending[j].parent, std::move(pending[j].succ.move));
      record_if_accepted(result, arena, node, pending[j].succ.key, pending[j].succ.design, *evals[j]);
      next.push_back({node, std::move(pending[j].succ.design), depth + 1});
    }
    if (result.cap_exceeded) break;
    frontier = std::move(next);
    ++depth;
  }
  result.states_visited = visited.size();
  result.exhaustive = exhausted && !result.cap_exceeded;
  return result;
}

}  // namespace aosd
