// SPDX-License-Identifier: Apache-2.0
#include "aosd/progression.hpp"

#include <algorithm>
#include <functional>

namespace aosd {

bool PuzzleTree::contains(std::string_view id) const {
  return std::find(order.begin(), order.end(), id) != order.end();
}

const std::set<std::string>& PuzzleTree::requires_of(std::string_view id) const {
  static const std::set<std::string> kNone;
  auto it = prerequisites.find(std::string(id));
  return it == prerequisites.end() ? kNone : it->second;
}

std::vector<std::string> PuzzleTree::roots() const {
  std::vector<std::string> out;
  for (const auto& id : order) {
    if (requires_of(id).empty()) out.push_back(id);
  }
  return out;
}

std::optional<std::vector<std::string>> find_cycle(const PuzzleTree& tree) {
  enum class Mark { white, grey, black };
  std::map<std::string, Mark> mark;
  for (const auto& id : tree.order) mark[id] = Mark::white;
  std::vector<std::string> stack;
  std::optional<std::vector<std::string>> found;

  std::function<bool(const std::string&)> visit = [&](const std::string& id) {
    mark[id] = Mark::grey;
    stack.push_back(id);
    for (const auto& pre : tree.requires_of(id)) {
      auto it = mark.find(pre);
      if (it == mark.end()) continue;  // dangling; reported separately
      if (it->second == Mark::grey) {
        auto start = std::find(stack.begin(), stack.end(), pre);
        std::vector<std::string> cycle(start, stack.end());
        cycle.push_back(pre);
        // Stack order follows "requires" links; reverse to read as unlock order.
        std::reverse(cycle.begin(), cycle.end());
        found = std::move(cycle);
        return true;
      }
      if (it->second == Mark::white && visit(pre)) return true;
    }
    stack.pop_back();
    mark[id] = Mark::black;
    return false;
  };

  for (const auto& id : tree.order) {
    if (mark[id] == Mark::white && visit(id)) return found;
  }
  return std::nullopt;
}

void validate_tree(const PuzzleTree& tree) {
  std::set<std::string> ids;
  for (const auto& id : tree.order) {
    if (!ids.insert(id).second) throw Error(Errc::InvariantError, "puzzle '" + id + "' declared twice in tree", id);
  }
  for (const auto& [id, pres] : tree.prerequisites) {
    if (!ids.count(id)) throw Error(Errc::InvariantError, "tree entry references unknown puzzle '" + id + "'", id);
    for (const auto& p : pres) {
      if (!ids.count(p)) {
        throw Error(Errc::InvariantError, "puzzle '" + id + "' requires unknown puzzle '" + p + "'", p);
      }
    }
  }
  if (auto cycle = find_cycle(tree)) {
    std::string path;
    for (const auto& id : *cycle) path += (path.empty() ? "" : " -> ") + id;
    throw Error(Errc::InvariantError, "prerequisite cycle: " + path, path);
  }
  if (!tree.order.empty() && tree.roots().empty()) {
    throw Error(Errc::InvariantError, "puzzle tree has no root");
  }
}

std::uint64_t SaveGame::last_seq() const {
  std::uint64_t seq = 0;
  for (const auto& [id, rec] : completed) seq = std::max(seq, rec.completed_seq);
  return seq;
}

void validate_player_name(std::string_view name) {
  if (name.empty()) throw Error(Errc::InvalidName, "player name must not be empty");
  if (name.size() > kMaxPlayerNameLength) {
    throw Error(Errc::InvalidName, "player name longer than 32 characters", std::string(name));
  }
}

SaveGame new_save(std::string player_name) {
  validate_player_name(player_name);
  SaveGame s;
  s.player_name = std::move(player_name);
  return s;
}

bool is_unlocked(const PuzzleTree& tree, const SaveGame& save, std::string_view puzzle_id) {
  if (!tree.contains(puzzle_id)) return false;
  const auto& pres = tree.requires_of(puzzle_id);
  return std::all_of(pres.begin(), pres.end(), [&](const std::string& p) { return save.completed.count(p) > 0; });
}

std::set<std::string> unlocked(const PuzzleTree& tree, const SaveGame& save) {
  std::set<std::string> out;
  for (const auto& id : tree.order) {
    if (is_unlocked(tree, save, id)) out.insert(id);
  }
  return out;
}

SaveGame complete(const PuzzleTree& tree, const SaveGame& save, std::string_view puzzle_id, const ScoreReport& report) {
  const std::string id(puzzle_id);
  if (!tree.contains(id)) throw Error(Errc::UnknownId, "unknown puzzle '" + id + "'", id);
  if (!is_unlocked(tree, save, id)) {
    throw Error(Errc::LockedPuzzle, "puzzle '" + id + "' is locked; finish its prerequisites first", id);
  }
  if (!report.accepted) throw Error(Errc::NotAccepted, "design for puzzle '" + id + "' is not accepted", id);

  SaveGame out = save;
  auto it = out.completed.find(id);
  if (it == out.completed.end()) {
    out.completed[id] = CompletionRecord{report.composite, save.last_seq() + 1};
  } else {
    it->second.best_score = std::max(it->second.best_score, report.composite);
  }
  out.active_session.reset();
  return out;
}

std::optional<std::string> resume_point(const PuzzleTree& tree, const SaveGame& save) {
  if (save.active_session && tree.contains(save.active_session->puzzle_id)) return save.active_session->puzzle_id;
  std::optional<std::string> best;
  std::uint64_t best_time = 0;
  for (const auto& id : tree.order) {
    if (save.completed.count(id) || !is_unlocked(tree, save, id)) continue;
    // When the prerequisite set gained its final member.
    std::uint64_t unlocked_at = 0;
    for (const auto& p : tree.requires_of(id)) unlocked_at = std::max(unlocked_at, save.completed.at(p).completed_seq);
    if (!best || unlocked_at > best_time) {
      best = id;
      best_time = unlocked_at;
    }
  }
  return best;
}

std::vector<std::string> check_save(const PuzzleTree& tree, const SaveGame& save) {
  std::vector<std::string> out;
  for (const auto& [id, rec] : save.completed) {
    if (!tree.contains(id)) {
      out.push_back("completed puzzle '" + id + "' is not in the pack");
      continue;
    }
    for (const auto& p : tree.requires_of(id)) {
      auto pre = save.completed.find(p);
      if (pre == save.completed.end() || pre->second.completed_seq >= rec.completed_seq) {
        out.push_back("puzzle '" + id + "' completed before its prerequisite '" + p + "'");
      }
    }
  }
  return out;
}

}  // namespace aosd
