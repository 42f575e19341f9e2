// SPDX-License-Identifier: Apache-2.0
//
// Puzzle tree, unlock rules and saved games.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aosd/metrics.hpp"
#include "aosd/model.hpp"

namespace aosd {

struct PuzzleTree {
  std::vector<std::string> order;  // declaration order, used for tie-breaks
  std::map<std::string, std::set<std::string>> prerequisites;

  bool contains(std::string_view id) const;
  const std::set<std::string>& requires_of(std::string_view id) const;
  std::vector<std::string> roots() const;

  bool operator==(const PuzzleTree&) const = default;
};

// One cycle as a closed path (first id repeated at the end), if any.
std::optional<std::vector<std::string>> find_cycle(const PuzzleTree& tree);

// Throws InvariantError on dangling prerequisite ids, cycles or a missing root.
void validate_tree(const PuzzleTree& tree);

struct CompletionRecord {
  int best_score = 0;
  // Logical clock: 1 for the first puzzle ever completed by the player, and so
  // on. Replays keep the first value.
  std::uint64_t completed_seq = 0;
  bool operator==(const CompletionRecord&) const = default;
};

// Enough to rebuild an interrupted session by replay.
struct SessionSnapshot {
  std::string puzzle_id;
  std::vector<Move> moves;
  bool operator==(const SessionSnapshot&) const = default;
};

inline constexpr std::size_t kMaxPlayerNameLength = 32;

struct SaveGame {
  std::string player_name;
  std::map<std::string, CompletionRecord> completed;
  std::optional<SessionSnapshot> active_session;

  std::uint64_t last_seq() const;
  bool operator==(const SaveGame&) const = default;
};

// Throws InvalidName for empty or over-long names.
void validate_player_name(std::string_view name);

SaveGame new_save(std::string player_name);

std::set<std::string> unlocked(const PuzzleTree& tree, const SaveGame& save);
bool is_unlocked(const PuzzleTree& tree, const SaveGame& save, std::string_view puzzle_id);

// Records an accepted completion. Throws UnknownId, LockedPuzzle, NotAccepted.
SaveGame complete(const PuzzleTree& tree, const SaveGame& save, std::string_view puzzle_id, const ScoreReport& report);

std::optional<std::string> resume_point(const PuzzleTree& tree, const SaveGame& save);

// Persisted-file checks: completed ids belong to the tree and every
// prerequisite was completed strictly earlier.
std::vector<std::string> check_save(const PuzzleTree& tree, const SaveGame& save);

}  // namespace aosd
