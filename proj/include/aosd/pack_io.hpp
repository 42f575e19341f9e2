// SPDX-License-Identifier: Apache-2.0
//
// Puzzle pack files: a single JSON document with an explicit schema_version.
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aosd/flows.hpp"
#include "aosd/model.hpp"
#include "aosd/progression.hpp"
#include "aosd/json_codec.hpp"

namespace aosd {

inline constexpr int kPackSchemaVersion = 1;

struct PuzzlePack {
  std::string id;
  std::string title;
  std::string version;
  std::map<std::string, std::string> metadata;
  std::vector<PuzzleDef> puzzles;  // declaration order
  PuzzleTree tree;
  std::map<std::string, std::vector<FlowAnnotation>> annotations;  // by puzzle id

  const PuzzleDef* find(std::string_view puzzle_id) const;
  const std::vector<FlowAnnotation>& annotations_for(std::string_view puzzle_id) const;
  bool operator==(const PuzzlePack&) const = default;
};

struct LoadOptions {
  bool certify = false;                    // run the solver on every puzzle
  std::optional<std::size_t> max_states;   // overrides per-puzzle caps when certifying
};

// Text -> pack. Throws ParseError, SchemaError or InvariantError.
PuzzlePack parse_pack(std::string_view text, std::string_view source = "pack", const LoadOptions& options = {});

// Throws IoError when the file cannot be read, then as parse_pack.
PuzzlePack load_pack(const std::filesystem::path& path, const LoadOptions& options = {});

Json encode(const PuzzlePack& pack);
std::string serialize_pack(const PuzzlePack& pack);

struct PuzzleRow {
  std::string id;
  std::vector<std::string> problems;
  bool certified = false;  // solver was run
  bool solvable = false;
  bool exhaustive = false;
  std::size_t solutions = 0;
  std::size_t states_visited = 0;
  int min_score = 0;
  int max_score = 0;

  int score_spread() const { return max_score - min_score; }
};

struct PackReport {
  std::vector<PuzzleRow> puzzles;
  std::vector<std::string> tree_problems;
  std::vector<std::string> roots;
  std::size_t depth = 0;  // longest prerequisite chain, in puzzles

  bool ok() const;
};

PackReport validate_pack(const PuzzlePack& pack, bool certify, std::optional<std::size_t> max_states = std::nullopt);

Json encode(const PackReport& report);

}  // namespace aosd
