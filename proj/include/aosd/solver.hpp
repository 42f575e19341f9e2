// SPDX-License-Identifier: Apache-2.0
//
// Breadth-first enumeration of accepted designs reachable from a puzzle's
// initial fragment. Two implementations with identical results: a plain FIFO
// search kept as the reference, and a level-synchronous search that expands
// each BFS layer with OpenMP.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "aosd/metrics.hpp"
#include "aosd/model.hpp"

namespace aosd {

struct Solution {
  std::string key;
  Design design;
  std::vector<Move> path;  // legal move sequence from the initial design
  ScoreReport report;

  int composite() const { return report.composite; }
};

struct SolveResult {
  std::vector<Solution> solutions;  // discovery order
  std::size_t states_visited = 0;
  std::size_t depth_reached = 0;
  bool exhaustive = false;
  bool cap_exceeded = false;
};

// Canonical state key. Initial classes keep their ids; created classes are
// interchangeable up to keyword set and contents.
std::string canonical_key(const PuzzleDef& puzzle, const Design& d);

// Every structurally plausible move; callers filter with try_transition.
std::vector<Move> candidate_moves(const PuzzleDef& puzzle, const Design& d);

SolveResult enumerate_solutions_serial(const PuzzleDef& puzzle, const SolverCaps& caps,
                                       int warning_fallback = kDefaultCboWarningThreshold);

SolveResult enumerate_solutions(const PuzzleDef& puzzle, const SolverCaps& caps,
                                int warning_fallback = kDefaultCboWarningThreshold);

}  // namespace aosd
