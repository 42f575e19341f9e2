// SPDX-License-Identifier: Apache-2.0
//
// Design evaluation: per-class and average CBO, keyword cohesion, pattern
// matching, composite score and progress.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "aosd/model.hpp"
#include "aosd/rational.hpp"

namespace aosd {

struct CouplingWarning {
  std::string class_id;
  int cbo = 0;
  std::string reason;
  bool operator==(const CouplingWarning&) const = default;
};

struct ScoreReport {
  std::map<std::string, int> per_class_cbo;
  Rational avg_cbo{0};
  std::map<std::string, Rational> per_class_cohesion;
  Rational design_cohesion{0};
  // False when keywords are missing and the spec does not depend on cohesion.
  bool cohesion_available = true;
  Rational pattern_score{0};
  Rational coupling_term{0};
  // Placed members over all members of the design.
  Rational placed_ratio{1};
  // Class pairs joined by an inter-class flow that are also associated, over
  // all such pairs (1 when there are none).
  Rational flow_support{1};
  int composite = 0;
  bool accepted = false;
  std::vector<CouplingWarning> warnings;
  // Human-readable reasons the spec rejected the design.
  std::vector<std::string> failures;
  std::size_t spec_index = 0;

  bool operator==(const ScoreReport&) const = default;
};

// Number of distinct classes associated with c. Throws UnknownId.
int cbo_per_class(const Design& d, std::string_view class_id);

// Throws EmptyDesign when d has no classes.
Rational avg_cbo(const Design& d);

// Pairwise Jaccard mean over the class header and its members. A class with
// no members has cohesion 1. Throws UnknownId, MissingKeywords.
Rational class_cohesion(const Design& d, std::string_view class_id);
Rational class_cohesion(const ClassBox& box);

// Unweighted mean of class_cohesion. Throws EmptyDesign, MissingKeywords.
Rational design_cohesion(const Design& d);

struct PatternMatch {
  Rational score{0};
  std::size_t satisfied = 0;
  std::size_t total = 0;
  std::vector<std::string> assignment;  // slot index -> class id, "" if unassigned
  std::vector<std::string> unsatisfied;
};

// Best injective (partial) assignment of template slots to design classes.
PatternMatch match_pattern(const Design& d, const PatternTemplate& p);
Rational pattern_match(const Design& d, const PatternTemplate& p);

// Classes whose CBO exceeds threshold, highest first (ties by class id).
std::vector<CouplingWarning> coupling_warnings(const Design& d, int threshold);

// max(0, 1 - avg_cbo / max(1, n - 1))
Rational coupling_term(const Rational& avg, std::size_t class_count);

ScoreReport score(const Design& d, const SolutionSpec& spec, int warning_threshold = kDefaultCboWarningThreshold);

// Scores against every solution spec of a puzzle.
struct Evaluation {
  std::vector<ScoreReport> per_spec;
  std::size_t best = 0;  // accepted first, then highest composite, then lowest index
  Rational progress{0};

  const ScoreReport& report() const { return per_spec.at(best); }
  bool accepted() const { return report().accepted; }
};

int effective_warning_threshold(const PuzzleDef& puzzle, int fallback = kDefaultCboWarningThreshold);

// Throws when some spec cannot be scored (EmptyDesign, MissingKeywords).
Evaluation evaluate(const Design& d, const PuzzleDef& puzzle, int warning_threshold);

// Fraction of the initial toolbox members now sitting in a class.
Rational placement_fraction(const Design& d, const PuzzleDef& puzzle);

// Total over specs; a spec whose metrics are not computable contributes 0.
Rational progress(const Design& d, const PuzzleDef& puzzle);

}  // namespace aosd
