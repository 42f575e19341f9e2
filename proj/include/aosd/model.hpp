// SPDX-License-Identifier: Apache-2.0
//
// Class-diagram designs, puzzle definitions and moves. Everything here is a
// plain value; edits return a new Design.
#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aosd/errors.hpp"
#include "aosd/rational.hpp"

namespace aosd {

// Lower-cased, whitespace-free tokens with set semantics.
class KeywordSet {
 public:
  KeywordSet() = default;
  KeywordSet(std::initializer_list<std::string_view> words);

  template <typename Range>
  static KeywordSet from(const Range& words) {
    KeywordSet set;
    for (const auto& w : words) set.insert(w);
    return set;
  }

  // Case-folds; throws Error(InvalidKeyword) on empty or whitespace tokens.
  void insert(std::string_view word);
  bool erase(std::string_view word);

  bool contains(std::string_view word) const;
  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  auto begin() const noexcept { return words_.begin(); }
  auto end() const noexcept { return words_.end(); }

  std::size_t intersection_size(const KeywordSet& other) const;
  std::size_t union_size(const KeywordSet& other) const;

  bool operator==(const KeywordSet&) const = default;
  auto operator<=>(const KeywordSet&) const = default;

 private:
  std::set<std::string, std::less<>> words_;
};

enum class MemberKind { attribute, method };

std::string_view to_string(MemberKind kind);
std::optional<MemberKind> member_kind_from_string(std::string_view s);

// Symbolic references resolved against the current placement when flows are
// derived.
struct BehaviorSpec {
  std::vector<std::string> calls;
  std::vector<std::string> reads;
  std::vector<std::string> writes;

  bool empty() const noexcept { return calls.empty() && reads.empty() && writes.empty(); }
  bool operator==(const BehaviorSpec&) const = default;
};

struct Member {
  std::string id;
  MemberKind kind = MemberKind::attribute;
  std::string name;
  KeywordSet keywords;
  BehaviorSpec behavior;

  bool operator==(const Member&) const = default;
};

// Board coordinates. Display only; no metric reads them.
struct Position {
  int x = 0;
  int y = 0;
  bool operator==(const Position&) const = default;
};

struct ClassBox {
  std::string id;
  std::string name;
  KeywordSet keywords;
  std::vector<Member> members;
  Position position;

  const Member* find_member(std::string_view member_id) const;
  bool operator==(const ClassBox&) const = default;
};

// Undirected: the endpoints are stored in sorted order.
struct Association {
  std::string a;
  std::string b;

  static Association make(std::string x, std::string y);
  bool touches(std::string_view id) const { return a == id || b == id; }
  const std::string& other(std::string_view id) const { return a == id ? b : a; }

  bool operator==(const Association&) const = default;
  auto operator<=>(const Association&) const = default;
};

struct Design {
  std::vector<ClassBox> classes;
  std::set<Association> associations;
  std::vector<Member> unplaced;

  const ClassBox* find_class(std::string_view class_id) const;
  ClassBox* find_class(std::string_view class_id);
  bool connected(std::string_view x, std::string_view y) const;

  // Class id holding the member, "" when it sits in the toolbox, nullopt when
  // the id is unknown.
  std::optional<std::string> location_of(std::string_view member_id) const;
  const Member* find_member(std::string_view member_id) const;

  bool operator==(const Design&) const = default;
};

struct Violation {
  std::string code;  // e.g. "duplicate-placement"
  std::string id;    // offending id
  std::string message;
  bool operator==(const Violation&) const = default;
};

std::vector<Violation> validate_design(const Design& d);

// ---------------------------------------------------------------- moves

struct PlaceMember {
  std::string member;
  std::string target;
  bool operator==(const PlaceMember&) const = default;
};
struct RemoveMember {
  std::string member;
  bool operator==(const RemoveMember&) const = default;
};
struct Connect {
  std::string a;
  std::string b;
  bool operator==(const Connect&) const = default;
};
struct Disconnect {
  std::string a;
  std::string b;
  bool operator==(const Disconnect&) const = default;
};
struct CreateClass {
  std::string name;
  KeywordSet keywords;
  bool operator==(const CreateClass&) const = default;
};
struct DeleteClass {
  std::string cls;
  bool operator==(const DeleteClass&) const = default;
};

using Move = std::variant<PlaceMember, RemoveMember, Connect, Disconnect, CreateClass, DeleteClass>;

enum class MoveKind { place_member, remove_member, connect, disconnect, create_class, delete_class };

MoveKind kind_of(const Move& m);
std::string_view to_string(MoveKind kind);
std::optional<MoveKind> move_kind_from_string(std::string_view s);
std::string describe(const Move& m);

// Id given to the next class created in d: "new-1", "new-2", ... first unused.
std::string next_created_class_id(const Design& d);

// Applies one structural edit. Throws Error with UnknownId,
// IllegalSelfAssociation or DuplicatePlacement. PlaceMember on a member that
// already sits in another class relocates it.
Design apply_structural_edit(const Design& d, const Move& m);

// ---------------------------------------------------------------- puzzles

struct PatternSlot {
  struct MemberRequirement {
    MemberKind kind = MemberKind::attribute;
    std::string name;
    bool operator==(const MemberRequirement&) const = default;
  };
  std::string id;
  std::vector<MemberRequirement> members;  // multiset
  KeywordSet keywords;                     // must all appear on the class header
  bool operator==(const PatternSlot&) const = default;
};

struct PatternTemplate {
  std::vector<PatternSlot> slots;
  std::vector<std::pair<std::string, std::string>> associations;
  // Slot pairs that must not be associated.
  std::vector<std::pair<std::string, std::string>> forbidden_associations;

  std::size_t constraint_count() const;
  bool operator==(const PatternTemplate&) const = default;
};

struct ScoreWeights {
  Rational cohesion{1, 3};
  Rational coupling{1, 3};
  Rational pattern{1, 3};
  bool operator==(const ScoreWeights&) const = default;
};

struct Thresholds {
  Rational min_design_cohesion{0};
  Rational max_avg_cbo{0};
  // The toolbox must be empty.
  bool require_all_placed = true;
  // Every pair of classes joined by an inter-class flow must be associated.
  bool require_flow_associations = false;
  bool operator==(const Thresholds&) const = default;
};

enum class SolutionKind { thresholds, pattern };

struct SolutionSpec {
  SolutionKind kind = SolutionKind::thresholds;
  std::optional<Thresholds> thresholds;
  std::optional<PatternTemplate> pattern;
  ScoreWeights weights;

  bool operator==(const SolutionSpec&) const = default;
};

struct ClassBlueprint {
  std::string name;
  KeywordSet keywords;
  bool operator==(const ClassBlueprint&) const = default;
};

struct SolverCaps {
  std::size_t max_states = 200000;
  std::size_t max_depth = 16;
  bool operator==(const SolverCaps&) const = default;
};

inline constexpr int kDefaultCboWarningThreshold = 4;

struct PuzzleDef {
  std::string id;
  std::string title;
  std::vector<std::string> assignment;  // 1..3 paragraphs
  std::set<std::string> principles;     // coupling, cohesion, information-hiding, modularity
  Design initial;
  std::set<MoveKind> allowed_moves;
  bool class_creation_allowed = false;
  // Classes CreateClass may instantiate (matched by keyword set).
  std::vector<ClassBlueprint> class_palette;
  std::optional<std::size_t> max_classes;
  std::vector<SolutionSpec> solutions;
  std::optional<int> cbo_warning_threshold;
  SolverCaps solver_caps;

  bool operator==(const PuzzleDef&) const = default;
};

// Width used to count the lines of an assignment paragraph.
inline constexpr std::size_t kAssignmentLineWidth = 72;
inline constexpr std::size_t kMaxAssignmentParagraphs = 3;
inline constexpr std::size_t kMaxParagraphLines = 4;

std::size_t paragraph_line_count(std::string_view paragraph);

// Structural problems with a puzzle definition (empty when valid). Does not
// run the solver.
std::vector<std::string> validate_puzzle(const PuzzleDef& p);

}  // namespace aosd
