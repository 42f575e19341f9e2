// SPDX-License-Identifier: Apache-2.0
#include "aosd/model.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace aosd {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::UnknownId: return "UnknownId";
    case Errc::IllegalSelfAssociation: return "IllegalSelfAssociation";
    case Errc::DuplicatePlacement: return "DuplicatePlacement";
    case Errc::InvalidKeyword: return "InvalidKeyword";
    case Errc::EmptyDesign: return "EmptyDesign";
    case Errc::MissingKeywords: return "MissingKeywords";
    case Errc::InvalidPuzzle: return "InvalidPuzzle";
    case Errc::LockedPuzzle: return "LockedPuzzle";
    case Errc::NotAccepted: return "NotAccepted";
    case Errc::InvalidName: return "InvalidName";
    case Errc::ParseError: return "ParseError";
    case Errc::SchemaError: return "SchemaError";
    case Errc::InvariantError: return "InvariantError";
    case Errc::UnknownPlayer: return "UnknownPlayer";
    case Errc::UnknownSession: return "UnknownSession";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------- KeywordSet

KeywordSet::KeywordSet(std::initializer_list<std::string_view> words) {
  for (auto w : words) insert(w);
}

void KeywordSet::insert(std::string_view word) {
  if (word.empty()) throw Error(Errc::InvalidKeyword, "keyword must not be empty");
  std::string folded;
  folded.reserve(word.size());
  for (char c : word) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      throw Error(Errc::InvalidKeyword, "keyword '" + std::string(word) + "' contains whitespace",
                  std::string(word));
    }
    folded.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  words_.insert(std::move(folded));
}

bool KeywordSet::erase(std::string_view word) {
  auto it = words_.find(word);
  if (it == words_.end()) return false;
  words_.erase(it);
  return true;
}

bool KeywordSet::contains(std::string_view word) const { return words_.find(word) != words_.end(); }

std::size_t KeywordSet::intersection_size(const KeywordSet& other) const {
  std::size_t n = 0;
  auto a = words_.begin();
  auto b = other.words_.begin();
  while (a != words_.end() && b != other.words_.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++n;
      ++a;
      ++b;
    }
  }
  return n;
}

std::size_t KeywordSet::union_size(const KeywordSet& other) const {
  return size() + other.size() - intersection_size(other);
}

// ---------------------------------------------------------------- enums

std::string_view to_string(MemberKind kind) {
  return kind == MemberKind::attribute ? "attribute" : "method";
}

std::optional<MemberKind> member_kind_from_string(std::string_view s) {
  if (s == "attribute") return MemberKind::attribute;
  if (s == "method") return MemberKind::method;
  return std::nullopt;
}

MoveKind kind_of(const Move& m) { return static_cast<MoveKind>(m.index()); }

std::string_view to_string(MoveKind kind) {
  switch (kind) {
    case MoveKind::place_member: return "place_member";
    case MoveKind::remove_member: return "remove_member";
    case MoveKind::connect: return "connect";
    case MoveKind::disconnect: return "disconnect";
    case MoveKind::create_class: return "create_class";
    case MoveKind::delete_class: return "delete_class";
  }
  return "unknown";
}

std::optional<MoveKind> move_kind_from_string(std::string_view s) {
  for (int k = 0; k <= static_cast<int>(MoveKind::delete_class); ++k) {
    if (to_string(static_cast<MoveKind>(k)) == s) return static_cast<MoveKind>(k);
  }
  return std::nullopt;
}

std::string describe(const Move& m) {
  struct Visitor {
    std::string operator()(const PlaceMember& p) const { return "place " + p.member + " in " + p.target; }
    std::string operator()(const RemoveMember& r) const { return "remove " + r.member; }
    std::string operator()(const Connect& c) const { return "connect " + c.a + " and " + c.b; }
    std::string operator()(const Disconnect& c) const { return "disconnect " + c.a + " and " + c.b; }
    std::string operator()(const CreateClass& c) const { return "create class " + c.name; }
    std::string operator()(const DeleteClass& c) const { return "delete class " + c.cls; }
  };
  return std::visit(Visitor{}, m);
}

// ---------------------------------------------------------------- lookups

const Member* ClassBox::find_member(std::string_view member_id) const {
  auto it = std::find_if(members.begin(), members.end(), [&](const Member& m) { return m.id == member_id; });
  return it == members.end() ? nullptr : &*it;
}

Association Association::make(std::string x, std::string y) {
  if (y < x) std::swap(x, y);
  return Association{std::move(x), std::move(y)};
}

const ClassBox* Design::find_class(std::string_view class_id) const {
  auto it = std::find_if(classes.begin(), classes.end(), [&](const ClassBox& c) { return c.id == class_id; });
  return it == classes.end() ? nullptr : &*it;
}

ClassBox* Design::find_class(std::string_view class_id) {
  auto it = std::find_if(classes.begin(), classes.end(), [&](const ClassBox& c) { return c.id == class_id; });
  return it == classes.end() ? nullptr : &*it;
}

bool Design::connected(std::string_view x, std::string_view y) const {
  return associations.count(Association::make(std::string(x), std::string(y))) > 0;
}

std::optional<std::string> Design::location_of(std::string_view member_id) const {
  for (const auto& c : classes) {
    if (c.find_member(member_id)) return c.id;
  }
  for (const auto& m : unplaced) {
    if (m.id == member_id) return std::string();
  }
  return std::nullopt;
}

const Member* Design::find_member(std::string_view member_id) const {
  for (const auto& c : classes) {
    if (const Member* m = c.find_member(member_id)) return m;
  }
  for (const auto& m : unplaced) {
    if (m.id == member_id) return &m;
  }
  return nullptr;
}

// ---------------------------------------------------------------- validation

std::vector<Violation> validate_design(const Design& d) {
  std::vector<Violation> out;
  std::set<std::string> class_ids;
  for (const auto& c : d.classes) {
    if (c.id.empty()) out.push_back({"empty-id", c.id, "class with empty id"});
    if (!class_ids.insert(c.id).second) {
      out.push_back({"duplicate-class-id", c.id, "class id '" + c.id + "' used more than once"});
    }
  }

  std::map<std::string, int> seen;  // member id -> number of places
  auto check_member = [&](const Member& m) {
    if (m.id.empty()) out.push_back({"empty-id", m.id, "member with empty id"});
    if (m.kind == MemberKind::attribute && !m.behavior.empty()) {
      out.push_back({"attribute-behavior", m.id, "attribute '" + m.id + "' declares behavior"});
    }
    ++seen[m.id];
  };
  for (const auto& c : d.classes) {
    std::set<std::string> local;
    for (const auto& m : c.members) {
      if (!local.insert(m.id).second) {
        out.push_back({"duplicate-member-id", m.id, "member '" + m.id + "' appears twice in class '" + c.id + "'"});
      }
      check_member(m);
    }
  }
  for (const auto& m : d.unplaced) check_member(m);
  for (const auto& [id, count] : seen) {
    if (count > 1) out.push_back({"duplicate-placement", id, "member '" + id + "' is placed in more than one location"});
  }

  for (const auto& a : d.associations) {
    if (a.a == a.b) out.push_back({"self-association", a.a, "class '" + a.a + "' is associated with itself"});
    if (a.b < a.a) out.push_back({"non-canonical-association", a.a, "association endpoints out of order"});
    for (const auto* end : {&a.a, &a.b}) {
      if (!class_ids.count(*end)) {
        out.push_back({"dangling-association", *end, "association references missing class '" + *end + "'"});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- edits

std::string next_created_class_id(const Design& d) {
  for (int n = 1;; ++n) {
    std::string id = "new-" + std::to_string(n);
    if (!d.find_class(id)) return id;
  }
}

namespace {

Member take_member(Design& d, std::string_view member_id) {
  for (auto& c : d.classes) {
    auto it = std::find_if(c.members.begin(), c.members.end(), [&](const Member& m) { return m.id == member_id; });
    if (it != c.members.end()) {
      Member m = std::move(*it);
      c.members.erase(it);
      return m;
    }
  }
  auto it = std::find_if(d.unplaced.begin(), d.unplaced.end(), [&](const Member& m) { return m.id == member_id; });
  Member m = std::move(*it);
  d.unplaced.erase(it);
  return m;
}

void require_class(const Design& d, const std::string& id) {
  if (!d.find_class(id)) throw Error(Errc::UnknownId, "unknown class '" + id + "'", id);
}

struct EditVisitor {
  Design& d;

  void operator()(const PlaceMember& p) const {
    require_class(d, p.target);
    auto where = d.location_of(p.member);
    if (!where) throw Error(Errc::UnknownId, "unknown member '" + p.member + "'", p.member);
    if (*where == p.target) {
      throw Error(Errc::DuplicatePlacement, "member '" + p.member + "' is already in class '" + p.target + "'",
                  p.member);
    }
    Member m = take_member(d, p.member);
    d.find_class(p.target)->members.push_back(std::move(m));
  }

  void operator()(const RemoveMember& r) const {
    auto where = d.location_of(r.member);
    if (!where) throw Error(Errc::UnknownId, "unknown member '" + r.member + "'", r.member);
    if (where->empty()) {
      throw Error(Errc::UnknownId, "member '" + r.member + "' is not placed in any class", r.member);
    }
    d.unplaced.push_back(take_member(d, r.member));
  }

  void operator()(const Connect& c) const {
    require_class(d, c.a);
    require_class(d, c.b);
    if (c.a == c.b) throw Error(Errc::IllegalSelfAssociation, "class '" + c.a + "' cannot associate with itself", c.a);
    d.associations.insert(Association::make(c.a, c.b));
  }

  void operator()(const Disconnect& c) const {
    require_class(d, c.a);
    require_class(d, c.b);
    if (c.a == c.b) throw Error(Errc::IllegalSelfAssociation, "class '" + c.a + "' cannot associate with itself", c.a);
    if (d.associations.erase(Association::make(c.a, c.b)) == 0) {
      throw Error(Errc::UnknownId, "no association between '" + c.a + "' and '" + c.b + "'", c.a + "--" + c.b);
    }
  }

  void operator()(const CreateClass& c) const {
    ClassBox box;
    box.id = next_created_class_id(d);
    box.name = c.name;
    box.keywords = c.keywords;
    d.classes.push_back(std::move(box));
  }

  void operator()(const DeleteClass& c) const {
    require_class(d, c.cls);
    auto it = std::find_if(d.classes.begin(), d.classes.end(), [&](const ClassBox& b) { return b.id == c.cls; });
    for (auto& m : it->members) d.unplaced.push_back(std::move(m));
    d.classes.erase(it);
    for (auto a = d.associations.begin(); a != d.associations.end();) {
      a = a->touches(c.cls) ? d.associations.erase(a) : std::next(a);
    }
  }
};

}  // namespace

Design apply_structural_edit(const Design& d, const Move& m) {
  Design out = d;
  std::visit(EditVisitor{out}, m);
  return out;
}

// ---------------------------------------------------------------- puzzles

std::size_t PatternTemplate::constraint_count() const {
  std::size_t n = associations.size() + forbidden_associations.size();
  for (const auto& s : slots) n += s.members.size() + s.keywords.size();
  return n;
}

std::size_t paragraph_line_count(std::string_view paragraph) {
  std::size_t lines = 0;
  std::size_t start = 0;
  while (true) {
    std::size_t nl = paragraph.find('\n', start);
    std::size_t len = (nl == std::string_view::npos ? paragraph.size() : nl) - start;
    lines += len == 0 ? 1 : (len + kAssignmentLineWidth - 1) / kAssignmentLineWidth;
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string> validate_puzzle(const PuzzleDef& p) {
  static const std::set<std::string> kPrinciples = {"coupling", "cohesion", "information-hiding", "modularity"};
  std::vector<std::string> out;
  const std::string where = "puzzle '" + p.id + "': ";
  if (p.id.empty()) out.push_back("puzzle with empty id");
  if (p.assignment.empty() || p.assignment.size() > kMaxAssignmentParagraphs) {
    out.push_back(where + "assignment must have 1 to 3 paragraphs");
  }
  for (std::size_t i = 0; i < p.assignment.size(); ++i) {
    if (p.assignment[i].empty()) out.push_back(where + "assignment paragraph " + std::to_string(i + 1) + " is empty");
    if (paragraph_line_count(p.assignment[i]) > kMaxParagraphLines) {
      out.push_back(where + "assignment paragraph " + std::to_string(i + 1) + " exceeds 4 lines");
    }
  }
  for (const auto& t : p.principles) {
    if (!kPrinciples.count(t)) out.push_back(where + "unknown principle tag '" + t + "'");
  }
  for (const auto& v : validate_design(p.initial)) out.push_back(where + "initial design: " + v.message);
  if (p.initial.classes.empty()) out.push_back(where + "initial design has no classes");
  if (p.allowed_moves.empty()) out.push_back(where + "no allowed moves");
  bool creation_moves = p.allowed_moves.count(MoveKind::create_class) || p.allowed_moves.count(MoveKind::delete_class);
  if (creation_moves && !p.class_creation_allowed) {
    out.push_back(where + "create/delete class moves require class_creation_allowed");
  }
  if (p.allowed_moves.count(MoveKind::create_class) && p.class_palette.empty()) {
    out.push_back(where + "create_class allowed but class_palette is empty");
  }
  if (p.max_classes && *p.max_classes < p.initial.classes.size()) {
    out.push_back(where + "max_classes is below the initial class count");
  }
  if (p.cbo_warning_threshold && *p.cbo_warning_threshold <= 0) {
    out.push_back(where + "cbo_warning_threshold must be positive");
  }
  if (p.solver_caps.max_states == 0 || p.solver_caps.max_depth == 0) out.push_back(where + "solver caps must be positive");
  if (p.solutions.empty()) out.push_back(where + "no solution specs");

  for (std::size_t i = 0; i < p.solutions.size(); ++i) {
    const auto& s = p.solutions[i];
    const std::string sw = where + "solution " + std::to_string(i) + ": ";
    const auto& w = s.weights;
    if (w.cohesion < Rational(0) || w.coupling < Rational(0) || w.pattern < Rational(0)) {
      out.push_back(sw + "negative score weight");
    }
    if (w.cohesion + w.coupling + w.pattern != Rational(1)) out.push_back(sw + "score weights must sum to 1");
    if (s.kind == SolutionKind::thresholds) {
      if (!s.thresholds || s.pattern) {
        out.push_back(sw + "thresholds kind must populate thresholds only");
        continue;
      }
      if (s.thresholds->min_design_cohesion < Rational(0) || s.thresholds->min_design_cohesion > Rational(1)) {
        out.push_back(sw + "min_design_cohesion outside [0,1]");
      }
      if (s.thresholds->max_avg_cbo < Rational(0)) out.push_back(sw + "max_avg_cbo negative");
    } else {
      if (!s.pattern || s.thresholds) {
        out.push_back(sw + "pattern kind must populate pattern only");
        continue;
      }
      std::set<std::string> slot_ids;
      for (const auto& slot : s.pattern->slots) {
        if (!slot_ids.insert(slot.id).second) out.push_back(sw + "duplicate slot id '" + slot.id + "'");
      }
      for (const auto* list : {&s.pattern->associations, &s.pattern->forbidden_associations}) {
        for (const auto& [x, y] : *list) {
          if (!slot_ids.count(x) || !slot_ids.count(y)) {
            out.push_back(sw + "association references unknown slot '" + (slot_ids.count(x) ? y : x) + "'");
          }
          if (x == y) out.push_back(sw + "slot association '" + x + "' with itself");
        }
      }
    }
  }
  return out;
}

}  // namespace aosd
