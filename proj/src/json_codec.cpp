// SPDX-License-Identifier: Apache-2.0
#include "aosd/json_codec.hpp"

#include <algorithm>

namespace aosd {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw Error(Errc::SchemaError, path + ": " + message, path);
}

std::string at(const std::string& path, std::string_view key) { return path + "." + std::string(key); }
std::string at(const std::string& path, std::size_t index) { return path + "[" + std::to_string(index) + "]"; }

const Json& require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

const Json& require_array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

const Json& field(const Json& obj, std::string_view key, const std::string& path) {
  require_object(obj, path);
  auto it = obj.find(key);
  if (it == obj.end()) fail(at(path, key), "missing required field");
  return *it;
}

const Json* optional_field(const Json& obj, std::string_view key, const std::string& path) {
  require_object(obj, path);
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::string string_field(const Json& obj, std::string_view key, const std::string& path) {
  return as_string(field(obj, key, path), at(path, key));
}

std::string string_field_or(const Json& obj, std::string_view key, const std::string& path, std::string fallback) {
  const Json* j = optional_field(obj, key, path);
  return j ? as_string(*j, at(path, key)) : std::move(fallback);
}

std::int64_t as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<std::int64_t>();
}

bool as_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

std::vector<std::string> string_list(const Json& j, const std::string& path) {
  require_array(j, path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_string(j[i], at(path, i)));
  return out;
}

std::vector<std::string> string_list_field(const Json& obj, std::string_view key, const std::string& path) {
  const Json* j = optional_field(obj, key, path);
  return j ? string_list(*j, at(path, key)) : std::vector<std::string>{};
}

std::pair<std::string, std::string> string_pair(const Json& j, const std::string& path) {
  require_array(j, path);
  if (j.size() != 2) fail(path, "expected a pair of ids");
  return {as_string(j[0], at(path, 0)), as_string(j[1], at(path, 1))};
}

Json encode_rational(const Rational& r) { return to_string(r); }

Json encode_ref(const MemberRef& r) { return Json{{"class", r.class_id}, {"member", r.member_id}}; }

Json encode_control(const ControlEdge& e) {
  Json j{{"from", encode_ref(e.caller)}, {"to", encode_ref(e.callee)}, {"scope", to_string(e.scope)}};
  if (!e.note.empty()) j["note"] = e.note;
  return j;
}

Json encode_data(const DataEdge& e) {
  Json j{{"from", encode_ref(e.method)},
         {"to", encode_ref(e.attribute)},
         {"access", to_string(e.access)},
         {"scope", to_string(e.scope)}};
  if (!e.note.empty()) j["note"] = e.note;
  return j;
}

Json encode_unresolved(const UnresolvedRef& u) {
  return Json{{"method", encode_ref(u.method)}, {"kind", to_string(u.kind)}, {"name", u.name}};
}

template <typename T, typename F>
Json encode_list(const std::vector<T>& xs, F f) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(f(x));
  return out;
}

Json encode_warning(const CouplingWarning& w) {
  return Json{{"class", w.class_id}, {"cbo", w.cbo}, {"reason", w.reason}};
}

}  // namespace

// ---------------------------------------------------------------- text

Json parse_json_text(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
    std::size_t line_start = text.rfind('\n', offset == 0 ? 0 : offset - 1);
    std::size_t column = line_start == std::string_view::npos ? offset + 1 : offset - line_start;
    std::string where = std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(column);
    throw Error(Errc::ParseError, where + ": " + e.what(), where);
  }
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

Rational decode_rational(const Json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number_float()) return parse_rational(j.dump());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  fail(path, "expected a rational (\"p/q\", integer or decimal)");
}

// ---------------------------------------------------------------- design

Json encode(const KeywordSet& k) {
  Json out = Json::array();
  for (const auto& w : k) out.push_back(w);
  return out;
}

Json encode(const Member& m) {
  Json j{{"id", m.id}, {"kind", to_string(m.kind)}, {"name", m.name}, {"keywords", encode(m.keywords)}};
  if (m.kind == MemberKind::method) {
    j["behavior"] = Json{{"calls", m.behavior.calls}, {"reads", m.behavior.reads}, {"writes", m.behavior.writes}};
  }
  return j;
}

Json encode(const ClassBox& c) {
  return Json{{"id", c.id},
              {"name", c.name},
              {"keywords", encode(c.keywords)},
              {"members", encode_list(c.members, [](const Member& m) { return encode(m); })},
              {"position", Json{{"x", c.position.x}, {"y", c.position.y}}}};
}

Json encode(const Design& d) {
  Json assoc = Json::array();
  for (const auto& a : d.associations) assoc.push_back(Json::array({a.a, a.b}));
  return Json{{"classes", encode_list(d.classes, [](const ClassBox& c) { return encode(c); })},
              {"associations", assoc},
              {"unplaced", encode_list(d.unplaced, [](const Member& m) { return encode(m); })}};
}

KeywordSet decode_keywords(const Json& j, const std::string& path) {
  KeywordSet out;
  require_array(j, path);
  for (std::size_t i = 0; i < j.size(); ++i) {
    try {
      out.insert(as_string(j[i], at(path, i)));
    } catch (const Error& e) {
      if (e.code() == Errc::SchemaError) throw;
      fail(at(path, i), e.what());
    }
  }
  return out;
}

Member decode_member(const Json& j, const std::string& path) {
  Member m;
  m.id = string_field(j, "id", path);
  std::string kind = string_field(j, "kind", path);
  auto k = member_kind_from_string(kind);
  if (!k) fail(at(path, "kind"), "expected \"attribute\" or \"method\", got \"" + kind + "\"");
  m.kind = *k;
  m.name = string_field_or(j, "name", path, m.id);
  if (const Json* kw = optional_field(j, "keywords", path)) m.keywords = decode_keywords(*kw, at(path, "keywords"));
  if (const Json* b = optional_field(j, "behavior", path)) {
    const std::string bp = at(path, "behavior");
    require_object(*b, bp);
    m.behavior.calls = string_list_field(*b, "calls", bp);
    m.behavior.reads = string_list_field(*b, "reads", bp);
    m.behavior.writes = string_list_field(*b, "writes", bp);
  }
  return m;
}

Design decode_design(const Json& j, const std::string& path) {
  Design d;
  require_object(j, path);
  const std::string cp = at(path, "classes");
  const Json& classes = require_array(field(j, "classes", path), cp);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const std::string p = at(cp, i);
    ClassBox c;
    c.id = string_field(classes[i], "id", p);
    c.name = string_field_or(classes[i], "name", p, c.id);
    if (const Json* kw = optional_field(classes[i], "keywords", p)) c.keywords = decode_keywords(*kw, at(p, "keywords"));
    if (const Json* members = optional_field(classes[i], "members", p)) {
      require_array(*members, at(p, "members"));
      for (std::size_t k = 0; k < members->size(); ++k) {
        c.members.push_back(decode_member((*members)[k], at(at(p, "members"), k)));
      }
    }
    if (const Json* pos = optional_field(classes[i], "position", p)) {
      const std::string pp = at(p, "position");
      require_object(*pos, pp);
      if (const Json* x = optional_field(*pos, "x", pp)) c.position.x = static_cast<int>(as_int(*x, at(pp, "x")));
      if (const Json* y = optional_field(*pos, "y", pp)) c.position.y = static_cast<int>(as_int(*y, at(pp, "y")));
    }
    d.classes.push_back(std::move(c));
  }
  if (const Json* assoc = optional_field(j, "associations", path)) {
    const std::string ap = at(path, "associations");
    require_array(*assoc, ap);
    for (std::size_t i = 0; i < assoc->size(); ++i) {
      auto [a, b] = string_pair((*assoc)[i], at(ap, i));
      // Self-associations are kept so validate_design can report them.
      d.associations.insert(Association::make(std::move(a), std::move(b)));
    }
  }
  if (const Json* unplaced = optional_field(j, "unplaced", path)) {
    const std::string up = at(path, "unplaced");
    require_array(*unplaced, up);
    for (std::size_t i = 0; i < unplaced->size(); ++i) d.unplaced.push_back(decode_member((*unplaced)[i], at(up, i)));
  }
  return d;
}

// ---------------------------------------------------------------- moves

Json encode(const Move& m) {
  struct Visitor {
    Json operator()(const PlaceMember& p) const {
      return Json{{"kind", "place_member"}, {"member", p.member}, {"target", p.target}};
    }
    Json operator()(const RemoveMember& r) const { return Json{{"kind", "remove_member"}, {"member", r.member}}; }
    Json operator()(const Connect& c) const { return Json{{"kind", "connect"}, {"a", c.a}, {"b", c.b}}; }
    Json operator()(const Disconnect& c) const { return Json{{"kind", "disconnect"}, {"a", c.a}, {"b", c.b}}; }
    Json operator()(const CreateClass& c) const {
      return Json{{"kind", "create_class"}, {"name", c.name}, {"keywords", encode(c.keywords)}};
    }
    Json operator()(const DeleteClass& c) const { return Json{{"kind", "delete_class"}, {"class", c.cls}}; }
  };
  return std::visit(Visitor{}, m);
}

Move decode_move(const Json& j, const std::string& path) {
  std::string kind = string_field(j, "kind", path);
  auto k = move_kind_from_string(kind);
  if (!k) fail(at(path, "kind"), "unknown move kind \"" + kind + "\"");
  switch (*k) {
    case MoveKind::place_member: return PlaceMember{string_field(j, "member", path), string_field(j, "target", path)};
    case MoveKind::remove_member: return RemoveMember{string_field(j, "member", path)};
    case MoveKind::connect: return Connect{string_field(j, "a", path), string_field(j, "b", path)};
    case MoveKind::disconnect: return Disconnect{string_field(j, "a", path), string_field(j, "b", path)};
    case MoveKind::create_class: {
      CreateClass c{string_field(j, "name", path), {}};
      if (const Json* kw = optional_field(j, "keywords", path)) c.keywords = decode_keywords(*kw, at(path, "keywords"));
      return c;
    }
    case MoveKind::delete_class: return DeleteClass{string_field(j, "class", path)};
  }
  fail(path, "unknown move");
}

// ---------------------------------------------------------------- puzzles

Json encode(const PatternTemplate& p) {
  Json slots = Json::array();
  for (const auto& s : p.slots) {
    Json members = Json::array();
    for (const auto& m : s.members) members.push_back(Json{{"kind", to_string(m.kind)}, {"name", m.name}});
    slots.push_back(Json{{"id", s.id}, {"members", members}, {"keywords", encode(s.keywords)}});
  }
  auto pairs = [](const auto& list) {
    Json out = Json::array();
    for (const auto& [x, y] : list) out.push_back(Json::array({x, y}));
    return out;
  };
  return Json{{"slots", slots},
              {"associations", pairs(p.associations)},
              {"forbidden_associations", pairs(p.forbidden_associations)}};
}

Json encode(const SolutionSpec& s) {
  Json j{{"kind", s.kind == SolutionKind::thresholds ? "thresholds" : "pattern"},
         {"weights", Json{{"cohesion", encode_rational(s.weights.cohesion)},
                          {"coupling", encode_rational(s.weights.coupling)},
                          {"pattern", encode_rational(s.weights.pattern)}}}};
  if (s.thresholds) {
    j["min_design_cohesion"] = encode_rational(s.thresholds->min_design_cohesion);
    j["max_avg_cbo"] = encode_rational(s.thresholds->max_avg_cbo);
    j["require_all_placed"] = s.thresholds->require_all_placed;
    j["require_flow_associations"] = s.thresholds->require_flow_associations;
  }
  if (s.pattern) j["pattern"] = encode(*s.pattern);
  return j;
}

SolutionSpec decode_solution(const Json& j, const std::string& path) {
  SolutionSpec s;
  std::string kind = string_field(j, "kind", path);
  if (kind == "thresholds") {
    s.kind = SolutionKind::thresholds;
  } else if (kind == "pattern") {
    s.kind = SolutionKind::pattern;
  } else {
    fail(at(path, "kind"), "expected \"thresholds\" or \"pattern\", got \"" + kind + "\"");
  }
  const Json* min_c = optional_field(j, "min_design_cohesion", path);
  const Json* max_c = optional_field(j, "max_avg_cbo", path);
  if (min_c || max_c) {
    if (!min_c) fail(at(path, "min_design_cohesion"), "missing required field");
    if (!max_c) fail(at(path, "max_avg_cbo"), "missing required field");
    Thresholds t;
    t.min_design_cohesion = decode_rational(*min_c, at(path, "min_design_cohesion"));
    t.max_avg_cbo = decode_rational(*max_c, at(path, "max_avg_cbo"));
    if (const Json* b = optional_field(j, "require_all_placed", path)) {
      t.require_all_placed = as_bool(*b, at(path, "require_all_placed"));
    }
    if (const Json* b = optional_field(j, "require_flow_associations", path)) {
      t.require_flow_associations = as_bool(*b, at(path, "require_flow_associations"));
    }
    s.thresholds = t;
  }
  if (const Json* p = optional_field(j, "pattern", path)) {
    const std::string pp = at(path, "pattern");
    PatternTemplate t;
    const std::string sp = at(pp, "slots");
    const Json& slots = require_array(field(*p, "slots", pp), sp);
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const std::string slot_path = at(sp, i);
      PatternSlot slot;
      slot.id = string_field(slots[i], "id", slot_path);
      if (const Json* members = optional_field(slots[i], "members", slot_path)) {
        const std::string mp = at(slot_path, "members");
        require_array(*members, mp);
        for (std::size_t k = 0; k < members->size(); ++k) {
          const std::string rp = at(mp, k);
          std::string mk = string_field((*members)[k], "kind", rp);
          auto kk = member_kind_from_string(mk);
          if (!kk) fail(at(rp, "kind"), "expected \"attribute\" or \"method\", got \"" + mk + "\"");
          slot.members.push_back({*kk, string_field((*members)[k], "name", rp)});
        }
      }
      if (const Json* kw = optional_field(slots[i], "keywords", slot_path)) {
        slot.keywords = decode_keywords(*kw, at(slot_path, "keywords"));
      }
      t.slots.push_back(std::move(slot));
    }
    for (const char* key : {"associations", "forbidden_associations"}) {
      if (const Json* list = optional_field(*p, key, pp)) {
        const std::string lp = at(pp, key);
        require_array(*list, lp);
        auto& dst = std::string_view(key) == "associations" ? t.associations : t.forbidden_associations;
        for (std::size_t i = 0; i < list->size(); ++i) dst.push_back(string_pair((*list)[i], at(lp, i)));
      }
    }
    s.pattern = std::move(t);
  }
  if (const Json* w = optional_field(j, "weights", path)) {
    const std::string wp = at(path, "weights");
    s.weights.cohesion = decode_rational(field(*w, "cohesion", wp), at(wp, "cohesion"));
    s.weights.coupling = decode_rational(field(*w, "coupling", wp), at(wp, "coupling"));
    s.weights.pattern = decode_rational(field(*w, "pattern", wp), at(wp, "pattern"));
  }
  return s;
}

Json encode(const PuzzleDef& p) {
  Json moves = Json::array();
  for (auto k : p.allowed_moves) moves.push_back(to_string(k));
  Json palette = Json::array();
  for (const auto& b : p.class_palette) palette.push_back(Json{{"name", b.name}, {"keywords", encode(b.keywords)}});
  Json j{{"id", p.id},
         {"title", p.title},
         {"assignment", p.assignment},
         {"principles", p.principles},
         {"initial", encode(p.initial)},
         {"allowed_moves", moves},
         {"class_creation_allowed", p.class_creation_allowed},
         {"class_palette", palette},
         {"solutions", encode_list(p.solutions, [](const SolutionSpec& s) { return encode(s); })},
         {"solver_caps", Json{{"max_states", p.solver_caps.max_states}, {"max_depth", p.solver_caps.max_depth}}}};
  if (p.max_classes) j["max_classes"] = *p.max_classes;
  if (p.cbo_warning_threshold) j["cbo_warning_threshold"] = *p.cbo_warning_threshold;
  return j;
}

PuzzleDef decode_puzzle(const Json& j, const std::string& path) {
  PuzzleDef p;
  p.id = string_field(j, "id", path);
  p.title = string_field_or(j, "title", path, p.id);
  p.assignment = string_list(field(j, "assignment", path), at(path, "assignment"));
  for (auto& t : string_list_field(j, "principles", path)) p.principles.insert(std::move(t));
  p.initial = decode_design(field(j, "initial", path), at(path, "initial"));
  const std::string mp = at(path, "allowed_moves");
  auto moves = string_list(field(j, "allowed_moves", path), mp);
  for (std::size_t i = 0; i < moves.size(); ++i) {
    auto k = move_kind_from_string(moves[i]);
    if (!k) fail(at(mp, i), "unknown move kind \"" + moves[i] + "\"");
    p.allowed_moves.insert(*k);
  }
  if (const Json* c = optional_field(j, "class_creation_allowed", path)) {
    p.class_creation_allowed = as_bool(*c, at(path, "class_creation_allowed"));
  }
  if (const Json* pal = optional_field(j, "class_palette", path)) {
    const std::string pp = at(path, "class_palette");
    require_array(*pal, pp);
    for (std::size_t i = 0; i < pal->size(); ++i) {
      const std::string bp = at(pp, i);
      ClassBlueprint b;
      b.name = string_field((*pal)[i], "name", bp);
      if (const Json* kw = optional_field((*pal)[i], "keywords", bp)) b.keywords = decode_keywords(*kw, at(bp, "keywords"));
      p.class_palette.push_back(std::move(b));
    }
  }
  if (const Json* mc = optional_field(j, "max_classes", path)) {
    auto v = as_int(*mc, at(path, "max_classes"));
    if (v < 0) fail(at(path, "max_classes"), "must be non-negative");
    p.max_classes = static_cast<std::size_t>(v);
  }
  const std::string sp = at(path, "solutions");
  const Json& sols = require_array(field(j, "solutions", path), sp);
  for (std::size_t i = 0; i < sols.size(); ++i) p.solutions.push_back(decode_solution(sols[i], at(sp, i)));
  if (const Json* t = optional_field(j, "cbo_warning_threshold", path)) {
    p.cbo_warning_threshold = static_cast<int>(as_int(*t, at(path, "cbo_warning_threshold")));
  }
  if (const Json* caps = optional_field(j, "solver_caps", path)) {
    const std::string cp = at(path, "solver_caps");
    if (const Json* s = optional_field(*caps, "max_states", cp)) {
      auto v = as_int(*s, at(cp, "max_states"));
      if (v <= 0) fail(at(cp, "max_states"), "must be positive");
      p.solver_caps.max_states = static_cast<std::size_t>(v);
    }
    if (const Json* d = optional_field(*caps, "max_depth", cp)) {
      auto v = as_int(*d, at(cp, "max_depth"));
      if (v <= 0) fail(at(cp, "max_depth"), "must be positive");
      p.solver_caps.max_depth = static_cast<std::size_t>(v);
    }
  }
  return p;
}

// ---------------------------------------------------------------- reports

Json encode(const ScoreReport& r) {
  Json cbo = Json::object();
  for (const auto& [id, v] : r.per_class_cbo) cbo[id] = v;
  Json cohesion = Json::object();
  for (const auto& [id, v] : r.per_class_cohesion) cohesion[id] = encode_rational(v);
  return Json{{"per_class_cbo", cbo},
              {"avg_cbo", encode_rational(r.avg_cbo)},
              {"per_class_cohesion", cohesion},
              {"design_cohesion", encode_rational(r.design_cohesion)},
              {"cohesion_available", r.cohesion_available},
              {"pattern_score", encode_rational(r.pattern_score)},
              {"coupling_term", encode_rational(r.coupling_term)},
              {"placed_ratio", encode_rational(r.placed_ratio)},
              {"flow_support", encode_rational(r.flow_support)},
              {"composite", r.composite},
              {"accepted", r.accepted},
              {"warnings", encode_list(r.warnings, encode_warning)},
              {"failures", r.failures},
              {"solution_index", r.spec_index}};
}

Json encode(const Evaluation& e) {
  return Json{{"accepted", e.accepted()},
              {"composite", e.report().composite},
              {"progress", encode_rational(e.progress)},
              {"progress_percent", round_percent_half_up(e.progress)},
              {"report", encode(e.report())},
              {"reports", encode_list(e.per_spec, [](const ScoreReport& r) { return encode(r); })}};
}

Json encode(const FlowGraph& g) {
  return Json{{"nodes", encode_list(g.nodes, encode_ref)},
              {"control_edges", encode_list(g.control_edges, encode_control)},
              {"data_edges", encode_list(g.data_edges, encode_data)},
              {"unresolved", encode_list(g.unresolved, encode_unresolved)}};
}

Json encode(const FlowDelta& d) {
  return Json{{"control_added", encode_list(d.control_added, encode_control)},
              {"control_removed", encode_list(d.control_removed, encode_control)},
              {"data_added", encode_list(d.data_added, encode_data)},
              {"data_removed", encode_list(d.data_removed, encode_data)},
              {"unresolved_added", encode_list(d.unresolved_added, encode_unresolved)},
              {"unresolved_removed", encode_list(d.unresolved_removed, encode_unresolved)}};
}

Json encode(const FeedbackEvent& e) {
  Json j{{"report", encode(e.report)},
         {"progress", encode_rational(e.progress)},
         {"progress_percent", round_percent_half_up(e.progress)},
         {"score_delta", e.score_delta},
         {"sound_cue", e.sound_cue ? Json(to_string(*e.sound_cue)) : Json(nullptr)},
         {"warnings", encode_list(e.warnings, encode_warning)},
         {"flow_delta", e.flow_delta ? encode(*e.flow_delta) : Json(nullptr)},
         {"move_accepted", e.move_accepted},
         {"message", e.message}};
  if (!e.assignment.empty()) j["assignment"] = e.assignment;
  return j;
}

// ---------------------------------------------------------------- saves

Json encode(const SaveGame& s) {
  Json completed = Json::object();
  for (const auto& [id, rec] : s.completed) {
    completed[id] = Json{{"best_score", rec.best_score}, {"completed_seq", rec.completed_seq}};
  }
  Json active(nullptr);
  if (s.active_session) {
    active = Json{{"puzzle_id", s.active_session->puzzle_id},
                  {"moves", encode_list(s.active_session->moves, [](const Move& m) { return encode(m); })}};
  }
  return Json{{"schema_version", kSaveSchemaVersion},
              {"player_name", s.player_name},
              {"completed", completed},
              {"active_session", active}};
}

SaveGame decode_save(const Json& j, const std::string& path) {
  auto version = as_int(field(j, "schema_version", path), at(path, "schema_version"));
  if (version != kSaveSchemaVersion) fail(at(path, "schema_version"), "unsupported save version " + std::to_string(version));
  SaveGame s;
  s.player_name = string_field(j, "player_name", path);
  const std::string cp = at(path, "completed");
  const Json& completed = require_object(field(j, "completed", path), cp);
  for (const auto& [id, rec] : completed.items()) {
    const std::string rp = at(cp, id);
    auto seq = as_int(field(rec, "completed_seq", rp), at(rp, "completed_seq"));
    if (seq <= 0) fail(at(rp, "completed_seq"), "must be positive");
    s.completed[id] = CompletionRecord{static_cast<int>(as_int(field(rec, "best_score", rp), at(rp, "best_score"))),
                                       static_cast<std::uint64_t>(seq)};
  }
  if (const Json* a = optional_field(j, "active_session", path)) {
    const std::string ap = at(path, "active_session");
    SessionSnapshot snap;
    snap.puzzle_id = string_field(*a, "puzzle_id", ap);
    const std::string mp = at(ap, "moves");
    const Json& moves = require_array(field(*a, "moves", ap), mp);
    for (std::size_t i = 0; i < moves.size(); ++i) snap.moves.push_back(decode_move(moves[i], at(mp, i)));
    s.active_session = std::move(snap);
  }
  return s;
}

}  // namespace aosd
