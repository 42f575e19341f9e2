// SPDX-License-Identifier: Apache-2.0
#include "aosd/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "aosd/flows.hpp"

namespace aosd {

int cbo_per_class(const Design& d, std::string_view class_id) {
  if (!d.find_class(class_id)) {
    throw Error(Errc::UnknownId, "unknown class '" + std::string(class_id) + "'", std::string(class_id));
  }
  std::set<std::string_view> neighbours;
  for (const auto& a : d.associations) {
    if (a.a == a.b) continue;
    if (a.touches(class_id)) neighbours.insert(a.other(class_id));
  }
  return static_cast<int>(neighbours.size());
}

Rational avg_cbo(const Design& d) {
  if (d.classes.empty()) throw Error(Errc::EmptyDesign, "design has no classes");
  std::int64_t total = 0;
  for (const auto& c : d.classes) total += cbo_per_class(d, c.id);
  return Rational(total, static_cast<std::int64_t>(d.classes.size()));
}

Rational class_cohesion(const ClassBox& box) {
  std::vector<const KeywordSet*> elements;
  if (box.keywords.empty()) {
    throw Error(Errc::MissingKeywords, "class '" + box.id + "' has no keywords", box.id);
  }
  elements.push_back(&box.keywords);
  for (const auto& m : box.members) {
    if (m.keywords.empty()) {
      throw Error(Errc::MissingKeywords, "member '" + m.id + "' in class '" + box.id + "' has no keywords", m.id);
    }
    elements.push_back(&m.keywords);
  }
  if (elements.size() == 1) return Rational(1);

  Rational sum(0);
  std::int64_t comparisons = 0;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = i + 1; j < elements.size(); ++j) {
      auto matches = static_cast<std::int64_t>(elements[i]->intersection_size(*elements[j]));
      auto considered = static_cast<std::int64_t>(elements[i]->union_size(*elements[j]));
      sum += Rational(matches, considered);
      ++comparisons;
    }
  }
  return sum / comparisons;
}

Rational class_cohesion(const Design& d, std::string_view class_id) {
  const ClassBox* box = d.find_class(class_id);
  if (!box) throw Error(Errc::UnknownId, "unknown class '" + std::string(class_id) + "'", std::string(class_id));
  return class_cohesion(*box);
}

Rational design_cohesion(const Design& d) {
  if (d.classes.empty()) throw Error(Errc::EmptyDesign, "design has no classes");
  Rational sum(0);
  for (const auto& c : d.classes) sum += class_cohesion(c);
  return sum / static_cast<std::int64_t>(d.classes.size());
}

// ---------------------------------------------------------------- patterns

namespace {

using RequirementKey = std::pair<MemberKind, std::string>;

struct SlotContext {
  std::map<RequirementKey, std::size_t> required;  // multiset of member requirements
  std::size_t local_total = 0;
};

std::size_t local_satisfied(const SlotContext& ctx, const PatternSlot& slot, const ClassBox& box) {
  std::size_t n = 0;
  for (const auto& [key, count] : ctx.required) {
    std::size_t have = static_cast<std::size_t>(std::count_if(
        box.members.begin(), box.members.end(),
        [&](const Member& m) { return m.kind == key.first && m.name == key.second; }));
    n += std::min(count, have);
  }
  for (const auto& kw : slot.keywords) {
    if (box.keywords.contains(kw)) ++n;
  }
  return n;
}

struct PairConstraint {
  std::size_t x;
  std::size_t y;
  bool forbidden;
};

class PatternSearch {
 public:
  PatternSearch(const Design& d, const PatternTemplate& p) : design_(d), pattern_(p) {
    const std::size_t k = p.slots.size();
    local_.assign(k, std::vector<std::size_t>(d.classes.size(), 0));
    local_max_.assign(k, 0);
    std::map<std::string, std::size_t> slot_index;
    for (std::size_t s = 0; s < k; ++s) {
      slot_index[p.slots[s].id] = s;
      SlotContext ctx;
      for (const auto& req : p.slots[s].members) ++ctx.required[{req.kind, req.name}];
      local_max_[s] = p.slots[s].members.size() + p.slots[s].keywords.size();
      for (std::size_t c = 0; c < d.classes.size(); ++c) {
        local_[s][c] = local_satisfied(ctx, p.slots[s], d.classes[c]);
      }
    }
    auto add_pairs = [&](const auto& list, bool forbidden) {
      for (const auto& [x, y] : list) {
        auto ix = slot_index.find(x);
        auto iy = slot_index.find(y);
        if (ix == slot_index.end() || iy == slot_index.end()) continue;
        pairs_.push_back({ix->second, iy->second, forbidden});
      }
    };
    add_pairs(p.associations, false);
    add_pairs(p.forbidden_associations, true);
    // Pair constraints are scored when the later of their two slots is assigned.
    pairs_by_last_.assign(k, {});
    remaining_pairs_from_.assign(k + 1, 0);
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      pairs_by_last_[std::max(pairs_[i].x, pairs_[i].y)].push_back(i);
    }
    remaining_local_from_.assign(k + 1, 0);
    for (std::size_t s = k; s-- > 0;) {
      remaining_local_from_[s] = remaining_local_from_[s + 1] + local_max_[s];
      remaining_pairs_from_[s] = remaining_pairs_from_[s + 1] + pairs_by_last_[s].size();
    }
    // Unmatched constraints (e.g. dangling slot references) stay in the total.
    total_ = p.constraint_count();
  }

  PatternMatch run() {
    PatternMatch out;
    out.total = total_;
    const std::size_t k = pattern_.slots.size();
    current_.assign(k, kNone);
    best_.assign(k, kNone);
    used_.assign(design_.classes.size(), false);
    best_score_ = 0;
    have_best_ = false;
    dfs(0, 0);
    out.satisfied = best_score_;
    out.score = total_ == 0 ? Rational(1) : Rational(static_cast<std::int64_t>(best_score_), static_cast<std::int64_t>(total_));
    out.assignment.resize(k);
    for (std::size_t s = 0; s < k; ++s) out.assignment[s] = best_[s] == kNone ? "" : design_.classes[best_[s]].id;
    describe_unsatisfied(out);
    return out;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  bool pair_satisfied(const PairConstraint& pc, const std::vector<std::size_t>& a) const {
    if (a[pc.x] == kNone || a[pc.y] == kNone) return false;
    bool linked = design_.connected(design_.classes[a[pc.x]].id, design_.classes[a[pc.y]].id);
    return pc.forbidden ? !linked : linked;
  }

  void dfs(std::size_t slot, std::size_t score) {
    const std::size_t k = pattern_.slots.size();
    if (slot == k) {
      if (!have_best_ || score > best_score_) {
        best_score_ = score;
        best_ = current_;
        have_best_ = true;
      }
      return;
    }
    if (have_best_ && score + remaining_local_from_[slot] + remaining_pairs_from_[slot] <= best_score_) return;
    for (std::size_t c = 0; c <= design_.classes.size(); ++c) {
      bool unassigned = c == design_.classes.size();
      if (!unassigned && used_[c]) continue;
      current_[slot] = unassigned ? kNone : c;
      std::size_t gained = unassigned ? 0 : local_[slot][c];
      for (std::size_t pi : pairs_by_last_[slot]) gained += pair_satisfied(pairs_[pi], current_) ? 1 : 0;
      if (!unassigned) used_[c] = true;
      dfs(slot + 1, score + gained);
      if (!unassigned) used_[c] = false;
      current_[slot] = kNone;
    }
  }

  void describe_unsatisfied(PatternMatch& out) const {
    for (std::size_t s = 0; s < pattern_.slots.size(); ++s) {
      const auto& slot = pattern_.slots[s];
      if (best_[s] == kNone) {
        if (local_max_[s] > 0) out.unsatisfied.push_back("slot '" + slot.id + "' has no matching class");
        continue;
      }
      const ClassBox& box = design_.classes[best_[s]];
      std::map<RequirementKey, std::size_t> required;
      for (const auto& req : slot.members) ++required[{req.kind, req.name}];
      for (const auto& [key, count] : required) {
        std::size_t have = static_cast<std::size_t>(std::count_if(
            box.members.begin(), box.members.end(),
            [&](const Member& m) { return m.kind == key.first && m.name == key.second; }));
        if (have < count) {
          out.unsatisfied.push_back("slot '" + slot.id + "' (class '" + box.id + "') lacks " +
                                    std::string(to_string(key.first)) + " '" + key.second + "'");
        }
      }
      for (const auto& kw : slot.keywords) {
        if (!box.keywords.contains(kw)) {
          out.unsatisfied.push_back("slot '" + slot.id + "' (class '" + box.id + "') lacks keyword '" + kw + "'");
        }
      }
    }
    for (const auto& pc : pairs_) {
      if (pair_satisfied(pc, best_)) continue;
      const std::string& x = pattern_.slots[pc.x].id;
      const std::string& y = pattern_.slots[pc.y].id;
      out.unsatisfied.push_back(pc.forbidden ? "slots '" + x + "' and '" + y + "' must not be associated"
                                             : "slots '" + x + "' and '" + y + "' must be associated");
    }
  }

  const Design& design_;
  const PatternTemplate& pattern_;
  std::vector<std::vector<std::size_t>> local_;
  std::vector<std::size_t> local_max_;
  std::vector<PairConstraint> pairs_;
  std::vector<std::vector<std::size_t>> pairs_by_last_;
  std::vector<std::size_t> remaining_local_from_;
  std::vector<std::size_t> remaining_pairs_from_;
  std::size_t total_ = 0;

  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_;
  std::vector<bool> used_;
  std::size_t best_score_ = 0;
  bool have_best_ = false;
};

}  // namespace

PatternMatch match_pattern(const Design& d, const PatternTemplate& p) { return PatternSearch(d, p).run(); }

Rational pattern_match(const Design& d, const PatternTemplate& p) { return match_pattern(d, p).score; }

// ---------------------------------------------------------------- scoring

std::vector<CouplingWarning> coupling_warnings(const Design& d, int threshold) {
  std::vector<CouplingWarning> out;
  for (const auto& c : d.classes) {
    int cbo = cbo_per_class(d, c.id);
    if (cbo > threshold) {
      out.push_back({c.id, cbo,
                     "coupling of class '" + c.name + "' is too high (" + std::to_string(cbo) + " > " +
                         std::to_string(threshold) + ")"});
    }
  }
  std::sort(out.begin(), out.end(), [](const CouplingWarning& x, const CouplingWarning& y) {
    return x.cbo != y.cbo ? x.cbo > y.cbo : x.class_id < y.class_id;
  });
  return out;
}

Rational coupling_term(const Rational& avg, std::size_t class_count) {
  std::int64_t norm = std::max<std::int64_t>(1, static_cast<std::int64_t>(class_count) - 1);
  Rational t = Rational(1) - avg / norm;
  return t < Rational(0) ? Rational(0) : t;
}

namespace {

Rational placed_ratio(const Design& d) {
  std::int64_t placed = 0;
  for (const auto& c : d.classes) placed += static_cast<std::int64_t>(c.members.size());
  std::int64_t total = placed + static_cast<std::int64_t>(d.unplaced.size());
  return total == 0 ? Rational(1) : Rational(placed, total);
}

// Returns the supported fraction and appends the unsupported pairs.
Rational flow_support(const Design& d, std::vector<Association>& missing) {
  std::set<Association> needed;
  FlowGraph g = derive_flows(d);
  for (const auto& e : g.control_edges) {
    if (e.scope == FlowScope::inter_class) needed.insert(Association::make(e.caller.class_id, e.callee.class_id));
  }
  for (const auto& e : g.data_edges) {
    if (e.scope == FlowScope::inter_class) needed.insert(Association::make(e.method.class_id, e.attribute.class_id));
  }
  if (needed.empty()) return Rational(1);
  std::int64_t supported = 0;
  for (const auto& a : needed) {
    if (d.associations.count(a)) {
      ++supported;
    } else {
      missing.push_back(a);
    }
  }
  return Rational(supported, static_cast<std::int64_t>(needed.size()));
}

}  // namespace

ScoreReport score(const Design& d, const SolutionSpec& spec, int warning_threshold) {
  ScoreReport r;
  r.placed_ratio = placed_ratio(d);
  for (const auto& c : d.classes) r.per_class_cbo[c.id] = cbo_per_class(d, c.id);
  r.avg_cbo = avg_cbo(d);
  r.coupling_term = coupling_term(r.avg_cbo, d.classes.size());

  const bool needs_cohesion = spec.kind == SolutionKind::thresholds || spec.weights.cohesion != Rational(0);
  try {
    std::map<std::string, Rational> per_class;
    Rational sum(0);
    for (const auto& c : d.classes) {
      Rational cc = class_cohesion(c);
      per_class[c.id] = cc;
      sum += cc;
    }
    r.per_class_cohesion = std::move(per_class);
    r.design_cohesion = sum / static_cast<std::int64_t>(d.classes.size());
  } catch (const Error& e) {
    if (needs_cohesion || e.code() != Errc::MissingKeywords) throw;
    r.cohesion_available = false;
  }

  if (spec.pattern) {
    PatternMatch pm = match_pattern(d, *spec.pattern);
    r.pattern_score = pm.score;
    if (spec.kind == SolutionKind::pattern) r.failures = std::move(pm.unsatisfied);
  }

  if (spec.kind == SolutionKind::thresholds) {
    const Thresholds& t = *spec.thresholds;
    if (r.design_cohesion < t.min_design_cohesion) {
      r.failures.push_back("design cohesion " + to_string(r.design_cohesion) + " is below the minimum " +
                           to_string(t.min_design_cohesion));
    }
    if (r.avg_cbo > t.max_avg_cbo) {
      r.failures.push_back("average CBO " + to_string(r.avg_cbo) + " exceeds the maximum " + to_string(t.max_avg_cbo));
    }
    if (t.require_all_placed && !d.unplaced.empty()) {
      r.failures.push_back(std::to_string(d.unplaced.size()) + " member(s) still in the toolbox");
    }
    if (t.require_flow_associations) {
      std::vector<Association> missing;
      r.flow_support = flow_support(d, missing);
      for (const auto& a : missing) {
        r.failures.push_back("classes '" + a.a + "' and '" + a.b + "' exchange flows but are not associated");
      }
    }
    r.accepted = r.failures.empty();
  } else {
    r.accepted = r.pattern_score == Rational(1);
  }

  const auto& w = spec.weights;
  r.composite = round_percent_half_up(w.cohesion * r.design_cohesion + w.coupling * r.coupling_term +
                                      w.pattern * r.pattern_score);
  for (auto& warning : coupling_warnings(d, warning_threshold)) r.warnings.push_back(std::move(warning));
  return r;
}

// ---------------------------------------------------------------- puzzles

int effective_warning_threshold(const PuzzleDef& puzzle, int fallback) {
  return puzzle.cbo_warning_threshold.value_or(fallback);
}

Rational placement_fraction(const Design& d, const PuzzleDef& puzzle) {
  const auto& toolbox = puzzle.initial.unplaced;
  if (toolbox.empty()) return Rational(1);
  std::int64_t placed = 0;
  for (const auto& m : toolbox) {
    auto where = d.location_of(m.id);
    if (where && !where->empty()) ++placed;
  }
  return Rational(placed, static_cast<std::int64_t>(toolbox.size()));
}

namespace {

Rational spec_closeness(const ScoreReport& r, const SolutionSpec& spec) {
  if (spec.kind == SolutionKind::pattern) return r.pattern_score;
  const Thresholds& t = *spec.thresholds;
  Rational cohesion_ratio = t.min_design_cohesion == Rational(0)
                                ? Rational(1)
                                : std::min(Rational(1), r.design_cohesion / t.min_design_cohesion);
  Rational cbo_ratio = r.avg_cbo <= t.max_avg_cbo ? Rational(1) : t.max_avg_cbo / r.avg_cbo;
  Rational sum = cohesion_ratio + cbo_ratio;
  std::int64_t criteria = 2;
  if (t.require_all_placed) {
    sum += r.placed_ratio;
    ++criteria;
  }
  if (t.require_flow_associations) {
    sum += r.flow_support;
    ++criteria;
  }
  return sum / criteria;
}

Rational combine_progress(const Rational& placement, const Rational& closeness) {
  return placement / 2 + closeness / 2;
}

bool better(const ScoreReport& x, const ScoreReport& y) {
  if (x.accepted != y.accepted) return x.accepted;
  return x.composite > y.composite;
}

}  // namespace

Evaluation evaluate(const Design& d, const PuzzleDef& puzzle, int warning_threshold) {
  Evaluation ev;
  const Rational placement = placement_fraction(d, puzzle);
  Rational best_progress(0);
  for (std::size_t i = 0; i < puzzle.solutions.size(); ++i) {
    ScoreReport r = score(d, puzzle.solutions[i], warning_threshold);
    r.spec_index = i;
    best_progress = std::max(best_progress, combine_progress(placement, spec_closeness(r, puzzle.solutions[i])));
    ev.per_spec.push_back(std::move(r));
    if (i > 0 && better(ev.per_spec[i], ev.per_spec[ev.best])) ev.best = i;
  }
  if (ev.per_spec.empty()) throw Error(Errc::InvalidPuzzle, "puzzle '" + puzzle.id + "' has no solution specs", puzzle.id);
  ev.progress = ev.accepted() ? Rational(1) : best_progress;
  return ev;
}

Rational progress(const Design& d, const PuzzleDef& puzzle) {
  const Rational placement = placement_fraction(d, puzzle);
  Rational best(0);
  for (const auto& spec : puzzle.solutions) {
    try {
      ScoreReport r = score(d, spec);
      if (r.accepted) return Rational(1);
      best = std::max(best, combine_progress(placement, spec_closeness(r, spec)));
    } catch (const Error&) {
      // not computable for this spec
    }
  }
  return best;
}

}  // namespace aosd
