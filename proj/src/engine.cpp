// SPDX-License-Identifier: Apache-2.0
#include "aosd/engine.hpp"

#include <algorithm>

namespace aosd {

std::string_view to_string(SoundCue cue) {
  switch (cue) {
    case SoundCue::place: return "place";
    case SoundCue::remove: return "remove";
    case SoundCue::connect: return "connect";
    case SoundCue::error: return "error";
    case SoundCue::level_complete: return "level_complete";
  }
  return "error";
}

namespace {

SoundCue cue_for(MoveKind kind) {
  switch (kind) {
    case MoveKind::place_member:
    case MoveKind::create_class: return SoundCue::place;
    case MoveKind::remove_member:
    case MoveKind::disconnect:
    case MoveKind::delete_class: return SoundCue::remove;
    case MoveKind::connect: return SoundCue::connect;
  }
  return SoundCue::place;
}

bool touches_members(const Move& m) {
  MoveKind k = kind_of(m);
  return k == MoveKind::place_member || k == MoveKind::remove_member || k == MoveKind::delete_class;
}

}  // namespace

std::optional<std::string> move_gate(const PuzzleDef& puzzle, const Design& d, const Move& m) {
  const MoveKind kind = kind_of(m);
  if (!puzzle.allowed_moves.count(kind)) {
    return "move '" + std::string(to_string(kind)) + "' is not allowed in this puzzle";
  }
  if ((kind == MoveKind::create_class || kind == MoveKind::delete_class) && !puzzle.class_creation_allowed) {
    return "this puzzle does not allow creating or deleting classes";
  }
  if (const auto* create = std::get_if<CreateClass>(&m)) {
    bool in_palette = std::any_of(puzzle.class_palette.begin(), puzzle.class_palette.end(),
                                  [&](const ClassBlueprint& b) { return b.keywords == create->keywords; });
    if (!in_palette) return "no class with these keywords is available in the toolbox";
    if (puzzle.max_classes && d.classes.size() >= *puzzle.max_classes) {
      return "this puzzle allows at most " + std::to_string(*puzzle.max_classes) + " classes";
    }
  }
  if (kind == MoveKind::delete_class && d.classes.size() <= 1) return "the design must keep at least one class";
  return std::nullopt;
}

TransitionResult try_transition(const PuzzleDef& puzzle, const Design& d, const Move& m, int warning_threshold) {
  TransitionResult out;
  if (auto reason = move_gate(puzzle, d, m)) {
    out.error = std::move(*reason);
    return out;
  }
  try {
    Design next = apply_structural_edit(d, m);
    Evaluation ev = evaluate(next, puzzle, warning_threshold);
    out.ok = Transition{std::move(next), std::move(ev)};
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

SessionStart start_session(std::shared_ptr<const PuzzleDef> puzzle, std::string session_id, int warning_fallback) {
  if (!puzzle) throw Error(Errc::InvalidPuzzle, "no puzzle given");
  if (auto problems = validate_puzzle(*puzzle); !problems.empty()) {
    throw Error(Errc::InvalidPuzzle, problems.front(), puzzle->id);
  }
  Session s;
  s.id = std::move(session_id);
  s.warning_threshold = effective_warning_threshold(*puzzle, warning_fallback);
  s.design = puzzle->initial;
  Evaluation ev;
  try {
    ev = evaluate(s.design, *puzzle, s.warning_threshold);
  } catch (const Error& e) {
    throw Error(Errc::InvalidPuzzle, "initial design cannot be scored: " + std::string(e.what()), puzzle->id);
  }
  s.last_report = ev.report();
  s.last_progress = ev.progress;
  s.puzzle = std::move(puzzle);

  FeedbackEvent event;
  event.report = s.last_report;
  event.progress = s.last_progress;
  event.warnings = s.last_report.warnings;
  event.assignment = s.puzzle->assignment;
  event.message = s.puzzle->title;
  return {std::move(s), std::move(event)};
}

MoveOutcome play_move(const Session& s, const Move& m) {
  MoveOutcome out{s, {}};
  FeedbackEvent& ev = out.event;
  auto reject = [&](std::string reason) {
    ev.report = s.last_report;
    ev.progress = s.last_progress;
    ev.sound_cue = SoundCue::error;
    ev.warnings = s.last_report.warnings;
    ev.move_accepted = false;
    ev.message = std::move(reason);
    return out;
  };
  if (s.finished) return reject("the puzzle is already finished");

  TransitionResult t = try_transition(*s.puzzle, s.design, m, s.warning_threshold);
  if (!t.ok) return reject(t.error);

  Session& next = out.session;
  if (touches_members(m)) ev.flow_delta = flow_delta(derive_flows(s.design), derive_flows(t.ok->design));
  next.design = std::move(t.ok->design);
  next.move_log.push_back(m);
  next.last_report = t.ok->evaluation.report();
  next.last_progress = t.ok->evaluation.progress;

  ev.report = next.last_report;
  ev.progress = next.last_progress;
  ev.score_delta = next.last_report.composite - s.last_report.composite;
  ev.sound_cue = cue_for(kind_of(m));
  ev.warnings = next.last_report.warnings;
  ev.message = describe(m);
  return out;
}

FinishOutcome finish(const Session& s) {
  if (s.finished) return FinishOutcome{s, s.last_report, SoundCue::level_complete};
  if (!s.last_report.accepted) {
    std::vector<std::string> failures;
    try {
      // Collect what every spec still misses.
      Evaluation ev = evaluate(s.design, *s.puzzle, s.warning_threshold);
      for (const auto& r : ev.per_spec) {
        for (const auto& f : r.failures) {
          failures.push_back("solution " + std::to_string(r.spec_index + 1) + ": " + f);
        }
      }
    } catch (const Error& e) {
      failures.push_back(e.what());
    }
    throw NotAcceptedError("the design does not satisfy any solution yet", s.last_progress, std::move(failures));
  }
  FinishOutcome out{s, s.last_report, SoundCue::level_complete};
  out.session.finished = true;
  return out;
}

Replay replay(std::shared_ptr<const PuzzleDef> puzzle, const std::vector<Move>& moves, std::string session_id,
              int warning_fallback) {
  SessionStart start = start_session(std::move(puzzle), std::move(session_id), warning_fallback);
  Replay r{std::move(start.session), {}, {}};
  r.composites.push_back(start.event.report.composite);
  r.events.push_back(std::move(start.event));
  for (const auto& m : moves) {
    MoveOutcome o = play_move(r.session, m);
    r.session = std::move(o.session);
    r.composites.push_back(o.event.report.composite);
    r.events.push_back(std::move(o.event));
  }
  return r;
}

}  // namespace aosd
