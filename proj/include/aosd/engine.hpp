// SPDX-License-Identifier: Apache-2.0
//
// Game sessions: moves, direct feedback and explicit completion.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aosd/flows.hpp"
#include "aosd/metrics.hpp"
#include "aosd/model.hpp"

namespace aosd {

enum class SoundCue { place, remove, connect, error, level_complete };

std::string_view to_string(SoundCue cue);

struct FeedbackEvent {
  ScoreReport report;
  Rational progress{0};
  int score_delta = 0;
  // Empty on the event that opens a session.
  std::optional<SoundCue> sound_cue;
  std::vector<CouplingWarning> warnings;
  std::optional<FlowDelta> flow_delta;
  bool move_accepted = true;
  std::string message;
  std::vector<std::string> assignment;  // only on the opening event

  bool operator==(const FeedbackEvent&) const = default;
};

struct Session {
  std::string id;
  std::shared_ptr<const PuzzleDef> puzzle;
  Design design;
  std::vector<Move> move_log;
  ScoreReport last_report;
  Rational last_progress{0};
  bool finished = false;
  int warning_threshold = kDefaultCboWarningThreshold;

  bool operator==(const Session& o) const {
    return id == o.id && puzzle == o.puzzle && design == o.design && move_log == o.move_log &&
           last_report == o.last_report && last_progress == o.last_progress && finished == o.finished &&
           warning_threshold == o.warning_threshold;
  }
};

// Why the move cannot be played on this puzzle (allowed kinds, class
// creation rules), before any structural check. nullopt when permitted.
std::optional<std::string> move_gate(const PuzzleDef& puzzle, const Design& d, const Move& m);

struct Transition {
  Design design;
  Evaluation evaluation;
};

// Gate, structural edit and scorability check in one step. Returns the
// reason on failure. Shared by sessions and the solver.
struct TransitionResult {
  std::optional<Transition> ok;
  std::string error;
};
TransitionResult try_transition(const PuzzleDef& puzzle, const Design& d, const Move& m, int warning_threshold);

struct SessionStart {
  Session session;
  FeedbackEvent event;
};

// Throws InvalidPuzzle.
SessionStart start_session(std::shared_ptr<const PuzzleDef> puzzle, std::string session_id = "local",
                           int warning_fallback = kDefaultCboWarningThreshold);

struct MoveOutcome {
  Session session;
  FeedbackEvent event;
};

// Illegal moves come back as an error event with the session untouched.
MoveOutcome play_move(const Session& s, const Move& m);

class NotAcceptedError : public Error {
 public:
  NotAcceptedError(std::string message, Rational progress, std::vector<std::string> failures)
      : Error(Errc::NotAccepted, std::move(message)), progress_(progress), failures_(std::move(failures)) {}
  const Rational& progress() const noexcept { return progress_; }
  const std::vector<std::string>& failures() const noexcept { return failures_; }

 private:
  Rational progress_;
  std::vector<std::string> failures_;
};

struct FinishOutcome {
  Session session;
  ScoreReport report;
  SoundCue sound_cue = SoundCue::level_complete;
};

// Throws NotAcceptedError when no spec accepts the current design.
FinishOutcome finish(const Session& s);

struct Replay {
  Session session;
  std::vector<FeedbackEvent> events;
  std::vector<int> composites;  // initial composite followed by one entry per move
};

Replay replay(std::shared_ptr<const PuzzleDef> puzzle, const std::vector<Move>& moves,
              std::string session_id = "local", int warning_fallback = kDefaultCboWarningThreshold);

}  // namespace aosd
