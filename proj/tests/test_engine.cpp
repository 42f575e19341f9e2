// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "aosd/engine.hpp"
#include "aosd/solver.hpp"
#include "support.hpp"

using namespace aosd;
using namespace aosd::testing;

namespace {

std::shared_ptr<const PuzzleDef> single_placement_puzzle() {
  PuzzleDef p;
  p.id = "one";
  p.title = "One";
  p.assignment = {"Place the member."};
  p.initial.classes = {box("c", {"k"})};
  p.initial.unplaced = {attribute("m", {"k"})};
  p.allowed_moves = {MoveKind::place_member};
  SolutionSpec s;
  s.thresholds = Thresholds{Rational(1), Rational(0)};
  p.solutions = {s};
  return std::make_shared<const PuzzleDef>(p);
}

std::shared_ptr<const PuzzleDef> disjoint_puzzle() {
  PuzzleDef p = *single_placement_puzzle();
  p.id = "never";
  p.initial.unplaced = {attribute("m", {"other"})};
  p.allowed_moves = {MoveKind::place_member, MoveKind::remove_member};
  return std::make_shared<const PuzzleDef>(p);
}

void expect_same(const SolveResult& a, const SolveResult& b) {
  EXPECT_EQ(a.states_visited, b.states_visited);
  EXPECT_EQ(a.depth_reached, b.depth_reached);
  EXPECT_EQ(a.exhaustive, b.exhaustive);
  EXPECT_EQ(a.cap_exceeded, b.cap_exceeded);
  ASSERT_EQ(a.solutions.size(), b.solutions.size());
  for (std::size_t i = 0; i < a.solutions.size(); ++i) {
    EXPECT_EQ(a.solutions[i].key, b.solutions[i].key);
    EXPECT_EQ(a.solutions[i].design, b.solutions[i].design);
    EXPECT_EQ(a.solutions[i].path, b.solutions[i].path);
    EXPECT_EQ(a.solutions[i].report, b.solutions[i].report);
  }
}

}  // namespace

TEST(Session, StartsFromTheInitialFragment) {
  auto p = bundled_puzzle("garage");
  SessionStart st = start_session(p, "s1");
  EXPECT_EQ(st.session.design, p->initial);
  EXPECT_EQ(st.session.design.unplaced.size(), 6u);
  EXPECT_LT(st.event.progress, Rational(1));
  EXPECT_EQ(st.event.assignment, p->assignment);
  EXPECT_FALSE(st.event.sound_cue);
  EXPECT_FALSE(st.session.finished);
}

TEST(Session, PreSolvedPuzzleStillNeedsFinish) {
  PuzzleDef p = *single_placement_puzzle();
  p.initial.classes[0].members.push_back(p.initial.unplaced.back());
  p.initial.unplaced.clear();
  SessionStart st = start_session(std::make_shared<const PuzzleDef>(p));
  EXPECT_EQ(st.event.progress, Rational(1));
  EXPECT_FALSE(st.session.finished);
  EXPECT_TRUE(finish(st.session).session.finished);
}

TEST(Session, MalformedPuzzleIsRejected) {
  PuzzleDef p = *single_placement_puzzle();
  p.solutions.clear();
  try {
    start_session(std::make_shared<const PuzzleDef>(p));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidPuzzle);
  }
  EXPECT_THROW(start_session(nullptr), Error);
}

TEST(PlayMove, MatchingPlacementRaisesScore) {
  Session s = start_session(bundled_puzzle("garage")).session;
  s = play_move(s, PlaceMember{"tire-pressure", "car"}).session;
  MoveOutcome o = play_move(s, PlaceMember{"license-plate", "car"});
  EXPECT_TRUE(o.event.move_accepted);
  EXPECT_GT(o.event.score_delta, 0);
  EXPECT_EQ(o.event.sound_cue, SoundCue::place);
  ASSERT_TRUE(o.event.flow_delta);
}

TEST(PlayMove, IllegalMovesLeaveTheSessionUntouched) {
  Session s = start_session(bundled_puzzle("garage")).session;
  s = play_move(s, PlaceMember{"drive", "car"}).session;
  for (const Move& bad : std::vector<Move>{Connect{"car", "wheel"}, CreateClass{"X", {"x"}},
                                           PlaceMember{"drive", "car"}, PlaceMember{"ghost", "car"},
                                           RemoveMember{"start"}, DeleteClass{"car"}}) {
    MoveOutcome o = play_move(s, bad);
    EXPECT_FALSE(o.event.move_accepted) << describe(bad);
    EXPECT_EQ(o.event.sound_cue, SoundCue::error);
    EXPECT_FALSE(o.event.message.empty());
    EXPECT_EQ(o.session, s);
    EXPECT_EQ(o.event.score_delta, 0);
  }
}

TEST(PlayMove, CuesFollowTheMoveKind) {
  Session s = start_session(bundled_puzzle("thermostat")).session;
  EXPECT_EQ(play_move(s, Connect{"display", "controller"}).event.sound_cue, SoundCue::connect);
  MoveOutcome d = play_move(s, Disconnect{"display", "sensor"});
  EXPECT_EQ(d.event.sound_cue, SoundCue::remove);
  EXPECT_FALSE(d.event.flow_delta);
  s = play_move(s, PlaceMember{"temperature", "sensor"}).session;
  EXPECT_EQ(play_move(s, RemoveMember{"temperature"}).event.sound_cue, SoundCue::remove);
}

TEST(PlayMove, AcceptedStateKeepsPlaceCueAndFinishIsExplicit) {
  auto p = bundled_puzzle("garage");
  Session s = start_session(p).session;
  const std::vector<Move> path = {PlaceMember{"license-plate", "car"}, PlaceMember{"tire-pressure", "wheel"},
                                  PlaceMember{"horsepower", "engine"}, PlaceMember{"drive", "car"},
                                  PlaceMember{"inflate", "wheel"}};
  for (const auto& m : path) s = play_move(s, m).session;
  EXPECT_THROW(finish(s), NotAcceptedError);
  MoveOutcome last = play_move(s, PlaceMember{"start", "engine"});
  EXPECT_EQ(last.event.progress, Rational(1));
  EXPECT_EQ(last.event.sound_cue, SoundCue::place);
  EXPECT_FALSE(last.session.finished);
  FinishOutcome f = finish(last.session);
  EXPECT_TRUE(f.session.finished);
  EXPECT_TRUE(f.report.accepted);
  EXPECT_EQ(f.sound_cue, SoundCue::level_complete);
  FinishOutcome again = finish(f.session);
  EXPECT_EQ(again.report, f.report);
  EXPECT_EQ(again.session, f.session);
  EXPECT_FALSE(play_move(f.session, RemoveMember{"start"}).event.move_accepted);
}

TEST(Finish, NearMissListsTheFailedThreshold) {
  auto p = bundled_puzzle("garage");
  Session s = start_session(p).session;
  for (const auto& m : std::vector<Move>{PlaceMember{"license-plate", "wheel"}, PlaceMember{"tire-pressure", "wheel"},
                                         PlaceMember{"horsepower", "engine"}, PlaceMember{"drive", "car"},
                                         PlaceMember{"inflate", "wheel"}, PlaceMember{"start", "engine"}}) {
    s = play_move(s, m).session;
  }
  try {
    finish(s);
    FAIL();
  } catch (const NotAcceptedError& e) {
    EXPECT_EQ(e.code(), Errc::NotAccepted);
    EXPECT_LT(e.progress(), Rational(1));
    ASSERT_EQ(e.failures().size(), 1u);
    EXPECT_NE(e.failures()[0].find("cohesion"), std::string::npos);
  }
}

TEST(Replay, DeterministicAndTelescoping) {
  std::mt19937_64 rng(41);
  for (const auto& puzzle : bundled_pack().puzzles) {
    auto p = std::make_shared<const PuzzleDef>(puzzle);
    for (int trial = 0; trial < 20; ++trial) {
      Session s = start_session(p).session;
      int initial = s.last_report.composite;
      int sum = 0;
      for (int step = 0; step < 15; ++step) {
        auto moves = candidate_moves(*p, s.design);
        MoveOutcome o = play_move(s, moves[rng() % moves.size()]);
        sum += o.event.score_delta;
        s = o.session;
      }
      EXPECT_EQ(sum, s.last_report.composite - initial);
      Replay r1 = replay(p, s.move_log);
      Replay r2 = replay(p, s.move_log);
      EXPECT_EQ(r1.session.design, s.design);
      EXPECT_EQ(r1.composites, r2.composites);
      EXPECT_EQ(r1.events, r2.events);
    }
  }
}

TEST(Solver, CohesionPuzzleHasTwoScoredSolutions) {
  auto p = bundled_puzzle("garage");
  SolveResult r = enumerate_solutions(*p, p->solver_caps);
  EXPECT_TRUE(r.exhaustive);
  ASSERT_EQ(r.solutions.size(), 2u);
  EXPECT_NE(r.solutions[0].composite(), r.solutions[1].composite());
  for (const auto& sol : r.solutions) {
    Replay rp = replay(p, sol.path);
    EXPECT_EQ(rp.session.design, sol.design);
    EXPECT_TRUE(finish(rp.session).report.accepted);
  }
}

TEST(Solver, ForcedPlacementHasExactlyOneSolution) {
  auto p = single_placement_puzzle();
  SolveResult r = enumerate_solutions(*p, p->solver_caps);
  EXPECT_TRUE(r.exhaustive);
  ASSERT_EQ(r.solutions.size(), 1u);
  EXPECT_EQ(r.solutions[0].path.size(), 1u);
}

TEST(Solver, DisjointKeywordsAreUnsolvable) {
  auto p = disjoint_puzzle();
  SolveResult r = enumerate_solutions(*p, p->solver_caps);
  EXPECT_TRUE(r.exhaustive);
  EXPECT_TRUE(r.solutions.empty());
  EXPECT_EQ(r.states_visited, 2u);
}

TEST(Solver, CapsAreReported) {
  auto p = bundled_puzzle("garage");
  SolveResult small = enumerate_solutions(*p, SolverCaps{50, 16});
  EXPECT_TRUE(small.cap_exceeded);
  EXPECT_FALSE(small.exhaustive);
  EXPECT_LE(small.states_visited, 50u);
  SolveResult shallow = enumerate_solutions(*p, SolverCaps{100000, 2});
  EXPECT_FALSE(shallow.cap_exceeded);
  EXPECT_FALSE(shallow.exhaustive);
  EXPECT_EQ(shallow.depth_reached, 2u);
  expect_same(small, enumerate_solutions_serial(*p, SolverCaps{50, 16}));
  expect_same(shallow, enumerate_solutions_serial(*p, SolverCaps{100000, 2}));
}

TEST(Solver, SerialAndParallelAgreeOnEveryBundledPuzzle) {
  for (const auto& p : bundled_pack().puzzles) {
    SCOPED_TRACE(p.id);
    SolveResult par = enumerate_solutions(p, p.solver_caps);
    EXPECT_TRUE(par.exhaustive);
    EXPECT_FALSE(par.solutions.empty());
    expect_same(par, enumerate_solutions_serial(p, p.solver_caps));
  }
}

TEST(Solver, CreatedClassesAreInterchangeable) {
  const PuzzleDef& p = *bundled_pack().find("arcade");
  Design a = apply_structural_edit(p.initial, CreateClass{"Scoreboard", {"score"}});
  a = apply_structural_edit(a, CreateClass{"Renderer", {"render"}});
  Design b = apply_structural_edit(p.initial, CreateClass{"Renderer", {"render"}});
  b = apply_structural_edit(b, CreateClass{"Scoreboard", {"score"}});
  EXPECT_NE(a, b);
  EXPECT_EQ(canonical_key(p, a), canonical_key(p, b));
  Design c = apply_structural_edit(a, Connect{"game", "new-1"});
  Design d = apply_structural_edit(b, Connect{"game", "new-2"});
  EXPECT_EQ(canonical_key(p, c), canonical_key(p, d));
  EXPECT_NE(canonical_key(p, c), canonical_key(p, apply_structural_edit(b, Connect{"game", "new-1"})));
}

TEST(Solver, SolutionsAreReachableByLegalPlay) {
  for (const auto& puzzle : bundled_pack().puzzles) {
    auto p = std::make_shared<const PuzzleDef>(puzzle);
    SolveResult r = enumerate_solutions(*p, p->solver_caps);
    for (const auto& sol : r.solutions) {
      Replay rp = replay(p, sol.path);
      for (std::size_t i = 1; i < rp.events.size(); ++i) ASSERT_TRUE(rp.events[i].move_accepted) << p->id;
      ASSERT_EQ(canonical_key(*p, rp.session.design), sol.key);
      EXPECT_NO_THROW(finish(rp.session));
    }
  }
}

TEST(MoveGate, PaletteAndClassLimit) {
  const PuzzleDef& p = *bundled_pack().find("arcade");
  EXPECT_FALSE(move_gate(p, p.initial, CreateClass{"Scoreboard", {"score"}}));
  EXPECT_TRUE(move_gate(p, p.initial, CreateClass{"Sound", {"audio"}}));
  Design full = apply_structural_edit(p.initial, CreateClass{"Scoreboard", {"score"}});
  full = apply_structural_edit(full, CreateClass{"Scoreboard", {"score"}});
  EXPECT_TRUE(move_gate(p, full, CreateClass{"Renderer", {"render"}}));
  EXPECT_TRUE(move_gate(p, p.initial, DeleteClass{"game"}));
}
