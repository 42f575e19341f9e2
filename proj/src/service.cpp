// SPDX-License-Identifier: Apache-2.0
#include "aosd/service.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace aosd {

int http_status_for(Errc code) {
  switch (code) {
    case Errc::UnknownPlayer:
    case Errc::UnknownSession:
    case Errc::UnknownId: return 404;
    case Errc::LockedPuzzle: return 403;
    case Errc::NotAccepted: return 422;
    case Errc::IoError: return 500;
    default: return 400;
  }
}

Json error_body(const Error& e, Json detail) {
  return Json{{"code", to_string(e.code())}, {"message", e.what()}, {"detail", std::move(detail)}};
}

GameService::GameService(std::shared_ptr<const PuzzlePack> pack, ServiceConfig config)
    : pack_(std::move(pack)), config_(std::move(config)), store_(config_.data_dir) {
  for (const auto& p : pack_->puzzles) puzzles_[p.id] = std::make_shared<const PuzzleDef>(p);
}

std::shared_ptr<const PuzzleDef> GameService::puzzle_ptr(const std::string& id) const {
  auto it = puzzles_.find(id);
  if (it == puzzles_.end()) throw Error(Errc::UnknownId, "unknown puzzle '" + id + "'", id);
  return it->second;
}

SaveGame GameService::load_existing(const std::string& name) const {
  validate_player_name(name);
  auto save = store_.load(name);
  if (!save) throw Error(Errc::UnknownPlayer, "no player named '" + name + "'", name);
  return *save;
}

std::string GameService::new_token() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  static const char* kHex = "0123456789abcdef";
  std::string token;
  for (int i = 0; i < 2; ++i) {
    std::uint64_t v = rng();
    for (int k = 0; k < 16; ++k) {
      token.push_back(kHex[v & 0xF]);
      v >>= 4;
    }
  }
  return token;
}

Json GameService::tree_json(const SaveGame& save) const {
  const auto open = unlocked(pack_->tree, save);
  Json puzzles = Json::array();
  for (const auto& p : pack_->puzzles) {
    std::string state = save.completed.count(p.id) ? "completed" : open.count(p.id) ? "unlocked" : "locked";
    Json row{{"id", p.id},
             {"title", p.title},
             {"principles", p.principles},
             {"requires", pack_->tree.requires_of(p.id)},
             {"state", state}};
    if (auto it = save.completed.find(p.id); it != save.completed.end()) row["best_score"] = it->second.best_score;
    puzzles.push_back(std::move(row));
  }
  auto resume = resume_point(pack_->tree, save);
  return Json{{"player", save.player_name},
              {"puzzles", puzzles},
              {"resume_point", resume ? Json(*resume) : Json(nullptr)}};
}

Json GameService::create_player(const std::string& name, bool* created) {
  validate_player_name(name);
  std::lock_guard lock(store_.player_mutex(name));
  auto save = store_.load(name);
  if (created) *created = !save;
  if (!save) {
    save = new_save(name);
    store_.store(*save);
  }
  return tree_json(*save);
}

Json GameService::tree(const std::string& name) {
  validate_player_name(name);
  std::lock_guard lock(store_.player_mutex(name));
  return tree_json(load_existing(name));
}

Json GameService::start_session(const std::string& name, const std::string& puzzle_id, bool resume) {
  validate_player_name(name);
  auto puzzle = puzzle_ptr(puzzle_id);
  std::lock_guard lock(store_.player_mutex(name));
  SaveGame save = load_existing(name);
  if (!is_unlocked(pack_->tree, save, puzzle_id)) {
    throw Error(Errc::LockedPuzzle, "puzzle '" + puzzle_id + "' is locked; finish its prerequisites first", puzzle_id);
  }

  auto api = std::make_shared<ApiSession>();
  api->token = new_token();
  api->player = name;
  api->puzzle_id = puzzle_id;
  SessionStart start = aosd::start_session(puzzle, api->token, config_.cbo_warn);
  FeedbackEvent event = std::move(start.event);
  api->session = std::move(start.session);
  bool resumed = false;
  if (resume && save.active_session && save.active_session->puzzle_id == puzzle_id &&
      !save.active_session->moves.empty()) {
    Replay r = replay(puzzle, save.active_session->moves, api->token, config_.cbo_warn);
    api->session = std::move(r.session);
    // Opening event reflects the restored board.
    event.report = api->session.last_report;
    event.progress = api->session.last_progress;
    event.warnings = api->session.last_report.warnings;
    resumed = true;
  }

  save.active_session = SessionSnapshot{puzzle_id, api->session.move_log};
  store_.store(save);

  {
    std::lock_guard sl(sessions_mutex_);
    auto key = std::make_pair(name, puzzle_id);
    if (auto old = active_tokens_.find(key); old != active_tokens_.end()) sessions_.erase(old->second);
    active_tokens_[key] = api->token;
    sessions_[api->token] = api;
  }

  return Json{{"token", api->token},
              {"puzzle", puzzle_id},
              {"title", puzzle->title},
              {"assignment", puzzle->assignment},
              {"design", encode(api->session.design)},
              {"allowed_moves", encode(*puzzle)["allowed_moves"]},
              {"class_creation_allowed", puzzle->class_creation_allowed},
              {"resumed", resumed},
              {"feedback", encode(event)}};
}

std::shared_ptr<GameService::ApiSession> GameService::session_for(const std::string& token) {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(token);
  if (it == sessions_.end()) throw Error(Errc::UnknownSession, "unknown or expired session", token);
  return it->second;
}

Json GameService::play(const std::string& token, const Move& move) {
  auto api = session_for(token);
  std::lock_guard lock(api->mutex);
  MoveOutcome out = play_move(api->session, move);
  if (out.event.move_accepted) {
    std::lock_guard player_lock(store_.player_mutex(api->player));
    SaveGame save = load_existing(api->player);
    save.active_session = SessionSnapshot{api->puzzle_id, out.session.move_log};
    store_.store(save);
  }
  api->session = std::move(out.session);
  Json body = encode(out.event);
  body["design"] = encode(api->session.design);
  return body;
}

Json GameService::flows(const std::string& token) {
  auto api = session_for(token);
  std::lock_guard lock(api->mutex);
  FlowGraph g = derive_flows(api->session.design);
  annotate(g, pack_->annotations_for(api->puzzle_id));
  return encode(g);
}

Json GameService::finish(const std::string& token) {
  auto api = session_for(token);
  std::lock_guard lock(api->mutex);
  FinishOutcome out = aosd::finish(api->session);  // throws NotAcceptedError

  std::lock_guard player_lock(store_.player_mutex(api->player));
  SaveGame save = load_existing(api->player);
  const auto before = unlocked(pack_->tree, save);
  if (!api->session.finished) {
    save = complete(pack_->tree, save, api->puzzle_id, out.report);
    store_.store(save);
  }
  api->session = std::move(out.session);
  const auto after = unlocked(pack_->tree, save);
  std::vector<std::string> newly;
  std::set_difference(after.begin(), after.end(), before.begin(), before.end(), std::back_inserter(newly));
  return Json{{"accepted", true},
              {"report", encode(out.report)},
              {"sound_cue", to_string(out.sound_cue)},
              {"newly_unlocked", newly},
              {"tree", tree_json(save)}};
}

Json GameService::pack_info() const {
  Json puzzles = Json::array();
  for (const auto& p : pack_->puzzles) {
    puzzles.push_back(Json{{"id", p.id}, {"title", p.title}, {"principles", p.principles},
                           {"requires", pack_->tree.requires_of(p.id)}});
  }
  return Json{{"id", pack_->id},
              {"title", pack_->title},
              {"version", pack_->version},
              {"metadata", pack_->metadata},
              {"puzzle_count", pack_->puzzles.size()},
              {"roots", pack_->tree.roots()},
              {"puzzles", puzzles}};
}

// ---------------------------------------------------------------- routing

namespace {

std::string percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      auto hex = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
      };
      int hi = hex(s[i + 1]);
      int lo = hex(s[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        continue;
      }
    }
    out.push_back(s[i]);
  }
  return out;
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    std::size_t slash = path.find('/', start);
    std::size_t end = slash == std::string_view::npos ? path.size() : slash;
    if (end > start) parts.push_back(percent_decode(path.substr(start, end - start)));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return parts;
}

Json parse_body(std::string_view body) {
  if (body.empty()) return Json::object();
  Json j = parse_json_text(body, "request");
  if (!j.is_object()) throw Error(Errc::SchemaError, "request: expected a JSON object", "request");
  return j;
}

std::string body_string(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw Error(Errc::SchemaError, std::string("request.") + key + ": expected a string", std::string("request.") + key);
  }
  return it->get<std::string>();
}

}  // namespace

ApiResponse GameService::handle(std::string_view method, std::string_view raw_path, std::string_view body) {
  const auto parts = split_path(raw_path.substr(0, raw_path.find('?')));
  auto route = [&](std::string_view m, std::initializer_list<std::string_view> shape) {
    if (method != m || parts.size() != shape.size()) return false;
    std::size_t i = 0;
    for (auto s : shape) {
      if (s != "*" && parts[i] != s) return false;
      ++i;
    }
    return true;
  };

  try {
    if (route("POST", {"players"})) {
      bool created = false;
      Json out = create_player(body_string(parse_body(body), "name"), &created);
      return {created ? 201 : 200, std::move(out)};
    }
    if (route("GET", {"players", "*", "tree"})) return {200, tree(parts[1])};
    if (route("POST", {"players", "*", "sessions"})) {
      Json req = parse_body(body);
      bool resume = true;
      if (auto it = req.find("resume"); it != req.end() && it->is_boolean()) resume = it->get<bool>();
      return {201, start_session(parts[1], body_string(req, "puzzle_id"), resume)};
    }
    if (route("POST", {"sessions", "*", "moves"})) {
      Json req = parse_body(body);
      return {200, play(parts[1], decode_move(req, "request"))};
    }
    if (route("GET", {"sessions", "*", "flows"})) return {200, flows(parts[1])};
    if (route("POST", {"sessions", "*", "finish"})) return {200, finish(parts[1])};
    if (route("GET", {"packs", "current"})) return {200, pack_info()};
    return {404, Json{{"code", "NotFound"}, {"message", "no route for " + std::string(method) + " " + std::string(raw_path)},
                      {"detail", nullptr}}};
  } catch (const NotAcceptedError& e) {
    return {http_status_for(e.code()),
            error_body(e, Json{{"progress", to_string(e.progress())},
                               {"progress_percent", round_percent_half_up(e.progress())},
                               {"failures", e.failures()}})};
  } catch (const Error& e) {
    return {http_status_for(e.code()), error_body(e, e.subject().empty() ? Json(nullptr) : Json(e.subject()))};
  } catch (const std::exception& e) {
    return {500, Json{{"code", "Internal"}, {"message", e.what()}, {"detail", nullptr}}};
  }
}

}  // namespace aosd
