// SPDX-License-Identifier: Apache-2.0
//
// JSON API over packs, progression and live sessions. GameService is
// transport-free (method, path, body in; status, JSON out) so it can be
// driven directly in tests; HttpServer binds it to a socket.
#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "aosd/engine.hpp"
#include "aosd/json_codec.hpp"
#include "aosd/pack_io.hpp"
#include "aosd/save_store.hpp"

namespace aosd {

inline constexpr int kDefaultPort = 8632;

struct ServiceConfig {
  std::filesystem::path data_dir = "data";
  int cbo_warn = kDefaultCboWarningThreshold;
};

struct ApiResponse {
  int status = 200;
  Json body;
};

// Status class for a library error: 4xx for caller mistakes, 5xx for I/O.
int http_status_for(Errc code);
Json error_body(const Error& e, Json detail = nullptr);

class GameService {
 public:
  GameService(std::shared_ptr<const PuzzlePack> pack, ServiceConfig config);

  // raw_path is the request target without the query string; segments are
  // percent-decoded here.
  ApiResponse handle(std::string_view method, std::string_view raw_path, std::string_view body);

  Json create_player(const std::string& name, bool* created = nullptr);
  Json tree(const std::string& name);
  Json start_session(const std::string& name, const std::string& puzzle_id, bool resume = true);
  Json play(const std::string& token, const Move& move);
  Json flows(const std::string& token);
  Json finish(const std::string& token);
  Json pack_info() const;

  const PuzzlePack& pack() const { return *pack_; }
  SaveStore& store() { return store_; }

 private:
  struct ApiSession {
    std::string token;
    std::string player;
    std::string puzzle_id;
    Session session;
    std::mutex mutex;
  };

  std::shared_ptr<ApiSession> session_for(const std::string& token);
  std::shared_ptr<const PuzzleDef> puzzle_ptr(const std::string& id) const;
  SaveGame load_existing(const std::string& name) const;
  Json tree_json(const SaveGame& save) const;
  std::string new_token();

  std::shared_ptr<const PuzzlePack> pack_;
  std::map<std::string, std::shared_ptr<const PuzzleDef>> puzzles_;
  ServiceConfig config_;
  SaveStore store_;

  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<ApiSession>> sessions_;
  std::map<std::pair<std::string, std::string>, std::string> active_tokens_;  // (player, puzzle) -> token
};

class HttpServer {
 public:
  HttpServer(GameService& service);
  ~HttpServer();

  // Binds to host:port (port 0 picks a free one) and returns the bound port,
  // or -1 on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace aosd
