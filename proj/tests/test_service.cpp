// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <thread>

#include "httplib.h"

#include "aosd/json_codec.hpp"
#include "aosd/service.hpp"
#include "support.hpp"

using namespace aosd;
using namespace aosd::testing;

namespace {

const std::vector<Move> kGarageSolution = {
    PlaceMember{"license-plate", "car"}, PlaceMember{"tire-pressure", "wheel"}, PlaceMember{"horsepower", "engine"},
    PlaceMember{"drive", "engine"},      PlaceMember{"inflate", "wheel"},       PlaceMember{"start", "engine"}};

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = std::filesystem::temp_directory_path() /
           ("aosd-service-" + std::string(info->name()) + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir_);
    pack_ = std::make_shared<const PuzzlePack>(bundled_pack());
    service_ = std::make_unique<GameService>(pack_, ServiceConfig{dir_, 4});
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  ApiResponse call(std::string_view method, const std::string& path, const Json& body = nullptr) {
    return service_->handle(method, path, body.is_null() ? "" : body.dump());
  }

  std::string start(const std::string& player, const std::string& puzzle, bool resume = true) {
    ApiResponse r = call("POST", "/players/" + player + "/sessions", Json{{"puzzle_id", puzzle}, {"resume", resume}});
    EXPECT_EQ(r.status, 201) << r.body.dump();
    return r.body.value("token", "");
  }

  static std::string state_of(const Json& tree, const std::string& id) {
    for (const auto& row : tree["puzzles"]) {
      if (row["id"] == id) return row["state"];
    }
    return "missing";
  }

  std::filesystem::path dir_;
  std::shared_ptr<const PuzzlePack> pack_;
  std::unique_ptr<GameService> service_;
};

}  // namespace

TEST_F(ServiceTest, FreshPlayerSeesOnlyRootsUnlocked) {
  ApiResponse r = call("POST", "/players", Json{{"name", "ada"}});
  ASSERT_EQ(r.status, 201);
  EXPECT_EQ(state_of(r.body, "garage"), "unlocked");
  EXPECT_EQ(state_of(r.body, "webshop"), "unlocked");
  EXPECT_EQ(state_of(r.body, "thermostat"), "locked");
  EXPECT_EQ(state_of(r.body, "arcade"), "locked");
  EXPECT_EQ(r.body["resume_point"], "garage");
  EXPECT_EQ(call("POST", "/players", Json{{"name", "ada"}}).status, 200);
  EXPECT_EQ(call("GET", "/players/ada/tree").body, r.body);
}

TEST_F(ServiceTest, HappyPathUnlocksChildren) {
  call("POST", "/players", Json{{"name", "ada"}});
  std::string token = start("ada", "garage");
  ASSERT_EQ(token.size(), 32u);
  ApiResponse last;
  for (const auto& m : kGarageSolution) {
    last = call("POST", "/sessions/" + token + "/moves", encode(m));
    ASSERT_EQ(last.status, 200);
    EXPECT_TRUE(last.body["move_accepted"].get<bool>());
  }
  EXPECT_EQ(last.body["progress"], "1");
  EXPECT_EQ(last.body["sound_cue"], "place");
  ApiResponse fin = call("POST", "/sessions/" + token + "/finish");
  ASSERT_EQ(fin.status, 200) << fin.body.dump();
  EXPECT_EQ(fin.body["sound_cue"], "level_complete");
  EXPECT_EQ(fin.body["newly_unlocked"], Json::array({"thermostat"}));
  EXPECT_EQ(state_of(fin.body["tree"], "garage"), "completed");
  EXPECT_EQ(state_of(fin.body["tree"], "school"), "locked");
  EXPECT_EQ(call("POST", "/sessions/" + token + "/finish").status, 200);
  auto save = service_->store().load("ada");
  ASSERT_TRUE(save);
  EXPECT_EQ(save->completed.at("garage").best_score, 77);
  EXPECT_FALSE(save->active_session);
}

TEST_F(ServiceTest, ErrorsMapToStatusCodes) {
  EXPECT_EQ(call("GET", "/players/nobody/tree").status, 404);
  EXPECT_EQ(call("GET", "/players/nobody/tree").body["code"], "UnknownPlayer");
  call("POST", "/players", Json{{"name", "ada"}});
  ApiResponse locked = call("POST", "/players/ada/sessions", Json{{"puzzle_id", "arcade"}});
  EXPECT_EQ(locked.status, 403);
  EXPECT_EQ(locked.body["code"], "LockedPuzzle");
  EXPECT_EQ(call("POST", "/players/ada/sessions", Json{{"puzzle_id", "nope"}}).status, 404);
  ApiResponse expired = call("POST", "/sessions/deadbeef/moves", encode(Move{RemoveMember{"x"}}));
  EXPECT_EQ(expired.status, 404);
  EXPECT_EQ(expired.body["code"], "UnknownSession");
  EXPECT_EQ(service_->handle("POST", "/players", "{not json").status, 400);
  EXPECT_EQ(call("POST", "/players", Json{{"name", std::string(40, 'x')}}).body["code"], "InvalidName");
  EXPECT_EQ(call("GET", "/nowhere").status, 404);

  std::string token = start("ada", "garage");
  ApiResponse early = call("POST", "/sessions/" + token + "/finish");
  EXPECT_EQ(early.status, 422);
  EXPECT_EQ(early.body["code"], "NotAccepted");
  EXPECT_TRUE(early.body["detail"].contains("progress"));
  EXPECT_FALSE(early.body["detail"]["failures"].empty());

  ApiResponse illegal = call("POST", "/sessions/" + token + "/moves", encode(Move{Connect{"car", "wheel"}}));
  EXPECT_EQ(illegal.status, 200);
  EXPECT_EQ(illegal.body["sound_cue"], "error");
  EXPECT_FALSE(illegal.body["move_accepted"].get<bool>());
}

TEST_F(ServiceTest, NamesArePercentDecoded) {
  ApiResponse r = call("POST", "/players", Json{{"name", "Ada Lovelace"}});
  ASSERT_EQ(r.status, 201);
  EXPECT_EQ(call("GET", "/players/Ada%20Lovelace/tree").status, 200);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "Ada%20Lovelace.json"));
}

TEST_F(ServiceTest, FlowsAndPackInfo) {
  call("POST", "/players", Json{{"name", "ada"}});
  std::string token = start("ada", "garage");
  call("POST", "/sessions/" + token + "/moves", encode(Move{PlaceMember{"drive", "car"}}));
  call("POST", "/sessions/" + token + "/moves", encode(Move{PlaceMember{"start", "engine"}}));
  ApiResponse flows = call("GET", "/sessions/" + token + "/flows");
  ASSERT_EQ(flows.status, 200);
  ASSERT_EQ(flows.body["control_edges"].size(), 1u);
  EXPECT_EQ(flows.body["control_edges"][0]["note"], "driving needs a running engine");
  ApiResponse info = call("GET", "/packs/current");
  EXPECT_EQ(info.body["puzzle_count"], 6);
  EXPECT_EQ(info.body["roots"], Json::array({"garage", "webshop"}));
}

TEST_F(ServiceTest, ActiveSessionSurvivesRestart) {
  call("POST", "/players", Json{{"name", "ada"}});
  std::string token = start("ada", "garage");
  call("POST", "/sessions/" + token + "/moves", encode(kGarageSolution[0]));
  call("POST", "/sessions/" + token + "/moves", encode(kGarageSolution[1]));
  Json tree_before = call("GET", "/players/ada/tree").body;

  service_ = std::make_unique<GameService>(pack_, ServiceConfig{dir_, 4});
  EXPECT_EQ(call("GET", "/players/ada/tree").body, tree_before);
  EXPECT_EQ(call("POST", "/sessions/" + token + "/moves", encode(kGarageSolution[2])).status, 404);
  ApiResponse resumed = call("POST", "/players/ada/sessions", Json{{"puzzle_id", "garage"}});
  ASSERT_EQ(resumed.status, 201);
  EXPECT_TRUE(resumed.body["resumed"].get<bool>());
  Design d = decode_design(resumed.body["design"]);
  EXPECT_EQ(d.location_of("license-plate"), "car");
  EXPECT_EQ(d.location_of("tire-pressure"), "wheel");
  EXPECT_EQ(d.unplaced.size(), 4u);

  ApiResponse fresh = call("POST", "/players/ada/sessions", Json{{"puzzle_id", "garage"}, {"resume", false}});
  EXPECT_FALSE(fresh.body["resumed"].get<bool>());
  EXPECT_EQ(decode_design(fresh.body["design"]).unplaced.size(), 6u);
}

TEST_F(ServiceTest, SaveMatchesDirectLibraryCalls) {
  call("POST", "/players", Json{{"name", "ada"}});
  std::string token = start("ada", "garage");
  for (const auto& m : kGarageSolution) call("POST", "/sessions/" + token + "/moves", encode(m));
  ASSERT_EQ(call("POST", "/sessions/" + token + "/finish").status, 200);

  auto p = std::make_shared<const PuzzleDef>(*pack_->find("garage"));
  Session s = aosd::start_session(p, "direct", 4).session;
  for (const auto& m : kGarageSolution) s = play_move(s, m).session;
  SaveGame direct = new_save("ada");
  direct.active_session = SessionSnapshot{"garage", s.move_log};
  direct = complete(pack_->tree, direct, "garage", aosd::finish(s).report);
  EXPECT_EQ(read_file(dir_ / "ada.json"), dump_canonical(encode(direct)));
}

TEST_F(ServiceTest, ConcurrentPlayersAndReaders) {
  constexpr int kPlayers = 4;
  for (int i = 0; i < kPlayers; ++i) call("POST", "/players", Json{{"name", "p" + std::to_string(i)}});
  std::vector<std::thread> threads;
  std::atomic<int> failures{0};
  for (int i = 0; i < kPlayers; ++i) {
    threads.emplace_back([&, i] {
      std::string name = "p" + std::to_string(i);
      std::string token = start(name, "garage");
      for (const auto& m : kGarageSolution) {
        if (call("POST", "/sessions/" + token + "/moves", encode(m)).status != 200) ++failures;
      }
      if (call("POST", "/sessions/" + token + "/finish").status != 200) ++failures;
    });
    threads.emplace_back([&, i] {
      for (int k = 0; k < 30; ++k) {
        ApiResponse r = call("GET", "/players/p" + std::to_string(i) + "/tree");
        if (r.status != 200 || !r.body.contains("puzzles")) ++failures;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(failures.load(), 0);
  for (int i = 0; i < kPlayers; ++i) {
    EXPECT_EQ(state_of(call("GET", "/players/p" + std::to_string(i) + "/tree").body, "garage"), "completed");
  }
}

TEST_F(ServiceTest, OverRealHttp) {
  HttpServer server(*service_);
  int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread loop([&] { server.listen(); });
  httplib::Client client("127.0.0.1", port);
  for (int i = 0; i < 100 && !client.Get("/packs/current"); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(20));

  auto created = client.Post("/players", Json{{"name", "Ada Lovelace"}}.dump(), "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  EXPECT_NE(created->get_header_value("Content-Type").find("application/json"), std::string::npos);
  auto tree = client.Get("/players/Ada%20Lovelace/tree");
  ASSERT_TRUE(tree);
  EXPECT_EQ(tree->status, 200);
  auto session = client.Post("/players/Ada%20Lovelace/sessions", Json{{"puzzle_id", "garage"}}.dump(), "application/json");
  ASSERT_TRUE(session);
  std::string token = Json::parse(session->body)["token"];
  for (const auto& m : kGarageSolution) {
    auto r = client.Post("/sessions/" + token + "/moves", encode(m).dump(), "application/json");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 200);
  }
  auto fin = client.Post("/sessions/" + token + "/finish", "", "application/json");
  ASSERT_TRUE(fin);
  EXPECT_EQ(fin->status, 200);
  EXPECT_EQ(Json::parse(fin->body)["newly_unlocked"], Json::array({"thermostat"}));
  auto missing = client.Get("/players/nobody/tree");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  server.stop();
  loop.join();
}
