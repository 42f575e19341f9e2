// SPDX-License-Identifier: Apache-2.0
#include "aosd/save_store.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <thread>

#include "aosd/json_codec.hpp"

namespace aosd {

std::string url_safe_encode(std::string_view name) {
  static const char* kHex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : name) {
    bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
                      c == '_' || c == '~' || c == '.';
    if (unreserved) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  if (out == "." || out == "..") {
    std::string escaped;
    for (std::size_t i = 0; i < out.size(); ++i) escaped += "%2E";
    out = escaped;
  }
  return out;
}

SaveStore::SaveStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(Errc::IoError, "cannot create data directory '" + dir_.string() + "': " + ec.message());
}

std::filesystem::path SaveStore::path_for(std::string_view player) const {
  return dir_ / (url_safe_encode(player) + ".json");
}

std::optional<SaveGame> SaveStore::load(std::string_view player) const {
  const auto path = path_for(player);
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(path)) return std::nullopt;
    throw Error(Errc::IoError, "cannot read save file '" + path.string() + "'", path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_save(parse_json_text(buf.str(), path.filename().string()));
}

void SaveStore::store(const SaveGame& save) const {
  validate_player_name(save.player_name);
  static std::atomic<unsigned> counter{0};
  const auto target = path_for(save.player_name);
  auto tmp = target;
  tmp += ".tmp." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + "." +
         std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write '" + tmp.string() + "'", tmp.string());
    out << dump_canonical(encode(save));
    out.flush();
    if (!out) throw Error(Errc::IoError, "short write to '" + tmp.string() + "'", tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(Errc::IoError, "cannot replace save file '" + target.string() + "'", target.string());
  }
}

std::mutex& SaveStore::player_mutex(const std::string& player) {
  std::lock_guard lock(registry_mutex_);
  auto& slot = player_mutexes_[player];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

}  // namespace aosd
