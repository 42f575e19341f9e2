// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "aosd/progression.hpp"

namespace aosd {

// Percent-encodes everything outside [A-Za-z0-9._~-]; '.' and '..' are
// escaped too so a name never maps to a directory entry.
std::string url_safe_encode(std::string_view name);

// One JSON document per player, replaced atomically (temp file + rename).
class SaveStore {
 public:
  explicit SaveStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path path_for(std::string_view player) const;

  // nullopt when no save exists. Throws IoError, ParseError, SchemaError.
  std::optional<SaveGame> load(std::string_view player) const;
  void store(const SaveGame& save) const;

  // Mutex serializing read-modify-write cycles for one player.
  std::mutex& player_mutex(const std::string& player);

 private:
  std::filesystem::path dir_;
  std::mutex registry_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> player_mutexes_;
};

}  // namespace aosd
