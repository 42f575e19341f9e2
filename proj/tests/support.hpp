// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aosd/model.hpp"
#include "aosd/pack_io.hpp"

namespace aosd::testing {

inline std::filesystem::path source_dir() { return AOSD_SOURCE_DIR; }
inline std::filesystem::path bundled_pack_path() { return source_dir() / "packs" / "basics.json"; }
inline std::filesystem::path fixture(const std::string& name) { return source_dir() / "tests" / "fixtures" / name; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline const PuzzlePack& bundled_pack() {
  static const PuzzlePack pack = load_pack(bundled_pack_path());
  return pack;
}

inline std::shared_ptr<const PuzzleDef> bundled_puzzle(const std::string& id) {
  return std::make_shared<const PuzzleDef>(*bundled_pack().find(id));
}

inline Member attribute(std::string id, KeywordSet kw) {
  Member m;
  m.id = id;
  m.name = std::move(id);
  m.kind = MemberKind::attribute;
  m.keywords = std::move(kw);
  return m;
}

inline Member method(std::string id, KeywordSet kw, BehaviorSpec behavior = {}) {
  Member m;
  m.id = id;
  m.name = std::move(id);
  m.kind = MemberKind::method;
  m.keywords = std::move(kw);
  m.behavior = std::move(behavior);
  return m;
}

inline ClassBox box(std::string id, KeywordSet kw, std::vector<Member> members = {}) {
  ClassBox c;
  c.id = id;
  c.name = std::move(id);
  c.keywords = std::move(kw);
  c.members = std::move(members);
  return c;
}

inline Design chain(const std::vector<std::string>& ids) {
  Design d;
  for (const auto& id : ids) d.classes.push_back(box(id, {"k"}));
  for (std::size_t i = 0; i + 1 < ids.size(); ++i) d.associations.insert(Association::make(ids[i], ids[i + 1]));
  return d;
}

// Random keyword set of 1..max_size words over an alphabet of alphabet letters.
inline KeywordSet random_keywords(std::mt19937_64& rng, int alphabet, int max_size) {
  std::uniform_int_distribution<int> size_dist(1, max_size);
  std::uniform_int_distribution<int> letter(0, alphabet - 1);
  KeywordSet out;
  int want = std::min(size_dist(rng), alphabet);
  while (static_cast<int>(out.size()) < want) out.insert(std::string(1, static_cast<char>('a' + letter(rng))));
  return out;
}

}  // namespace aosd::testing
