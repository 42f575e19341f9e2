// SPDX-License-Identifier: Apache-2.0
//
// JSON encoding shared by pack files, save files, the CLI and the HTTP API.
// Decoders throw Error(SchemaError) with the offending field path as subject.
// Rationals are written as "p/q" strings.
#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "aosd/engine.hpp"
#include "aosd/flows.hpp"
#include "aosd/metrics.hpp"
#include "aosd/model.hpp"
#include "aosd/progression.hpp"

namespace aosd {

using Json = nlohmann::json;

inline constexpr int kSaveSchemaVersion = 1;

// Parses text, mapping syntax errors to Error(ParseError) with line/column.
Json parse_json_text(std::string_view text, std::string_view source = "input");

Rational decode_rational(const Json& j, const std::string& path);

Json encode(const KeywordSet& k);
Json encode(const Member& m);
Json encode(const ClassBox& c);
Json encode(const Design& d);
Json encode(const Move& m);
Json encode(const PatternTemplate& p);
Json encode(const SolutionSpec& s);
Json encode(const PuzzleDef& p);
Json encode(const ScoreReport& r);
Json encode(const Evaluation& e);
Json encode(const FlowGraph& g);
Json encode(const FlowDelta& d);
Json encode(const FeedbackEvent& e);
Json encode(const SaveGame& s);

KeywordSet decode_keywords(const Json& j, const std::string& path);
Member decode_member(const Json& j, const std::string& path);
Design decode_design(const Json& j, const std::string& path = "design");
Move decode_move(const Json& j, const std::string& path = "move");
SolutionSpec decode_solution(const Json& j, const std::string& path);
PuzzleDef decode_puzzle(const Json& j, const std::string& path);
SaveGame decode_save(const Json& j, const std::string& path = "save");

// Canonical text: sorted keys, two-space indent, trailing newline.
std::string dump_canonical(const Json& j);

}  // namespace aosd
