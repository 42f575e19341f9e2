// SPDX-License-Identifier: Apache-2.0
//
// Control/data flow graph derived from the behavior each method declares,
// resolved by symbolic name against the current placement.
#pragma once

#include <set>
#include <string>
#include <vector>

#include "aosd/model.hpp"

namespace aosd {

struct MemberRef {
  std::string class_id;
  std::string member_id;

  std::string label() const { return class_id + "." + member_id; }
  bool operator==(const MemberRef&) const = default;
  auto operator<=>(const MemberRef&) const = default;
};

enum class FlowScope { intra_class, inter_class };
enum class DataAccess { read, write };

std::string_view to_string(FlowScope s);
std::string_view to_string(DataAccess a);

struct ControlEdge {
  MemberRef caller;
  MemberRef callee;
  FlowScope scope = FlowScope::intra_class;
  std::string note;

  bool operator==(const ControlEdge&) const = default;
  auto operator<=>(const ControlEdge&) const = default;
};

struct DataEdge {
  MemberRef method;
  MemberRef attribute;
  DataAccess access = DataAccess::read;
  FlowScope scope = FlowScope::intra_class;
  std::string note;

  bool operator==(const DataEdge&) const = default;
  auto operator<=>(const DataEdge&) const = default;
};

enum class ReferenceKind { call, read, write };
std::string_view to_string(ReferenceKind k);

struct UnresolvedRef {
  MemberRef method;
  ReferenceKind kind = ReferenceKind::call;
  std::string name;

  bool operator==(const UnresolvedRef&) const = default;
  auto operator<=>(const UnresolvedRef&) const = default;
};

// Edges are kept sorted; duplicated name matches yield one edge per match.
struct FlowGraph {
  std::vector<MemberRef> nodes;
  std::vector<ControlEdge> control_edges;
  std::vector<DataEdge> data_edges;
  std::vector<UnresolvedRef> unresolved;

  bool operator==(const FlowGraph&) const = default;
};

FlowGraph derive_flows(const Design& d);

// Authored note attached to the edges between two members.
struct FlowAnnotation {
  std::string from_member;
  std::string to_member;
  std::string note;
  bool operator==(const FlowAnnotation&) const = default;
};

void annotate(FlowGraph& g, const std::vector<FlowAnnotation>& notes);

struct FlowDelta {
  std::vector<ControlEdge> control_added;
  std::vector<ControlEdge> control_removed;
  std::vector<DataEdge> data_added;
  std::vector<DataEdge> data_removed;
  std::vector<UnresolvedRef> unresolved_added;
  std::vector<UnresolvedRef> unresolved_removed;

  bool empty() const;
  bool operator==(const FlowDelta&) const = default;
};

FlowDelta flow_delta(const FlowGraph& before, const FlowGraph& after);

// Total calls declared by methods placed in a class.
std::size_t declared_placed_calls(const Design& d);

// Graphviz text. Nodes are "classId.memberId", control edges solid, data
// edges dashed, notes drawn as red labels.
std::string to_dot(const FlowGraph& g, const Design& d);

}  // namespace aosd
