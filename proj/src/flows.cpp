// SPDX-License-Identifier: Apache-2.0
#include "aosd/flows.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <sstream>

namespace aosd {

std::string_view to_string(FlowScope s) { return s == FlowScope::intra_class ? "intra" : "inter"; }
std::string_view to_string(DataAccess a) { return a == DataAccess::read ? "read" : "write"; }

std::string_view to_string(ReferenceKind k) {
  switch (k) {
    case ReferenceKind::call: return "call";
    case ReferenceKind::read: return "read";
    case ReferenceKind::write: return "write";
  }
  return "call";
}

FlowGraph derive_flows(const Design& d) {
  FlowGraph g;
  // name -> placed members of the given kind
  std::multimap<std::string, MemberRef> methods;
  std::multimap<std::string, MemberRef> attributes;
  for (const auto& c : d.classes) {
    for (const auto& m : c.members) {
      MemberRef ref{c.id, m.id};
      g.nodes.push_back(ref);
      (m.kind == MemberKind::method ? methods : attributes).emplace(m.name, ref);
    }
  }

  auto scope_of = [](const MemberRef& x, const MemberRef& y) {
    return x.class_id == y.class_id ? FlowScope::intra_class : FlowScope::inter_class;
  };

  for (const auto& c : d.classes) {
    for (const auto& m : c.members) {
      if (m.kind != MemberKind::method) continue;
      MemberRef self{c.id, m.id};
      for (const auto& name : m.behavior.calls) {
        auto [lo, hi] = methods.equal_range(name);
        if (lo == hi) g.unresolved.push_back({self, ReferenceKind::call, name});
        for (auto it = lo; it != hi; ++it) g.control_edges.push_back({self, it->second, scope_of(self, it->second), {}});
      }
      auto add_data = [&](const std::vector<std::string>& names, DataAccess access, ReferenceKind kind) {
        for (const auto& name : names) {
          auto [lo, hi] = attributes.equal_range(name);
          if (lo == hi) g.unresolved.push_back({self, kind, name});
          for (auto it = lo; it != hi; ++it) g.data_edges.push_back({self, it->second, access, scope_of(self, it->second), {}});
        }
      };
      add_data(m.behavior.reads, DataAccess::read, ReferenceKind::read);
      add_data(m.behavior.writes, DataAccess::write, ReferenceKind::write);
    }
  }

  std::sort(g.nodes.begin(), g.nodes.end());
  std::sort(g.control_edges.begin(), g.control_edges.end());
  std::sort(g.data_edges.begin(), g.data_edges.end());
  std::sort(g.unresolved.begin(), g.unresolved.end());
  return g;
}

void annotate(FlowGraph& g, const std::vector<FlowAnnotation>& notes) {
  for (const auto& n : notes) {
    for (auto& e : g.control_edges) {
      if (e.caller.member_id == n.from_member && e.callee.member_id == n.to_member) e.note = n.note;
    }
    for (auto& e : g.data_edges) {
      if (e.method.member_id == n.from_member && e.attribute.member_id == n.to_member) e.note = n.note;
    }
  }
  std::sort(g.control_edges.begin(), g.control_edges.end());
  std::sort(g.data_edges.begin(), g.data_edges.end());
}

bool FlowDelta::empty() const {
  return control_added.empty() && control_removed.empty() && data_added.empty() && data_removed.empty() &&
         unresolved_added.empty() && unresolved_removed.empty();
}

namespace {

template <typename T>
std::vector<T> minus(const std::vector<T>& x, const std::vector<T>& y) {
  std::vector<T> out;
  std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

FlowDelta flow_delta(const FlowGraph& before, const FlowGraph& after) {
  FlowDelta d;
  d.control_added = minus(after.control_edges, before.control_edges);
  d.control_removed = minus(before.control_edges, after.control_edges);
  d.data_added = minus(after.data_edges, before.data_edges);
  d.data_removed = minus(before.data_edges, after.data_edges);
  d.unresolved_added = minus(after.unresolved, before.unresolved);
  d.unresolved_removed = minus(before.unresolved, after.unresolved);
  return d;
}

std::size_t declared_placed_calls(const Design& d) {
  std::size_t n = 0;
  for (const auto& c : d.classes) {
    for (const auto& m : c.members) {
      if (m.kind == MemberKind::method) n += m.behavior.calls.size();
    }
  }
  return n;
}

std::string to_dot(const FlowGraph& g, const Design& d) {
  std::ostringstream os;
  os << "digraph flows {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=box, fontname=\"Helvetica\"];\n";
  for (const auto& c : d.classes) {
    os << "  subgraph " << dot_quote("cluster_" + c.id) << " {\n";
    os << "    label=" << dot_quote(c.name) << ";\n";
    for (const auto& m : c.members) {
      os << "    " << dot_quote(c.id + "." + m.id) << " [label=" << dot_quote(m.name)
         << (m.kind == MemberKind::method ? ", shape=ellipse" : "") << "];\n";
    }
    os << "  }\n";
  }
  auto note_attr = [](const std::string& note) {
    return note.empty() ? std::string() : ", label=" + dot_quote(note) + ", fontcolor=red";
  };
  for (const auto& e : g.control_edges) {
    os << "  " << dot_quote(e.caller.label()) << " -> " << dot_quote(e.callee.label()) << " [style=solid"
       << note_attr(e.note) << "];\n";
  }
  for (const auto& e : g.data_edges) {
    os << "  " << dot_quote(e.method.label()) << " -> " << dot_quote(e.attribute.label()) << " [style=dashed"
       << (e.access == DataAccess::write ? ", arrowhead=diamond" : "") << note_attr(e.note) << "];\n";
  }
  for (const auto& u : g.unresolved) {
    os << "  // unresolved " << to_string(u.kind) << " " << u.method.label() << " -> " << u.name << "\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace aosd
