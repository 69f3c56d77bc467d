#pragma once

#include <sstream>
#include <string>

#include "pdag.hpp"

namespace rwges {

// "i -> j" and "i -- j" lines, 1-based, '#' starts a comment.
inline Pdag parse_edge_list(const std::string& text, int p) {
  check_node_count(p);
  Pdag h(p);
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
    std::istringstream ls(line);
    std::string a, op, b, extra;
    if (!(ls >> a)) continue;
    auto fail = [&](const std::string& why) {
      throw Error(Errc::parse_error, "edge list line " + std::to_string(lineno) + ": " + why);
    };
    if (!(ls >> op >> b) || (ls >> extra)) fail("expected 'i -> j' or 'i -- j'");
    int i = 0, j = 0;
    try {
      std::size_t ia = 0, ib = 0;
      i = std::stoi(a, &ia);
      j = std::stoi(b, &ib);
      if (ia != a.size() || ib != b.size()) fail("node labels must be integers");
    } catch (const std::logic_error&) {
      fail("node labels must be integers");
    }
    if (i < 1 || j < 1 || i > p || j > p)
      throw Error(Errc::invalid_node, "edge list line " + std::to_string(lineno) + ": node out of range");
    if (i == j) throw Error(Errc::cycle_detected, "edge list line " + std::to_string(lineno) + ": self loop");
    if (h.adjacent(i - 1, j - 1)) fail("duplicate edge");
    if (op == "->")
      h.add_directed(i - 1, j - 1);
    else if (op == "--")
      h.add_undirected(i - 1, j - 1);
    else
      fail("unknown edge operator '" + op + "'");
  }
  return h;
}

inline Dag parse_dag_edge_list(const std::string& text, int p) {
  Pdag h = parse_edge_list(text, p);
  if (!h.undirected_edges().empty()) throw Error(Errc::parse_error, "undirected edge in a DAG edge list");
  return Dag(p, h.directed_edges());
}

inline std::string format_edge_list(const Pdag& h) {
  std::ostringstream out;
  out << "# p = " << h.p() << "\n";
  for (auto [i, j] : h.directed_edges()) out << i + 1 << " -> " << j + 1 << "\n";
  for (auto [i, j] : h.undirected_edges()) out << i + 1 << " -- " << j + 1 << "\n";
  return out.str();
}

inline std::string format_edge_list(const Dag& g) { return format_edge_list(Pdag::from_dag(g)); }

}  // namespace rwges
