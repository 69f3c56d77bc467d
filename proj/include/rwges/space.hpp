#pragma once

#include <optional>
#include <string>

#include "equivalence.hpp"

namespace rwges {

enum class DegreeMode { in_out, total };

inline std::string to_string(DegreeMode m) { return m == DegreeMode::in_out ? "in-out" : "total"; }

inline DegreeMode parse_degree_mode(const std::string& s) {
  if (s == "in-out") return DegreeMode::in_out;
  if (s == "total") return DegreeMode::total;
  throw Error(Errc::unsupported_kind, "degree_mode must be 'in-out' or 'total', got '" + s + "'");
}

// Degree-restricted DAG space: in/out caps, or a cap on |Pa + Ch| in total mode.
struct DegreeCaps {
  int d_in = 0;
  int d_out = 0;
  DegreeMode mode = DegreeMode::in_out;

  bool admits_node(const Dag& g, int j) const {
    if (mode == DegreeMode::total) return g.neighbors(j).size() <= d_in + d_out;
    return g.in_degree(j) <= d_in && g.out_degree(j) <= d_out;
  }
  bool admits(const Dag& g) const {
    for (int j = 0; j < g.p(); ++j)
      if (!admits_node(g, j)) return false;
    return true;
  }
};

// A member of the class inside the caps, if any. Tries the Dor-Tarsi
// extension first, then walks the class.
inline std::optional<Dag> member_in_space(const Pdag& h, const DegreeCaps& caps,
                                          std::size_t class_cap = kDefaultClassCap) {
  auto g = consistent_extension(h);
  if (!g) return std::nullopt;
  if (caps.admits(*g)) return g;
  if (caps.mode == DegreeMode::total) return std::nullopt;  // skeleton-only criterion
  std::vector<Dag> members;
  try {
    members = enumerate_equivalence_class(*g, class_cap);
  } catch (const Error&) {
    throw Error(Errc::class_cap_exceeded, "equivalence class too large for membership test");
  }
  for (const auto& m : members)
    if (caps.admits(m)) return m;
  return std::nullopt;
}

inline bool class_in_space(const Pdag& h, const DegreeCaps& caps) { return member_in_space(h, caps).has_value(); }

}  // namespace rwges
