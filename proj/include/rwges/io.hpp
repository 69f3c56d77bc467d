#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "score.hpp"

namespace rwges {

using json = nlohmann::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::parse_error, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::parse_error, "cannot write '" + path + "'");
  out << text;
}

// Header x1,...,xp then one row per observation.
inline std::string format_csv(const Dataset& d) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (int j = 0; j < d.p(); ++j) out << (j ? "," : "") << "x" << j + 1;
  out << "\n";
  for (int r = 0; r < d.n(); ++r) {
    for (int j = 0; j < d.p(); ++j) out << (j ? "," : "") << d.x(r, j);
    out << "\n";
  }
  return out.str();
}

inline Dataset parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::parse_error, "empty CSV");
  int p = 0;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      if (cell != "x" + std::to_string(p + 1)) throw Error(Errc::parse_error, "line 1: CSV header must be x1,...,xp");
      ++p;
    }
  }
  if (p == 0) throw Error(Errc::parse_error, "line 1: CSV header has no columns");
  std::vector<double> vals;
  int rows = 0, lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::istringstream ls(line);
    std::string cell;
    int c = 0;
    while (std::getline(ls, cell, ',')) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::logic_error&) {
        used = 0;
      }
      while (used < cell.size() && (cell[used] == ' ' || cell[used] == '\r')) ++used;
      if (used == 0 || used != cell.size() || !std::isfinite(v))
        throw Error(Errc::parse_error, "line " + std::to_string(lineno) + ": non-numeric CSV cell '" + cell + "'");
      vals.push_back(v);
      ++c;
    }
    if (c != p)
      throw Error(Errc::dimension_mismatch, "line " + std::to_string(lineno) + ": expected " + std::to_string(p) +
                                                " columns, found " + std::to_string(c));
    ++rows;
  }
  Dataset d{Eigen::MatrixXd(rows, p)};
  for (int r = 0; r < rows; ++r)
    for (int j = 0; j < p; ++j) d.x(r, j) = vals[static_cast<std::size_t>(r) * p + j];
  return d;
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& ex) {
    throw Error(Errc::parse_error, what + ": " + ex.what());
  }
}

inline json sem_to_json(const SemModel& m) {
  json j;
  j["p"] = m.p();
  j["edges"] = json::array();
  for (auto [a, b] : m.graph.edges()) j["edges"].push_back({{"from", a + 1}, {"to", b + 1}, {"weight", m.weights(a, b)}});
  j["omega"] = std::vector<double>(m.omega.data(), m.omega.data() + m.omega.size());
  return j;
}

inline SemModel sem_from_json(const json& j) {
  try {
    int p = j.at("p").get<int>();
    check_node_count(p);
    std::vector<Edge> e;
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(p, p);
    for (const auto& x : j.at("edges")) {
      int a = x.at("from").get<int>() - 1, b = x.at("to").get<int>() - 1;
      if (a < 0 || b < 0 || a >= p || b >= p) throw Error(Errc::invalid_node, "SEM edge endpoint out of range");
      e.emplace_back(a, b);
      w(a, b) = x.at("weight").get<double>();
    }
    auto om = j.at("omega").get<std::vector<double>>();
    if (static_cast<int>(om.size()) != p) throw Error(Errc::dimension_mismatch, "omega length differs from p");
    SemModel m{Dag(p, e), w, Eigen::Map<Eigen::VectorXd>(om.data(), p)};
    m.validate();
    return m;
  } catch (const json::exception& ex) {
    throw Error(Errc::parse_error, std::string("SEM JSON: ") + ex.what());
  }
}

inline json params_to_json(const ScoreParams& s) {
  return {{"alpha", s.alpha}, {"gamma", s.gamma}, {"kappa", s.kappa}, {"c1", s.c1}, {"c2", s.c2},
          {"d_in", s.d_in},   {"d_out", s.d_out}, {"degree_mode", to_string(s.degree_mode)}};
}

// Missing keys keep their defaults.
inline ScoreParams params_from_json(const json& j, ScoreParams s = {}) {
  try {
    if (j.contains("alpha")) s.alpha = j["alpha"].get<double>();
    if (j.contains("gamma")) s.gamma = j["gamma"].get<double>();
    if (j.contains("kappa")) s.kappa = j["kappa"].get<double>();
    if (j.contains("c1")) s.c1 = j["c1"].get<double>();
    if (j.contains("c2")) s.c2 = j["c2"].get<double>();
    if (j.contains("d_in")) s.d_in = j["d_in"].get<int>();
    if (j.contains("d_out")) s.d_out = j["d_out"].get<int>();
    if (j.contains("degree_mode")) s.degree_mode = parse_degree_mode(j["degree_mode"].get<std::string>());
  } catch (const json::exception& ex) {
    throw Error(Errc::parse_error, std::string("score parameters JSON: ") + ex.what());
  }
  return s;
}

inline json pdag_to_json(const Pdag& h) {
  json j;
  j["p"] = h.p();
  j["directed"] = json::array();
  j["undirected"] = json::array();
  for (auto [a, b] : h.directed_edges()) j["directed"].push_back({a + 1, b + 1});
  for (auto [a, b] : h.undirected_edges()) j["undirected"].push_back({a + 1, b + 1});
  return j;
}

inline json dag_to_json(const Dag& g) {
  json j;
  j["p"] = g.p();
  j["edges"] = json::array();
  for (auto [a, b] : g.edges()) j["edges"].push_back({a + 1, b + 1});
  return j;
}

}  // namespace rwges
