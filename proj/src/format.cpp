#include "ctgen/format.hpp"

#include <json.hpp>
#include <sstream>

namespace ctgen {

std::string tables_csv(const std::vector<Matrix>& tables) {
  std::ostringstream out;
  for (std::size_t t = 0; t < tables.size(); ++t) {
    if (t) out << '\n';
    for (const auto& row : tables[t]) {
      for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
      out << '\n';
    }
  }
  return out.str();
}

std::string tables_json(const std::vector<Matrix>& tables) {
  nlohmann::json j;
  j["format"] = 1;
  j["tables"] = tables;
  return j.dump() + "\n";
}

std::string multigraphs_csv(const std::vector<Matrix>& adjacency) {
  std::ostringstream out;
  for (std::size_t t = 0; t < adjacency.size(); ++t) {
    if (t) out << '\n';
    const auto& a = adjacency[t];
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
      for (std::size_t j = i + 1; j < a.size(); ++j)
        out << (j > i + 1 ? "," : "") << a[i][j];
      out << '\n';
    }
  }
  return out.str();
}

std::string multigraphs_json(const std::vector<Matrix>& adjacency) {
  nlohmann::json graphs = nlohmann::json::array();
  for (const auto& a : adjacency) {
    nlohmann::json edges = nlohmann::json::array();
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = i + 1; j < a.size(); ++j)
        if (a[i][j] > 0) edges.push_back({i, j, a[i][j]});
    graphs.push_back({{"n", a.size()}, {"edges", edges}});
  }
  nlohmann::json j;
  j["format"] = 1;
  j["graphs"] = graphs;
  return j.dump() + "\n";
}

}  // namespace ctgen
