#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ctgen/marginals.hpp"

namespace ctgen {

/// Bipartite: contingency tables (rows on the left, columns on the right).
/// Loopless: multigraphs without loops on a single vertex set.
enum class Topology { Bipartite, Loopless };

/// Degree data of the stripped instance, shared by both topologies.
///
/// For Loopless, `right` is empty and `T` duplicates `S` (the moments M_k
/// play the role of both S_k and T_k).
struct DegreeData {
  Topology topology = Topology::Bipartite;
  std::vector<std::int64_t> left;
  std::vector<std::int64_t> right;
  std::int64_t M = 0;
  int delta = 0;
  std::vector<BigInt> S;
  std::vector<BigInt> T;

  static DegreeData bipartite(const Marginals& marginals);
  static DegreeData loopless(std::span<const std::int64_t> degrees);

  bool is_bipartite() const { return topology == Topology::Bipartite; }
  std::size_t vertex_count() const { return left.size() + right.size(); }
};

}  // namespace ctgen
