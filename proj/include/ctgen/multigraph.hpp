#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "ctgen/instance.hpp"
#include "ctgen/params.hpp"

namespace ctgen {

using Vertex = std::int32_t;
using Matrix = std::vector<std::vector<std::int64_t>>;

/// Vertex tuple (u1, v1, u2, v2, ..., u_{s+1}, v_{s+1}) of an s-switching.
struct SwitchingAnchor {
  int s = 0;
  std::vector<Vertex> vertices;

  Vertex u(int i) const { return vertices[2 * (i - 1)]; }
  Vertex v(int i) const { return vertices[2 * (i - 1) + 1]; }
};

/// Mutable multigraph over a fixed degree sequence.
///
/// Bipartite: rows are vertices 0..m-1, columns m..m+n-1.
/// Loopless: vertices 0..n-1, no loops.
class MultiGraph {
 public:
  MultiGraph() = default;
  /// Empty graph: degrees are fixed, point lists start empty and are
  /// filled by add_edge.
  explicit MultiGraph(const DegreeData& data);

  /// Bipartite graph from a stripped m x n matrix.
  static MultiGraph from_matrix(const DegreeData& data, const Matrix& cells);
  /// Loopless graph from a symmetric n x n adjacency matrix (zero diagonal).
  static MultiGraph from_adjacency(const DegreeData& data,
                                   const Matrix& adjacency);

  Topology topology() const { return topology_; }
  bool is_bipartite() const { return topology_ == Topology::Bipartite; }
  int vertex_count() const { return static_cast<int>(degree_.size()); }
  int left_count() const { return left_; }
  int right_count() const { return vertex_count() - left_; }
  /// True for row vertices (bipartite) or any vertex (loopless).
  bool in_left(Vertex v) const { return !is_bipartite() || v < left_; }
  std::int64_t degree(Vertex v) const { return degree_[v]; }
  std::int64_t total() const { return total_; }

  /// Multiplicity of the pair {a, b}; 0 for same-side pairs and loops.
  std::int32_t multiplicity(Vertex a, Vertex b) const;

  /// Adds one copy of edge {a, b}.
  void add_edge(Vertex a, Vertex b);

  /// Neighbour ids, one entry per point (multiplicity-many per neighbour).
  std::span<const Vertex> points(Vertex v) const { return points_[v]; }

  std::int64_t simple_edge_count() const { return simple_; }
  std::int64_t registry_size(int s) const;
  const StratumIndex& stratum() const { return stratum_; }
  int delta() const { return delta_; }

  /// Applies an s-switching whose anchor passed validation: the 2s single
  /// edges u1 ui, v1 vi are replaced by ui vi and an s-fold edge u1 v1.
  void apply_switching(const SwitchingAnchor& anchor);

  /// Recomputes every derived structure from the multiplicity table and
  /// compares with the incremental state.
  bool audit() const;

  /// Stripped m x n matrix (bipartite) or n x n adjacency (loopless).
  Matrix to_matrix() const;

  /// Multiplicities of edges as (a, b, k) with a < b.
  struct Edge {
    Vertex a, b;
    std::int32_t k;
  };
  std::vector<Edge> edges() const;

 private:
  struct Cell {
    std::int32_t k = 0;
    std::int32_t reg_pos = -1;  // index in registry_[k] when k >= 2
  };
  using PairKey = std::uint64_t;

  PairKey key(Vertex a, Vertex b) const;
  std::int32_t get(PairKey key) const;
  void set_cell(PairKey key, std::int32_t value);
  void replace_point(Vertex v, Vertex from, Vertex to);

  Topology topology_ = Topology::Bipartite;
  int left_ = 0;
  int delta_ = 0;
  std::int64_t total_ = 0;
  std::vector<std::int64_t> degree_;
  std::unordered_map<PairKey, Cell> cells_;  // nonzero multiplicities only
  std::vector<std::vector<Vertex>> points_;
  std::vector<std::vector<PairKey>> registry_;  // by multiplicity
  std::int64_t simple_ = 0;
  StratumIndex stratum_;
};

/// Re-inserts zero rows/columns so the matrix matches the raw marginals.
Matrix inflate(const Matrix& stripped, std::size_t raw_rows,
               std::span<const std::size_t> row_index, std::size_t raw_cols,
               std::span<const std::size_t> col_index);

}  // namespace ctgen
