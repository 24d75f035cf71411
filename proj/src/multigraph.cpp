#include "ctgen/multigraph.hpp"

#include <algorithm>

#include "ctgen/error.hpp"

namespace ctgen {

MultiGraph::MultiGraph(const DegreeData& data)
    : topology_(data.topology),
      left_(static_cast<int>(data.left.size())),
      delta_(data.delta),
      total_(data.M),
      stratum_(data.delta) {
  degree_ = data.left;
  degree_.insert(degree_.end(), data.right.begin(), data.right.end());
  const std::size_t V = degree_.size();
  cells_.reserve(static_cast<std::size_t>(is_bipartite() ? total_ : total_ / 2));
  points_.resize(V);
  for (std::size_t v = 0; v < V; ++v)
    points_[v].reserve(static_cast<std::size_t>(degree_[v]));
  registry_.resize(static_cast<std::size_t>(std::max(delta_, 2)) + 1);
}

MultiGraph MultiGraph::from_matrix(const DegreeData& data,
                                   const Matrix& cells) {
  if (!data.is_bipartite())
    fail(ErrorCode::InvalidArgument, "from_matrix needs bipartite data");
  MultiGraph g(data);
  if (cells.size() != data.left.size())
    fail(ErrorCode::InvalidArgument, "matrix row count mismatch");
  for (std::size_t x = 0; x < cells.size(); ++x) {
    if (cells[x].size() != data.right.size())
      fail(ErrorCode::InvalidArgument, "matrix column count mismatch");
    for (std::size_t y = 0; y < cells[x].size(); ++y)
      for (std::int64_t k = 0; k < cells[x][y]; ++k)
        g.add_edge(static_cast<Vertex>(x),
                   static_cast<Vertex>(g.left_ + static_cast<int>(y)));
  }
  if (!g.audit()) fail(ErrorCode::InvalidArgument, "matrix does not match marginals");
  return g;
}

MultiGraph MultiGraph::from_adjacency(const DegreeData& data,
                                      const Matrix& adjacency) {
  if (data.is_bipartite())
    fail(ErrorCode::InvalidArgument, "from_adjacency needs loopless data");
  MultiGraph g(data);
  const std::size_t n = data.left.size();
  if (adjacency.size() != n)
    fail(ErrorCode::InvalidArgument, "adjacency size mismatch");
  for (std::size_t a = 0; a < n; ++a) {
    if (adjacency[a].size() != n || adjacency[a][a] != 0)
      fail(ErrorCode::InvalidArgument, "adjacency must be square, loop-free");
    for (std::size_t b = a + 1; b < n; ++b) {
      if (adjacency[a][b] != adjacency[b][a])
        fail(ErrorCode::InvalidArgument, "adjacency must be symmetric");
      for (std::int64_t k = 0; k < adjacency[a][b]; ++k)
        g.add_edge(static_cast<Vertex>(a), static_cast<Vertex>(b));
    }
  }
  if (!g.audit()) fail(ErrorCode::InvalidArgument, "adjacency does not match degrees");
  return g;
}

MultiGraph::PairKey MultiGraph::key(Vertex a, Vertex b) const {
  if (a > b) std::swap(a, b);
  return static_cast<PairKey>(static_cast<std::uint32_t>(a)) << 32 |
         static_cast<std::uint32_t>(b);
}

std::int32_t MultiGraph::get(PairKey k) const {
  const auto it = cells_.find(k);
  return it == cells_.end() ? 0 : it->second.k;
}

std::int32_t MultiGraph::multiplicity(Vertex a, Vertex b) const {
  if (a == b) return 0;
  if (is_bipartite() && (a < left_) == (b < left_)) return 0;
  return get(key(a, b));
}

std::int64_t MultiGraph::registry_size(int s) const {
  if (s < 2 || static_cast<std::size_t>(s) >= registry_.size()) return 0;
  return static_cast<std::int64_t>(registry_[s].size());
}

void MultiGraph::set_cell(PairKey k, std::int32_t value) {
  auto it = cells_.find(k);
  const std::int32_t old = it == cells_.end() ? 0 : it->second.k;
  if (old == value) return;
  if (old == 1) --simple_;
  if (old >= 2) {
    auto& reg = registry_[old];
    const std::int32_t pos = it->second.reg_pos;
    reg[pos] = reg.back();
    cells_.find(reg[pos])->second.reg_pos = pos;
    reg.pop_back();
    stratum_.decrement(old);
  }
  if (value == 0) {
    cells_.erase(it);
    return;
  }
  if (it == cells_.end()) it = cells_.emplace(k, Cell{}).first;
  Cell& c = it->second;
  c.k = value;
  c.reg_pos = -1;
  if (value == 1) ++simple_;
  if (value >= 2) {
    if (value > delta_)
      fail(ErrorCode::InvariantViolation, "multiplicity exceeds Delta");
    auto& reg = registry_[value];
    c.reg_pos = static_cast<std::int32_t>(reg.size());
    reg.push_back(k);
    stratum_.increment(value);
  }
}

void MultiGraph::add_edge(Vertex a, Vertex b) {
  if (a == b) fail(ErrorCode::InvalidArgument, "loops are not allowed");
  if (is_bipartite() && (a < left_) == (b < left_))
    fail(ErrorCode::InvalidArgument, "edge inside one side");
  const PairKey k = key(a, b);
  set_cell(k, get(k) + 1);
  points_[a].push_back(b);
  points_[b].push_back(a);
}

void MultiGraph::replace_point(Vertex v, Vertex from, Vertex to) {
  auto& pts = points_[v];
  auto it = std::find(pts.begin(), pts.end(), from);
  if (it == pts.end())
    fail(ErrorCode::InvariantViolation, "point list out of sync");
  *it = to;
}

void MultiGraph::apply_switching(const SwitchingAnchor& anchor) {
  const int s = anchor.s;
  const Vertex u1 = anchor.u(1), v1 = anchor.v(1);
  for (int i = 2; i <= s + 1; ++i) {
    const Vertex ui = anchor.u(i), vi = anchor.v(i);
    set_cell(key(u1, ui), 0);
    set_cell(key(v1, vi), 0);
    set_cell(key(ui, vi), 1);
    replace_point(u1, ui, v1);
    replace_point(v1, vi, u1);
    replace_point(ui, u1, vi);
    replace_point(vi, v1, ui);
  }
  set_cell(key(u1, v1), s);
}

bool MultiGraph::audit() const {
  const int V = vertex_count();
  std::vector<std::int64_t> deg(V, 0);
  std::int64_t simple = 0;
  std::vector<std::int64_t> counts(registry_.size(), 0);
  for (const auto& [k, c] : cells_) {
    const auto a = static_cast<Vertex>(k >> 32), b = static_cast<Vertex>(k & 0xffffffffu);
    if (a >= b || b >= V) return false;
    if (is_bipartite() && (a < left_) == (b < left_)) return false;
    if (c.k <= 0 || c.k > std::max(delta_, 1)) return false;
    deg[a] += c.k;
    deg[b] += c.k;
    if (c.k == 1) ++simple;
    if (c.k >= 2) {
      ++counts[c.k];
      if (c.reg_pos < 0 || registry_[c.k][c.reg_pos] != k) return false;
    }
  }
  std::size_t distinct = 0;
  for (Vertex a = 0; a < V; ++a) {
    if (static_cast<std::int64_t>(points_[a].size()) != degree_[a]) return false;
    std::vector<Vertex> sorted(points_[a].begin(), points_[a].end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      if (multiplicity(a, sorted[i]) != static_cast<std::int32_t>(j - i))
        return false;
      ++distinct;
      i = j;
    }
  }
  if (distinct != 2 * cells_.size()) return false;
  if (deg != degree_ || simple != simple_) return false;
  std::int64_t multi = 0;
  for (std::size_t k = 2; k < registry_.size(); ++k) {
    if (counts[k] != static_cast<std::int64_t>(registry_[k].size())) return false;
    if (stratum_[static_cast<int>(k)] != counts[k]) return false;
    multi += static_cast<std::int64_t>(k) * counts[k];
  }
  const std::int64_t edges = is_bipartite() ? total_ : total_ / 2;
  return stratum_.total() == multi && simple + multi == edges;
}

Matrix MultiGraph::to_matrix() const {
  const int V = vertex_count();
  Matrix out = is_bipartite()
                   ? Matrix(left_, std::vector<std::int64_t>(right_count(), 0))
                   : Matrix(V, std::vector<std::int64_t>(V, 0));
  for (const auto& [k, c] : cells_) {
    const auto a = static_cast<Vertex>(k >> 32), b = static_cast<Vertex>(k & 0xffffffffu);
    if (is_bipartite()) {
      out[a][b - left_] = c.k;
    } else {
      out[a][b] = c.k;
      out[b][a] = c.k;
    }
  }
  return out;
}

std::vector<MultiGraph::Edge> MultiGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(cells_.size());
  for (const auto& [k, c] : cells_)
    out.push_back({static_cast<Vertex>(k >> 32), static_cast<Vertex>(k & 0xffffffffu), c.k});
  std::sort(out.begin(), out.end(),
            [](const Edge& x, const Edge& y) { return x.a != y.a ? x.a < y.a : x.b < y.b; });
  return out;
}

Matrix inflate(const Matrix& stripped, std::size_t raw_rows,
               std::span<const std::size_t> row_index, std::size_t raw_cols,
               std::span<const std::size_t> col_index) {
  Matrix out(raw_rows, std::vector<std::int64_t>(raw_cols, 0));
  for (std::size_t i = 0; i < stripped.size(); ++i)
    for (std::size_t j = 0; j < stripped[i].size(); ++j)
      out[row_index[i]][col_index[j]] = stripped[i][j];
  return out;
}

}  // namespace ctgen
