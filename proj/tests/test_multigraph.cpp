#include <doctest.h>

#include "ctgen/gen.hpp"
#include "ctgen/multigraph.hpp"
#include "ctgen/oracle.hpp"
#include "support.hpp"

using namespace ctgen;
using testing::Vec;

namespace {

DegreeData bip(const Vec& r, const Vec& c) {
  return DegreeData::bipartite(Marginals::validate(r, c));
}

// 3x3 with zero diagonal; rows are vertices 0..2, columns 3..5.
const Matrix kHexagon{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
// u1=0, v1=col 0, u2=col 1, v2=row 1, u3=col 2, v3=row 2.
const SwitchingAnchor kHexAnchor{2, {0, 3, 4, 1, 5, 2}};

}  // namespace

TEST_CASE("construction from a matrix") {
  const auto data = bip({2, 2}, {2, 2});
  const auto g = MultiGraph::from_matrix(data, {{2, 0}, {0, 2}});
  CHECK(g.vertex_count() == 4);
  CHECK(g.left_count() == 2);
  CHECK(g.multiplicity(0, 2) == 2);
  CHECK(g.multiplicity(2, 0) == 2);
  CHECK(g.multiplicity(0, 3) == 0);
  CHECK(g.multiplicity(0, 1) == 0);
  CHECK(g.simple_edge_count() == 0);
  CHECK(g.registry_size(2) == 2);
  CHECK(g.stratum()[2] == 2);
  CHECK(g.points(0).size() == 2);
  CHECK(g.audit());
  CHECK(g.to_matrix() == Matrix{{2, 0}, {0, 2}});
  const auto e = g.edges();
  REQUIRE(e.size() == 2);
  CHECK(e[0].k == 2);
}

TEST_CASE("loopless adjacency") {
  const Vec d{2, 2, 2};
  const auto data = DegreeData::loopless(d);
  const Matrix adj{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  const auto g = MultiGraph::from_adjacency(data, adj);
  CHECK(g.multiplicity(1, 1) == 0);
  CHECK(g.multiplicity(0, 2) == 1);
  CHECK(g.simple_edge_count() == 3);
  CHECK(g.in_left(2));
  CHECK(g.to_matrix() == adj);
  CHECK(g.audit());
}

TEST_CASE("a 2-switching creates one double edge") {
  const auto data = bip({2, 2, 2}, {2, 2, 2});
  auto g = MultiGraph::from_matrix(data, kHexagon);
  CHECK(g.stratum().is_zero());
  REQUIRE(validate_anchor(g, kHexAnchor));
  g.apply_switching(kHexAnchor);
  CHECK(g.to_matrix() == Matrix{{2, 0, 0}, {0, 1, 1}, {0, 1, 1}});
  CHECK(g.stratum()[2] == 1);
  CHECK(g.simple_edge_count() == 4);
  CHECK(g.audit());
}

TEST_CASE("switchings on random simple tables keep the degrees and the audit") {
  BitSource src(11);
  for (int trial = 0; trial < 200; ++trial) {
    Matrix cells(5, std::vector<std::int64_t>(5, 0));
    for (auto& row : cells)
      for (auto& x : row) x = src.uniform_below(2);
    Vec r(5), c(5);
    for (std::size_t i = 0; i < 5; ++i) {
      r[i] = testing::row_sum(cells, i);
      c[i] = testing::col_sum(cells, i);
    }
    if (std::count(r.begin(), r.end(), 0) || std::count(c.begin(), c.end(), 0)) continue;
    const auto data = bip(r, c);
    auto g = MultiGraph::from_matrix(data, cells);
    for (int step = 0; step < 50; ++step) {
      SwitchingAnchor a{2, {}};
      a.vertices = {Vertex(src.uniform_below(5)), Vertex(5 + src.uniform_below(5)),
                    Vertex(5 + src.uniform_below(5)), Vertex(src.uniform_below(5)),
                    Vertex(5 + src.uniform_below(5)), Vertex(src.uniform_below(5))};
      if (!validate_anchor(g, a)) continue;
      const auto before = g.stratum()[2];
      g.apply_switching(a);
      CHECK(g.stratum()[2] == before + 1);
      CHECK(g.multiplicity(a.u(1), a.v(1)) == 2);
    }
    CHECK(g.audit());
    const auto m = g.to_matrix();
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(testing::row_sum(m, i) == r[i]);
      CHECK(testing::col_sum(m, i) == c[i]);
    }
    CHECK(stratum_of(m, Topology::Bipartite, data.delta) == g.stratum().key());
  }
}

TEST_CASE("round trip over every table of a small instance") {
  const Vec r{3, 2, 1}, c{2, 2, 2};
  const auto data = bip(r, c);
  for (const auto& t : enumerate_tables(r, c)) {
    const auto g = MultiGraph::from_matrix(data, t);
    CHECK(g.to_matrix() == t);
    CHECK(g.audit());
    CHECK(g.stratum().key() == stratum_of(t, Topology::Bipartite, data.delta));
  }
}

TEST_CASE("inflate restores zero rows and columns") {
  const Matrix stripped{{1, 2}, {3, 4}};
  const std::vector<std::size_t> rows{0, 2}, cols{1, 3};
  const auto full = inflate(stripped, 3, rows, 4, cols);
  CHECK(full == Matrix{{0, 1, 0, 2}, {0, 0, 0, 0}, {0, 3, 0, 4}});
}
