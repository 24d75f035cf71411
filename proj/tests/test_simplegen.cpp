#include <doctest.h>

#include <map>

#include "ctgen/oracle.hpp"
#include "ctgen/simplegen.hpp"
#include "support.hpp"

using namespace ctgen;
using testing::Vec;

namespace {

std::vector<std::uint64_t> frequencies(SimpleGraphSampler& s, BitSource& src, int n) {
  std::map<Matrix, std::uint64_t> seen;
  for (int i = 0; i < n; ++i) ++seen[s.sample(src).to_matrix()];
  std::vector<std::uint64_t> out;
  for (const auto& [m, k] : seen) out.push_back(k);
  return out;
}

bool is_simple(const Matrix& m) {
  for (const auto& row : m)
    for (auto x : row)
      if (x > 1) return false;
  return true;
}

}  // namespace

TEST_CASE("permutation matrices are uniform") {
  SimpleGraphSampler s(DegreeData::bipartite(Marginals::validate(Vec{1, 1, 1}, Vec{1, 1, 1})));
  BitSource src(3);
  const auto f = frequencies(s, src, 6000);
  REQUIRE(f.size() == 6);
  CHECK(chi_square_uniform(f).p_value > 0.001);
}

TEST_CASE("binary tables with mixed margins are uniform") {
  const Vec r{2, 2, 1, 1}, c{2, 1, 2, 1};
  std::size_t simple = 0;
  for (const auto& t : enumerate_tables(r, c)) simple += is_simple(t);
  SimpleGraphSampler s(DegreeData::bipartite(Marginals::validate(r, c)));
  BitSource src(5);
  const auto f = frequencies(s, src, 30 * static_cast<int>(simple));
  CHECK(f.size() == simple);
  CHECK(chi_square_uniform(f).p_value > 0.001);
  CHECK(s.attempts() >= 30 * simple);
}

TEST_CASE("loopless simple graphs are uniform") {
  const Vec d{2, 2, 2, 2};  // three 4-cycles
  SimpleGraphSampler s(DegreeData::loopless(d));
  BitSource src(7);
  const auto f = frequencies(s, src, 3000);
  REQUIRE(f.size() == 3);
  CHECK(chi_square_uniform(f).p_value > 0.001);

  const Vec e{2, 2, 1, 1, 1, 1};
  std::size_t simple = 0;
  for (const auto& a : enumerate_loopless(e)) simple += is_simple(a);
  SimpleGraphSampler t(DegreeData::loopless(e));
  const auto g = frequencies(t, src, 30 * static_cast<int>(simple));
  CHECK(g.size() == simple);
  CHECK(chi_square_uniform(g).p_value > 0.001);
}

TEST_CASE("samples have the requested degrees and no multiple edges") {
  BitSource src(9);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix cells(6, std::vector<std::int64_t>(7, 0));
    for (auto& row : cells)
      for (auto& x : row) x = src.uniform_below(2);
    Vec r(6), c(7);
    for (std::size_t i = 0; i < 6; ++i) r[i] = testing::row_sum(cells, i);
    for (std::size_t j = 0; j < 7; ++j) c[j] = testing::col_sum(cells, j);
    if (std::all_of(r.begin(), r.end(), [](auto x) { return x == 0; })) continue;
    const auto marg = Marginals::validate(r, c);
    SimpleGraphSampler s(DegreeData::bipartite(marg));
    const auto g = s.sample(src);
    CHECK(g.stratum().is_zero());
    const auto m = g.to_matrix();
    CHECK(is_simple(m));
    for (std::size_t i = 0; i < marg.rows().size(); ++i) CHECK(testing::row_sum(m, i) == marg.rows()[i]);
    for (std::size_t j = 0; j < marg.cols().size(); ++j) CHECK(testing::col_sum(m, j) == marg.cols()[j]);
  }
}
