#include <doctest.h>

#include "ctgen/error.hpp"
#include "ctgen/multigraphgen.hpp"
#include "ctgen/oracle.hpp"
#include "support.hpp"

using namespace ctgen;
using testing::Vec;

namespace {

ErrorCode code_of(const Vec& d) {
  try {
    DegreeSequence::validate(d);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidDistribution;  // no error
}

/// Erdos-Gallai by brute force: does some 0/1 symmetric matrix fit?
bool graphical_reference(const Vec& d) {
  const std::size_t n = d.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  for (std::uint64_t mask = 0; mask < (1ull << pairs.size()); ++mask) {
    Vec deg(n, 0);
    for (std::size_t b = 0; b < pairs.size(); ++b)
      if (mask >> b & 1) ++deg[pairs[b].first], ++deg[pairs[b].second];
    if (deg == d) return true;
  }
  return false;
}

std::vector<std::uint64_t> tally(Sampler& s, const std::vector<Matrix>& support, std::uint64_t n,
                                 BitSource& src) {
  std::map<Matrix, std::uint64_t> seen;
  for (const auto& t : support) seen[t] = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto it = seen.find(s.sample(src).to_matrix());
    REQUIRE(it != seen.end());
    ++it->second;
  }
  std::vector<std::uint64_t> out;
  for (const auto& [t, k] : seen) out.push_back(k);
  return out;
}

}  // namespace

TEST_CASE("degree sequence validation") {
  const auto s = DegreeSequence::validate(Vec{2, 0, 2});
  CHECK(s.degrees() == Vec{2, 2});
  CHECK(s.index() == std::vector<std::size_t>{0, 2});
  CHECK(s.total() == 4);
  CHECK(s.max_degree() == 2);
  CHECK(code_of({0, 0}) == ErrorCode::Empty);
  CHECK(code_of({2, 1}) == ErrorCode::OddSum);
  CHECK(code_of({-2, 2}) == ErrorCode::InvalidArgument);
}

TEST_CASE("graphicality") {
  CHECK(is_graphical(Vec{1, 1}));
  CHECK_FALSE(is_graphical(Vec{2, 2}));
  CHECK(is_graphical(Vec{2, 2, 2}));
  CHECK_FALSE(is_graphical(Vec{3, 3, 1, 1}));
  CHECK(is_multigraphical(Vec{2, 2}));
  CHECK_FALSE(is_multigraphical(Vec{3, 1}));
  CHECK_FALSE(is_multigraphical(Vec{2, 1}));
  BitSource src(61);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + src.uniform_below(5);
    Vec d(n);
    for (auto& x : d) x = static_cast<std::int64_t>(src.uniform_below(n));
    std::int64_t sum = 0;
    for (auto x : d) sum += x;
    if (sum % 2) ++d[0];
    if (d[0] >= static_cast<std::int64_t>(n)) continue;
    CHECK_MESSAGE(is_graphical(d) == graphical_reference(d), "trial " << trial);
  }
}

TEST_CASE("honest loopless sampling is uniform") {
  for (const Vec& d : {Vec{2, 2, 2, 2}, Vec{3, 2, 2, 1}, Vec{2, 2, 1, 1, 1, 1}}) {
    auto s = make_multigraph_sampler(DegreeSequence::validate(d));
    const auto all = enumerate_loopless(d);
    BitSource src(62);
    const auto counts = tally(s, all, 80 * all.size(), src);
    CHECK(chi_square_uniform(counts).p_value > 0.001);
  }
}

TEST_CASE("forced loopless fixture stays uniform") {
  const Vec d(6, 2);
  const auto data = DegreeData::loopless(d);
  Sampler s(forced_parameter_fixture(data, 5));
  const auto all = enumerate_loopless(d);
  BitSource src(63);
  const auto counts = tally(s, all, 40 * all.size(), src);
  CHECK(chi_square_uniform(counts).p_value > 0.001);
  CHECK(s.stats().gen_calls > 0);
}

TEST_CASE("impossible sequences are refused") {
  CHECK_THROWS_AS(make_multigraph_sampler(DegreeSequence::validate(Vec{3, 1})), Error);
  try {
    make_multigraph_sampler(DegreeSequence::validate(Vec{3, 1}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotGraphical);
  }
}

TEST_CASE("adjacency is reported over the raw vertex order") {
  const auto seq = DegreeSequence::validate(Vec{1, 0, 1});
  const auto full = inflate_adjacency(Matrix{{0, 1}, {1, 0}}, seq);
  CHECK(full == Matrix{{0, 0, 1}, {0, 0, 0}, {1, 0, 0}});
}
