#include <doctest.h>

#include "ctgen/brute.hpp"
#include "ctgen/error.hpp"
#include "ctgen/oracle.hpp"
#include "support.hpp"

using namespace ctgen;
using testing::Vec;

namespace {

/// Profile computed by enumeration: tables grouped by total multiplicity.
std::map<std::int64_t, std::uint64_t> enumerated_profile(const std::vector<Matrix>& all,
                                                         Topology topo, int delta) {
  std::map<std::int64_t, std::uint64_t> out;
  for (const auto& t : all) ++out[stratum_total(stratum_of(t, topo, delta))];
  return out;
}

void check_profile(const Profile& p, const std::map<std::int64_t, std::uint64_t>& expect) {
  std::uint64_t total = 0;
  for (std::size_t t = 0; t < p.size(); ++t) {
    const auto it = expect.find(static_cast<std::int64_t>(t));
    const std::uint64_t want = it == expect.end() ? 0 : it->second;
    CHECK(p[t] == want);
    total += want;
  }
  std::uint64_t all = 0;
  for (const auto& [t, k] : expect) all += k;
  CHECK(total == all);
}

}  // namespace

TEST_CASE("small counts") {
  Counter c;
  const Vec two{2, 2};
  CHECK(count_tables(c, two, two, 4) == 2);
  CHECK(count_tables(c, two, two, 0) == 1);
  CHECK(count_tables(c, two, two, 2) == 0);
  CHECK(count_tables(c, two, two, 9) == 0);
  const Vec one{1, 1, 1};
  CHECK(count_tables(c, one, one, 0) == 6);
  CHECK(c.loopless(Vec{1, 1, 1, 1})[0] == 3);
  CHECK(c.loopless(Vec{2, 2})[2] == 1);
  CHECK(c.loopless(Vec{3, 1}).empty());
}

TEST_CASE("bipartite profiles match enumeration") {
  BitSource src(41);
  Counter memo(1 << 12), plain(0);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t m = 1 + src.uniform_below(4), n = 1 + src.uniform_below(4);
    const std::int64_t total = 1 + static_cast<std::int64_t>(src.uniform_below(8));
    auto [r, c] = testing::random_pair(src, m, n, total, 4);
    const auto marg = Marginals::validate(r, c);
    const auto all = enumerate_tables(marg.rows(), marg.cols());
    const auto expect = enumerated_profile(all, Topology::Bipartite,
                                           static_cast<int>(marg.max_component()));
    check_profile(memo.bipartite(marg.rows(), marg.cols()), expect);
    check_profile(plain.bipartite(marg.rows(), marg.cols()), expect);
  }
  CHECK(memo.memo_size() > 0);
  CHECK(memo.memo_size() <= memo.memo_capacity());
  CHECK(plain.memo_size() == 0);
}

TEST_CASE("loopless profiles match enumeration") {
  BitSource src(42);
  Counter c(1 << 10);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 2 + src.uniform_below(4);
    Vec d = testing::random_margin(src, n, 2 * (1 + src.uniform_below(5)), 4);
    if (!std::all_of(d.begin(), d.end(), [](auto x) { return x > 0; })) continue;
    const auto all = enumerate_loopless(d);
    const auto p = c.loopless(d);
    if (all.empty()) {
      CHECK(p.empty());
      continue;
    }
    const int delta = static_cast<int>(*std::max_element(d.begin(), d.end()));
    check_profile(p, enumerated_profile(all, Topology::Loopless, delta));
  }
}

TEST_CASE("R counts multigraphs at or above the threshold") {
  const Vec r{2, 2, 1, 1};
  const auto data = DegreeData::bipartite(Marginals::validate(r, r));
  const auto all = enumerate_tables(r, r);
  Counter c;
  for (std::int64_t t0 : {0, 2, 3, 4, 5, 6}) {
    std::uint64_t want = 0;
    for (const auto& t : all) want += stratum_total(stratum_of(t, Topology::Bipartite, 2)) >= t0;
    CHECK(compute_R(c, data, t0) == want);
  }
}

TEST_CASE("sub_brute is uniform within a total") {
  const Vec r{3, 2, 1}, col{2, 2, 2};
  const auto data = DegreeData::bipartite(Marginals::validate(r, col));
  const auto all = enumerate_tables(r, col);
  Counter c;
  BitSource src(43);
  for (std::int64_t t : {0, 2, 3, 4}) {
    std::map<Matrix, std::uint64_t> target;
    for (const auto& m : all)
      if (stratum_total(stratum_of(m, Topology::Bipartite, 3)) == t) target[m] = 0;
    if (target.empty()) {
      CHECK_THROWS_AS(sub_brute(c, data, t, src), Error);
      continue;
    }
    const std::uint64_t n = 200 * target.size();
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto g = sub_brute(c, data, t, src);
      CHECK(g.audit());
      const auto it = target.find(g.to_matrix());
      REQUIRE(it != target.end());
      ++it->second;
    }
    std::vector<std::uint64_t> counts;
    for (const auto& [k, v] : target) counts.push_back(v);
    if (counts.size() > 1) CHECK(chi_square_uniform(counts).p_value > 0.001);
  }
  CHECK_THROWS_AS(sub_brute(c, data, 1, src), Error);
}

TEST_CASE("sub_brute on loopless instances") {
  const Vec d{3, 3, 2, 2};
  const auto data = DegreeData::loopless(d);
  const auto all = enumerate_loopless(d);
  Counter c;
  BitSource src(44);
  std::map<Matrix, std::uint64_t> target;
  for (const auto& m : all)
    if (stratum_total(stratum_of(m, Topology::Loopless, 3)) == 2) target[m] = 0;
  REQUIRE(target.size() > 1);
  for (std::uint64_t i = 0; i < 200 * target.size(); ++i) ++target.at(sub_brute(c, data, 2, src).to_matrix());
  std::vector<std::uint64_t> counts;
  for (const auto& [k, v] : target) counts.push_back(v);
  CHECK(chi_square_uniform(counts).p_value > 0.001);
}

TEST_CASE("Brute acceptance probability and outcomes") {
  const Vec r{2, 2, 1, 1};
  const auto data = DegreeData::bipartite(Marginals::validate(r, r));
  FixtureReport report;
  const auto params = forced_parameter_fixture(data, 3, &report);
  Counter c;
  BruteRunner brute(params, c);
  CHECK(brute.R() == report.R);
  CHECK(brute.H0() == report.H0);
  CHECK(brute.accept_prob() == Rational(brute.R()) / (Rational(brute.H0()) * params.B_hat()));
  BitSource src(45);
  std::uint64_t accepted = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto out = brute.run(src);
    if (!out.accepted) continue;
    ++accepted;
    CHECK(out.t >= 3);
    CHECK(stratum_total(out.graph.stratum().key()) == out.t);
  }
  CHECK(testing::within_sigma(accepted, n, brute.accept_prob().get_d()));
}

TEST_CASE("counting stops at its deadline") {
  const Vec two(40, 2);
  Counter c;
  c.set_deadline(std::chrono::steady_clock::now());
  try {
    c.bipartite(two, two);
    FAIL("expected the deadline to stop the count");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooLarge);
  }
  c.set_deadline(std::nullopt);
  CHECK(c.bipartite(Vec{2, 2}, Vec{2, 2}).size() == 5);
}
