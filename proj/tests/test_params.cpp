#include <doctest.h>

#include <cmath>

#include "ctgen/error.hpp"
#include "ctgen/params.hpp"
#include "support.hpp"

using namespace ctgen;
using testing::Vec;

namespace {

DegreeData regular(int n, std::int64_t d) {
  const Vec v(static_cast<std::size_t>(n), d);
  return DegreeData::bipartite(Marginals::validate(v, v));
}

/// The t0 conditions written out directly from their definition.
bool feasible_reference(std::int64_t M, std::int64_t D, std::int64_t t, const Rational& eps_min) {
  if (t <= 7 || t >= M) return false;
  const Rational eps = 1 - Rational(t + 4 * D * D, M);
  if (eps < eps_min || eps <= 0) return false;
  if (!(eps * eps * eps > Rational(4 * D * D * D * D, M))) return false;
  return 2 * t * (t - D * D - D * D * D) >= (t + 4 * D * D) * (t + 4 * D * D);
}

std::int64_t scan_reference(std::int64_t M, std::int64_t D, const Rational& eps_min) {
  std::int64_t best = 0;
  for (std::int64_t t = 8; t < M; ++t)
    if (feasible_reference(M, D, t, eps_min)) best = t;
  return best;
}

double log10_of(const Rational& q) {
  long en = 0, ed = 0;
  const double n = mpz_get_d_2exp(&en, q.get_num_mpz_t());
  const double d = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
  return std::log10(n / d) + static_cast<double>(en - ed) * std::log10(2.0);
}

}  // namespace

TEST_CASE("stratum index bookkeeping") {
  StratumIndex m(4, {1, 0, 2});
  CHECK(m.total() == 2 + 8);
  CHECK(m.top() == 4);
  CHECK(m[3] == 0);
  m.decrement(4);
  m.decrement(4);
  CHECK(m.top() == 2);
  CHECK(m.key() == Vec{1});
  CHECK(m.plus(3).total() == 5);
  CHECK(StratumIndex(3).is_zero());
  CHECK_THROWS_AS(StratumIndex(2, {0, 1}), Error);
}

TEST_CASE("t0 is zero when no candidate is feasible") {
  CHECK(choose_t0(regular(4, 2), Rational(1, 8)).first == 0);   // M = 8
  CHECK(choose_t0(regular(50, 2), Rational(1, 8)).first == 0);  // M = 100
}

TEST_CASE("t0 matches an exhaustive scan of the conditions") {
  for (int n : {40, 56, 57, 60, 100, 114, 115, 128, 200, 256, 300}) {
    const auto data = regular(n, 2);
    CHECK_MESSAGE(choose_t0(data, Rational(1, 8)).first ==
                      scan_reference(data.M, 2, Rational(1, 8)),
                  "n = " << n);
  }
  for (int n : {300, 500, 700}) {
    const auto data = regular(n, 3);
    CHECK(choose_t0(data, Rational(1, 8)).first == scan_reference(data.M, 3, Rational(1, 8)));
  }
  const auto [t0, eps] = choose_t0(regular(128, 2), Rational(1, 8));
  CHECK(t0 == 78);
  CHECK(eps == Rational(81, 128));
  CHECK(eps == epsilon_for(regular(128, 2), t0));
}

TEST_CASE("with epsilon near 1/4 the choice approaches 3M/4") {
  const auto data = regular(5000, 2);  // M = 10^4
  const auto [t0, eps] = choose_t0(data, Rational(1, 4));
  CHECK(std::abs(static_cast<double>(t0) / 1e4 - 0.75) < 0.01);
  CHECK(eps >= Rational(1, 4));
  // The default floor of 1/8 lets the cubic condition bind instead.
  const auto loose = choose_t0(data, Rational(1, 8)).first;
  CHECK(loose > t0);
  CHECK(scan_reference(data.M, 2, Rational(1, 4)) == t0);
}

TEST_CASE("f_bar is S_k T_k") {
  const auto p = ParameterSet::build(DegreeData::bipartite(Marginals::validate(Vec{2, 2}, Vec{2, 2})));
  CHECK(p.f_bar(2) == 16);
  const auto q = ParameterSet::build(DegreeData::bipartite(Marginals::validate(Vec{3}, Vec{1, 1, 1})));
  CHECK(q.f_bar(2) == 0);
  CHECK(q.f_bar(3) == 0);
}

TEST_CASE("b lower bounds") {
  const auto p = ParameterSet::build(regular(50, 2));
  CHECK(p.b_under(2, StratumIndex(2, {5}), 0) == 5);
  CHECK(p.b_under(2, StratumIndex(2), 1) == 88);
  CHECK(p.b_under(2, StratumIndex(2), 2) == 84);
  CHECK(p.b_under(2, StratumIndex(2, {3}), 1) == 82);

  const auto data3 = regular(200, 3);  // M = 600
  const auto q = ParameterSet::forced(data3, 100, {}, std::nullopt);
  CHECK(q.eps() == Rational(58, 75));
  for (auto m : {StratumIndex(3), StratumIndex(3, {2, 1}), StratumIndex(3, {0, 4})})
    for (int i = 1; i <= 3; ++i) CHECK(q.b_under(3, m, i) == q.eps() * 600);
  CHECK(q.b_under(3, StratumIndex(3, {0, 4}), 0) == 4);
  CHECK(q.b_under_total(3, StratumIndex(3, {0, 1})) == pow(q.eps() * 600, 3));
}

TEST_CASE("beta values") {
  CHECK(closed_form_beta(Topology::Bipartite, 2, 100, Rational(1, 4), 3) == Rational(1024, 25));
  CHECK(closed_form_beta(Topology::Loopless, 2, 100, Rational(1, 4), 3) == Rational(512, 25));

  const auto p = ParameterSet::build(regular(128, 2));
  REQUIRE(p.t0() == 78);
  CHECK(is_neg_one(p.beta(StratumIndex(2, {39}))));  // S = t0
  CHECK(is_neg_one(p.beta(StratumIndex(2, {40}))));
  // Last stratum below t0: every move leaves the range.
  CHECK(std::get<Rational>(p.beta(StratumIndex(2, {38}))) == 0);
  CHECK(std::get<Rational>(p.beta(StratumIndex(2))) == p.beta0());
  CHECK(p.beta_table().size() == 39);
  // Table entries follow the recurrence.
  for (std::int64_t m2 = 0; m2 + 1 < 39; ++m2) {
    const StratumIndex m(2, {m2});
    CHECK(p.beta_table()[m2] ==
          p.switch_ratio(2, m) * (1 + p.beta_table()[m2 + 1]));
  }
}

TEST_CASE("closed-form beta is used from level 3 upwards") {
  const auto data3 = regular(200, 3);
  const auto q = ParameterSet::forced(data3, 100, {}, std::nullopt);
  CHECK(std::get<Rational>(q.beta(StratumIndex(3, {1, 1}))) ==
        closed_form_beta(Topology::Bipartite, 3, 600, q.eps(), 3));
}

TEST_CASE("transition masses stay below one and the switch ratio bound holds") {
  for (int n : {128, 256}) {
    const auto p = ParameterSet::build(regular(n, 2));
    REQUIRE(p.t0() > 0);
    const auto M = Rational(p.M());
    for (std::int64_t m2 = 0; 2 * m2 < p.t0(); ++m2) {
      const StratumIndex m(2, {m2});
      Rational mass = 0;
      for (int s = m.top(); s <= p.delta(); ++s) mass += p.transition_prob(s, m);
      CHECK(mass <= 1);
      if (m.plus(2).total() < p.t0()) {
        const Rational bound =
            Rational(p.data().S[2] * p.data().T[2]) / (Rational(m2 + 1) * M * M * p.eps() * p.eps());
        CHECK(p.switch_ratio(2, m) <= bound);
      }
    }
  }
}

TEST_CASE("rho") {
  const auto small = ParameterSet::build(regular(50, 2));
  CHECK(small.t0() == 0);
  CHECK(small.rho_hat() == 1);

  const auto big = ParameterSet::build(regular(512, 2));
  REQUIRE(big.t0() > 0);
  CHECK(big.rho_hat() < Rational(1, BigInt("100000000000000000000")));
  const Rational scaled = big.B_hat() / (1 + big.beta0());
  CHECK(big.rho_hat() == scaled / (1 + scaled));
}

TEST_CASE("rationalised B is an upper bound on the real-valued B") {
  for (int n : {128, 256, 512}) {
    const auto data = regular(n, 2);
    const auto [t0, eps_q] = choose_t0(data, Rational(1, 8));
    const double eps = eps_q.get_d(), M = static_cast<double>(data.M);
    const double om = 1 - eps;
    const double log_b = std::log10(4.0) +
                         (eps * M / 2) * std::log10(1.5 / (om * om) + 0.75 / (om * om * om * om)) +
                         static_cast<double>(t0 - 7) *
                             std::log10(4 * std::exp(1.0) / (eps * eps * om * static_cast<double>(t0 - 7)));
    const double log_hat = log10_of(compute_B_hat(data, t0, eps_q));
    CHECK(log_hat >= log_b - 1e-9);
    CHECK(log_hat <= log_b + 1.0);
  }
}
