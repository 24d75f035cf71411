#include <doctest.h>

#include "ctgen/error.hpp"
#include "ctgen/exactprob.hpp"
#include "support.hpp"

using namespace ctgen;

TEST_CASE("same seed, same stream") {
  BitSource a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs = differs || x != c.next_u64();
  }
  CHECK(differs);
}

TEST_CASE("uniform_below") {
  BitSource src(1);
  for (int i = 0; i < 1000; ++i) CHECK(src.uniform_below(1) == 0);
  std::uint64_t ones = 0;
  const std::uint64_t n = 100000;
  for (std::uint64_t i = 0; i < n; ++i) ones += src.uniform_below(2);
  CHECK(testing::within_sigma(ones, n, 0.5));
  BigInt big;
  mpz_ui_pow_ui(big.get_mpz_t(), 10, 30);
  for (int i = 0; i < 1000; ++i) {
    const BigInt x = src.uniform_below(big);
    CHECK(x >= 0);
    CHECK(x < big);
  }
}

TEST_CASE("uniform_below is uniform over a non-power-of-two range") {
  BitSource src(9);
  std::vector<std::uint64_t> counts(6, 0);
  const std::uint64_t n = 60000;
  for (std::uint64_t i = 0; i < n; ++i) ++counts[src.uniform_below(6)];
  for (auto c : counts) CHECK(testing::within_sigma(c, n, 1.0 / 6));
}

TEST_CASE("bernoulli") {
  BitSource src(2);
  for (int i = 0; i < 1000; ++i) {
    CHECK_FALSE(bernoulli(Rational(0), src));
    CHECK(bernoulli(Rational(1), src));
  }
  std::uint64_t hits = 0;
  const std::uint64_t n = 300000;
  for (std::uint64_t i = 0; i < n; ++i) hits += bernoulli(Rational(1, 3), src);
  CHECK(testing::within_sigma(hits, n, 1.0 / 3));
  CHECK_THROWS_AS(bernoulli(Rational(3, 2), src), Error);
  CHECK_THROWS_AS(bernoulli(Rational(-1, 2), src), Error);
}

TEST_CASE("bernoulli with a tiny probability uses big arithmetic") {
  BitSource src(3);
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, 200);
  const Rational p = make_rational(1, den);
  for (int i = 0; i < 1000; ++i) CHECK_FALSE(bernoulli(p, src));
  CHECK(bernoulli(1 - p, src));
}

TEST_CASE("categorical") {
  BitSource src(4);
  const std::vector<Rational> one{Rational(1)};
  for (int i = 0; i < 100; ++i) CHECK(categorical(one, src) == std::optional<std::size_t>(0));
  const std::vector<Rational> none;
  for (int i = 0; i < 100; ++i) CHECK_FALSE(categorical(none, src).has_value());
  const std::vector<Rational> probs{Rational(1, 2), Rational(1, 4)};
  std::uint64_t residual = 0, first = 0;
  const std::uint64_t n = 100000;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto r = categorical(probs, src);
    if (!r) ++residual;
    else if (*r == 0) ++first;
  }
  CHECK(testing::within_sigma(residual, n, 0.25));
  CHECK(testing::within_sigma(first, n, 0.5));
  const std::vector<Rational> bad{Rational(3, 4), Rational(1, 2)};
  CHECK_THROWS_AS(categorical(bad, src), Error);
  const std::vector<Rational> negative{Rational(-1, 4)};
  CHECK_THROWS_AS(categorical(negative, src), Error);
}

TEST_CASE("categorical table matches the direct draw law") {
  BitSource src(5);
  const std::vector<Rational> probs{Rational(1, 3), Rational(1, 5), Rational(1, 7)};
  const CategoricalTable table(probs);
  CHECK(table.mass() == Rational(1, 3) + Rational(1, 5) + Rational(1, 7));
  std::vector<std::uint64_t> counts(4, 0);
  const std::uint64_t n = 105000;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto r = table.draw(src);
    ++counts[r ? *r : 3];
  }
  CHECK(testing::within_sigma(counts[0], n, 1.0 / 3));
  CHECK(testing::within_sigma(counts[1], n, 1.0 / 5));
  CHECK(testing::within_sigma(counts[2], n, 1.0 / 7));
  const CategoricalTable empty;
  const auto before = src.draws();
  CHECK_FALSE(empty.draw(src).has_value());
  CHECK(src.draws() == before);
}

TEST_CASE("weighted_index") {
  BitSource src(6);
  const std::vector<BigInt> w{1, 0, 3};
  std::vector<std::uint64_t> counts(3, 0);
  const std::uint64_t n = 40000;
  for (std::uint64_t i = 0; i < n; ++i) ++counts[weighted_index(w, src)];
  CHECK(counts[1] == 0);
  CHECK(testing::within_sigma(counts[0], n, 0.25));
}

TEST_CASE("derived seeds differ per worker and are stable") {
  CHECK(derive_seed(7, 0) == derive_seed(7, 0));
  CHECK(derive_seed(7, 0) != derive_seed(7, 1));
  CHECK(derive_seed(7, 0) != derive_seed(8, 0));
}
