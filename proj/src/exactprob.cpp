#include "ctgen/exactprob.hpp"

#include <bit>

#include "ctgen/error.hpp"

namespace ctgen {

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) fail(ErrorCode::InvalidArgument, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational pow(const Rational& base, unsigned long exponent) {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  return make_rational(num, den);
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed ^ (0xd1b54a32d192ed03ULL * (index + 1));
  return splitmix64(state);
}

BitSource::BitSource(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : state_) word = splitmix64(sm);
}

std::uint64_t BitSource::next_u64() {
  ++draws_;
  const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = std::rotl(state_[3], 45);
  return result;
}

std::uint64_t BitSource::uniform_below(std::uint64_t k) {
  if (k == 0) fail(ErrorCode::InvalidArgument, "uniform_below(0)");
  if (k == 1) return 0;
  const int bits = std::bit_width(k - 1);
  const std::uint64_t mask = bits == 64 ? ~0ULL : ((1ULL << bits) - 1);
  for (;;) {
    const std::uint64_t u = next_u64() & mask;
    if (u < k) return u;
  }
}

BigInt BitSource::uniform_below(const BigInt& k) {
  if (k <= 0) fail(ErrorCode::InvalidArgument, "uniform_below(k <= 0)");
  if (k.fits_ulong_p()) return BigInt(uniform_below(std::uint64_t{k.get_ui()}));
  const BigInt top = k - 1;
  const std::size_t bits = mpz_sizeinbase(top.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  const unsigned spare = static_cast<unsigned>(words * 64 - bits);
  std::vector<std::uint64_t> buf(words);
  BigInt u;
  for (;;) {
    // Most significant word first.
    for (auto& w : buf) w = next_u64();
    if (spare) buf[0] >>= spare;
    mpz_import(u.get_mpz_t(), words, 1, sizeof(std::uint64_t), 0, 0, buf.data());
    if (u < k) return u;
  }
}

bool bernoulli(const Rational& p, BitSource& src) {
  if (sgn(p) < 0 || p > 1)
    fail(ErrorCode::ProbabilityOutOfRange,
         "probability " + p.get_str() + " outside [0,1]");
  if (sgn(p) == 0) return false;
  if (p == 1) return true;
  return src.uniform_below(BigInt(p.get_den())) < p.get_num();
}

CategoricalTable::CategoricalTable(std::span<const Rational> probs) {
  for (const auto& p : probs) {
    if (sgn(p) < 0)
      fail(ErrorCode::InvalidDistribution, "negative probability " + p.get_str());
    mpz_lcm(denominator_.get_mpz_t(), denominator_.get_mpz_t(),
            p.get_den_mpz_t());
  }
  BigInt acc = 0;
  cumulative_.reserve(probs.size());
  for (const auto& p : probs) {
    acc += p.get_num() * (denominator_ / p.get_den());
    cumulative_.push_back(acc);
  }
  if (acc > denominator_)
    fail(ErrorCode::InvalidDistribution,
         "probabilities sum to " + make_rational(acc, denominator_).get_str());
}

std::optional<std::size_t> CategoricalTable::draw(BitSource& src) const {
  if (cumulative_.empty() || cumulative_.back() == 0) return std::nullopt;
  const BigInt u = src.uniform_below(denominator_);
  for (std::size_t i = 0; i < cumulative_.size(); ++i)
    if (u < cumulative_[i]) return i;
  return std::nullopt;
}

Rational CategoricalTable::mass() const {
  return cumulative_.empty() ? Rational(0)
                             : make_rational(cumulative_.back(), denominator_);
}

std::optional<std::size_t> categorical(std::span<const Rational> probs,
                                       BitSource& src) {
  return CategoricalTable(probs).draw(src);
}

std::size_t weighted_index(std::span<const BigInt> weights, BitSource& src) {
  BigInt total = 0;
  for (const auto& w : weights) {
    if (sgn(w) < 0) fail(ErrorCode::InvalidDistribution, "negative weight");
    total += w;
  }
  if (total == 0) fail(ErrorCode::InvalidDistribution, "all weights are zero");
  BigInt u = src.uniform_below(total);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  fail(ErrorCode::InvariantViolation, "weighted_index fell off the end");
}

}  // namespace ctgen
