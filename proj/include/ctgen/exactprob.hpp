#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace ctgen {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Builds a canonical (reduced, positive-denominator) rational.
Rational make_rational(const BigInt& num, const BigInt& den);
Rational pow(const Rational& base, unsigned long exponent);

/// Seedable source of uniform bits.
///
/// The generator is xoshiro256** seeded through splitmix64. Two sources built
/// from the same seed produce the same draw sequence on every platform.
class BitSource {
 public:
  explicit BitSource(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform on {0, ..., k-1}; draws bit_length(k-1) bits and rejects values
  /// >= k. k must be positive.
  std::uint64_t uniform_below(std::uint64_t k);
  BigInt uniform_below(const BigInt& k);

  std::uint64_t draws() const { return draws_; }

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t draws_ = 0;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Seed for worker `index` of a pool started from `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// True with probability exactly p. Throws ProbabilityOutOfRange unless
/// 0 <= p <= 1.
bool bernoulli(const Rational& p, BitSource& src);

/// Returns i with probability probs[i], or nullopt (the residual) with
/// probability 1 - sum(probs). Throws InvalidDistribution if the sum exceeds
/// one or any entry is negative.
std::optional<std::size_t> categorical(std::span<const Rational> probs,
                                       BitSource& src);

/// A categorical distribution frozen over a common denominator, so repeated
/// draws cost one uniform_below and a short scan.
class CategoricalTable {
 public:
  CategoricalTable() = default;
  explicit CategoricalTable(std::span<const Rational> probs);

  std::optional<std::size_t> draw(BitSource& src) const;

  const BigInt& denominator() const { return denominator_; }
  /// Sum of the probabilities, exactly.
  Rational mass() const;
  std::size_t size() const { return cumulative_.size(); }

 private:
  BigInt denominator_ = 1;
  std::vector<BigInt> cumulative_;
};

/// Index i with probability weights[i] / sum(weights); the sum must be
/// positive.
std::size_t weighted_index(std::span<const BigInt> weights, BitSource& src);

}  // namespace ctgen
