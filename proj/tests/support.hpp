// Shared helpers for the unit tests: hand-rolled generators of small
// instances and frequency checks.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "ctgen/exactprob.hpp"
#include "ctgen/marginals.hpp"
#include "ctgen/multigraph.hpp"

namespace testing {

using Vec = std::vector<std::int64_t>;

/// Random composition of `total` into `parts` nonnegative entries, each at
/// most `cap`. Falls back to spreading evenly if the cap is too tight.
inline Vec random_margin(ctgen::BitSource& src, std::size_t parts, std::int64_t total,
                         std::int64_t cap) {
  Vec v(parts, 0);
  std::int64_t left = total;
  for (int guard = 0; left > 0 && guard < 100000; ++guard) {
    const auto i = src.uniform_below(parts);
    if (v[i] < cap) {
      ++v[i];
      --left;
    }
  }
  for (std::size_t i = 0; left > 0; i = (i + 1) % parts) {
    ++v[i];
    --left;
  }
  return v;
}

/// Random marginal pair with m rows, n columns and the given total.
inline std::pair<Vec, Vec> random_pair(ctgen::BitSource& src, std::size_t m, std::size_t n,
                                       std::int64_t total, std::int64_t cap) {
  return {random_margin(src, m, total, cap), random_margin(src, n, total, cap)};
}

/// Binomial check: |count - n p| within `sigmas` standard deviations.
inline bool within_sigma(std::uint64_t count, std::uint64_t n, double p, double sigmas = 5) {
  const double mean = static_cast<double>(n) * p;
  const double sd = std::sqrt(static_cast<double>(n) * p * (1 - p));
  return std::abs(static_cast<double>(count) - mean) <= sigmas * sd + 1e-9;
}

inline std::int64_t row_sum(const ctgen::Matrix& m, std::size_t i) {
  std::int64_t s = 0;
  for (auto x : m[i]) s += x;
  return s;
}

inline std::int64_t col_sum(const ctgen::Matrix& m, std::size_t j) {
  std::int64_t s = 0;
  for (const auto& row : m) s += row[j];
  return s;
}

}  // namespace testing
