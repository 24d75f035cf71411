#include "ctgen/marginals.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>

#include "ctgen/error.hpp"

namespace ctgen {

BigInt falling_factorial(std::int64_t x, int k) {
  if (k < 0) return 0;
  if (k > x) return 0;
  BigInt r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<long>(x - i);
  return r;
}

namespace {

void strip(std::span<const std::int64_t> raw, std::vector<std::int64_t>& out,
           std::vector<std::size_t>& index, std::int64_t& sum, int& delta) {
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] < 0)
      fail(ErrorCode::InvalidArgument,
           "negative marginal " + std::to_string(raw[i]));
    if (raw[i] == 0) continue;
    out.push_back(raw[i]);
    index.push_back(i);
    sum += raw[i];
    delta = std::max<int>(delta, static_cast<int>(raw[i]));
  }
}

}  // namespace

Marginals Marginals::validate(std::span<const std::int64_t> raw_rows,
                              std::span<const std::int64_t> raw_cols) {
  Marginals mg;
  mg.raw_rows_.assign(raw_rows.begin(), raw_rows.end());
  mg.raw_cols_.assign(raw_cols.begin(), raw_cols.end());
  std::int64_t row_sum = 0, col_sum = 0;
  strip(raw_rows, mg.rows_, mg.row_index_, row_sum, mg.delta_);
  strip(raw_cols, mg.cols_, mg.col_index_, col_sum, mg.delta_);
  if (row_sum != col_sum)
    fail(ErrorCode::UnequalSums, "row sum " + std::to_string(row_sum) +
                                     " != column sum " +
                                     std::to_string(col_sum));
  if (row_sum == 0) fail(ErrorCode::Empty, "all marginals are zero");
  mg.total_ = row_sum;
  return mg;
}

const BigInt& MomentTable::s(int k) const {
  static const BigInt zero = 0;
  return k >= 0 && static_cast<std::size_t>(k) < S.size() ? S[k] : zero;
}

const BigInt& MomentTable::t(int k) const {
  static const BigInt zero = 0;
  return k >= 0 && static_cast<std::size_t>(k) < T.size() ? T[k] : zero;
}

std::vector<BigInt> factorial_moments(std::span<const std::int64_t> degrees,
                                      int max_k) {
  // Group by degree value first so the cost is O(#distinct * max_k).
  std::vector<std::int64_t> sorted(degrees.begin(), degrees.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<BigInt> out(static_cast<std::size_t>(max_k) + 1, 0);
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const auto count = static_cast<long>(j - i);
    BigInt ff = 1;
    for (int k = 0; k <= max_k; ++k) {
      if (k > 0) ff *= static_cast<long>(sorted[i] - (k - 1));
      if (ff == 0) break;
      out[k] += ff * count;
    }
    i = j;
  }
  return out;
}

MomentTable moments(const Marginals& marginals) {
  const int delta = marginals.max_component();
  return {factorial_moments(marginals.rows(), delta),
          factorial_moments(marginals.cols(), delta)};
}

bool is_bigraphical(std::span<const std::int64_t> rows,
                    std::span<const std::int64_t> cols) {
  std::vector<std::int64_t> a(rows.begin(), rows.end());
  std::sort(a.begin(), a.end(), std::greater<>());
  const std::int64_t sum_a = std::accumulate(a.begin(), a.end(), std::int64_t{0});
  const std::int64_t sum_b =
      std::accumulate(cols.begin(), cols.end(), std::int64_t{0});
  if (sum_a != sum_b) return false;
  // sum_{i<=k} a_i <= sum_j min(b_j, k) for every k.
  std::int64_t prefix = 0;
  for (std::size_t k = 1; k <= a.size(); ++k) {
    prefix += a[k - 1];
    std::int64_t rhs = 0;
    for (auto b : cols) rhs += std::min<std::int64_t>(b, static_cast<std::int64_t>(k));
    if (prefix > rhs) return false;
  }
  return true;
}

bool is_bigraphical(const Marginals& marginals) {
  return is_bigraphical(marginals.rows(), marginals.cols());
}

}  // namespace ctgen
