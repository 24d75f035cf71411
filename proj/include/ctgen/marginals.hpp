#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace ctgen {

using BigInt = mpz_class;

/// Falling factorial (x)_k = x(x-1)...(x-k+1); zero whenever k > x.
BigInt falling_factorial(std::int64_t x, int k);

/// Row and column sums of a contingency table, with zero components removed.
///
/// `rows()` and `cols()` are the positive components in input order; the
/// index maps send them back to positions in the raw vectors so that sampled
/// tables can be re-inflated with zero rows and columns.
class Marginals {
 public:
  /// Throws Error{UnequalSums} or Error{Empty}; negative entries are
  /// InvalidArgument.
  static Marginals validate(std::span<const std::int64_t> raw_rows,
                            std::span<const std::int64_t> raw_cols);

  const std::vector<std::int64_t>& rows() const { return rows_; }
  const std::vector<std::int64_t>& cols() const { return cols_; }
  const std::vector<std::int64_t>& raw_rows() const { return raw_rows_; }
  const std::vector<std::int64_t>& raw_cols() const { return raw_cols_; }
  const std::vector<std::size_t>& row_index() const { return row_index_; }
  const std::vector<std::size_t>& col_index() const { return col_index_; }

  std::size_t m() const { return rows_.size(); }
  std::size_t n() const { return cols_.size(); }
  std::int64_t total() const { return total_; }
  int max_component() const { return delta_; }

 private:
  std::vector<std::int64_t> raw_rows_, raw_cols_;
  std::vector<std::int64_t> rows_, cols_;
  std::vector<std::size_t> row_index_, col_index_;
  std::int64_t total_ = 0;
  int delta_ = 0;
};

/// S_k = sum_i (s_i)_k and T_k = sum_j (t_j)_k for k = 0..Delta.
/// Entries 0 and 1 are filled for convenience (S_0 = m, S_1 = M).
struct MomentTable {
  std::vector<BigInt> S;
  std::vector<BigInt> T;

  const BigInt& s(int k) const;
  const BigInt& t(int k) const;
};

MomentTable moments(const Marginals& marginals);

/// Sum of (d)_k over a degree vector, for k = 0..max_k.
std::vector<BigInt> factorial_moments(std::span<const std::int64_t> degrees,
                                      int max_k);

/// Gale-Ryser test: does a simple bipartite graph with these degrees exist?
bool is_bigraphical(const Marginals& marginals);
bool is_bigraphical(std::span<const std::int64_t> rows,
                    std::span<const std::int64_t> cols);

}  // namespace ctgen
