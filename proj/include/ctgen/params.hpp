#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "ctgen/exactprob.hpp"
#include "ctgen/instance.hpp"

namespace ctgen {

/// Stratum index m = (m_2, ..., m_Delta): m_k counts edges of multiplicity k.
class StratumIndex {
 public:
  StratumIndex() = default;
  explicit StratumIndex(int delta);
  StratumIndex(int delta, const std::vector<std::int64_t>& counts);

  std::int64_t operator[](int k) const;
  /// m <- m + e_k
  void increment(int k);
  void decrement(int k);
  StratumIndex plus(int k) const;

  /// S(m) = sum_k k * m_k.
  std::int64_t total() const { return total_; }
  /// Largest k with m_k > 0, or 2 for the zero vector.
  int top() const { return top_; }
  int delta() const { return static_cast<int>(m_.size()) - 1; }
  bool is_zero() const { return total_ == 0; }
  /// Counts for k = 2..Delta.
  std::vector<std::int64_t> key() const;

  friend bool operator==(const StratumIndex& a, const StratumIndex& b) {
    return a.m_ == b.m_;
  }

 private:
  void recompute();

  std::vector<std::int64_t> m_;  // indices 0..Delta; m_[0] = m_[1] = 0
  std::int64_t total_ = 0;
  int top_ = 2;
};

/// beta_m = -1 marks strata at or beyond t0; it is never a Rational.
struct NegOne {};
using Beta = std::variant<NegOne, Rational>;

inline bool is_neg_one(const Beta& b) { return std::holds_alternative<NegOne>(b); }

/// Largest t0 in (7, M) meeting the three feasibility conditions with
/// epsilon >= eps_min, together with its epsilon; (0, 0) if none exists.
std::pair<std::int64_t, Rational> choose_t0(const DegreeData& data,
                                            const Rational& eps_min);

/// epsilon implied by t0 (may be non-positive for forced values).
Rational epsilon_for(const DegreeData& data, std::int64_t t0);

/// Upper bound on e used in place of e inside B.
Rational e_upper();

/// Per-(k, m) replacement lower bounds, used only by verified test fixtures.
/// An empty vector marks a stratum with no members: moving into it has
/// probability zero.
using LowerBoundTable =
    std::map<std::pair<int, std::vector<std::int64_t>>, std::vector<Rational>>;

/// Every parameter the sampler needs, as exact rationals.
class ParameterSet {
 public:
  static ParameterSet build(const DegreeData& data,
                            const Rational& eps_min = Rational(1, 8));

  /// Parameters with t0 pinned and, optionally, b-lower-bounds and B
  /// replaced. Callers are responsible for verifying that the replacements
  /// are valid bounds on the instance.
  static ParameterSet forced(const DegreeData& data, std::int64_t t0,
                             LowerBoundTable lower_bounds,
                             std::optional<Rational> B_hat,
                             const Rational& eps_min = Rational(1, 8));

  const DegreeData& data() const { return data_; }
  Topology topology() const { return data_.topology; }
  int delta() const { return data_.delta; }
  std::int64_t M() const { return data_.M; }
  std::int64_t t0() const { return t0_; }
  const Rational& eps() const { return eps_; }
  const Rational& eps_min() const { return eps_min_; }
  bool forced_fixture() const { return forced_; }

  /// Upper bound on the number of k-switchings from any member of H_m.
  const BigInt& f_bar(int k) const;

  /// Lower bound on b_k(G', V_i) over G' in H_m (m is the target stratum).
  Rational b_under(int k, const StratumIndex& m, int i) const;
  /// Product over i = 0..k.
  Rational b_under_total(int k, const StratumIndex& m) const;

  Beta beta(const StratumIndex& m) const;
  const std::vector<Rational>& beta_table() const { return beta_table_; }
  const Rational& beta0() const;

  /// f_bar_k(m) / b_under_k(m + e_k), or 0 when the target is known empty.
  Rational switch_ratio(int k, const StratumIndex& m) const;

  /// Probability of choosing s at stratum m in the stratum chain:
  /// switch_ratio(s, m) * (1 + beta_{m+e_s}) / beta_m; zero when
  /// beta_{m+e_s} is NegOne.
  Rational transition_prob(int s, const StratumIndex& m) const;

  const Rational& B_hat() const { return B_hat_; }
  const Rational& rho_hat() const { return rho_hat_; }

  const LowerBoundTable& lower_bounds() const { return lower_bounds_; }

 private:
  ParameterSet() = default;
  void finish(std::optional<Rational> B_hat);
  Rational closed_form_beta(int level) const;
  const std::vector<Rational>* override_for(int k, const StratumIndex& m) const;
  Rational one_plus_beta(const StratumIndex& m) const;

  DegreeData data_;
  std::int64_t t0_ = 0;
  Rational eps_ = 0;
  Rational eps_min_{1, 8};
  bool forced_ = false;
  std::vector<BigInt> f_bar_;
  std::vector<Rational> beta_table_;
  Rational B_hat_ = 0;
  Rational rho_hat_ = 1;
  LowerBoundTable lower_bounds_;
};

/// 4 Delta^(2l-2) / (M^(l-2) eps^l) (coefficient 2 when loopless), the
/// beta value of every stratum whose top level l is at least 3.
Rational closed_form_beta(Topology topology, int delta, std::int64_t M,
                          const Rational& eps, int level);

/// B-hat for the given t0 and epsilon (requires t0 > 7 and 0 < eps < 1).
Rational compute_B_hat(const DegreeData& data, std::int64_t t0,
                       const Rational& eps);

}  // namespace ctgen
