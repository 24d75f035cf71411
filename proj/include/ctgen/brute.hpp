#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "ctgen/exactprob.hpp"
#include "ctgen/multigraph.hpp"
#include "ctgen/params.hpp"

namespace ctgen {

/// Counts indexed by total multiplicity t: profile[t] is the number of
/// multigraphs whose multiple edges have multiplicities summing to t.
/// An empty profile means no multigraph at all.
using Profile = std::vector<BigInt>;

/// Exact counter for bipartite and loopless multigraphs with given degrees,
/// by splitting one vertex class in half and summing over how the other
/// side's degrees divide between the halves.
///
/// Results for canonical (sorted, zero-free) keys can be memoised in a
/// bounded cache; with capacity 0 nothing is stored.
class Counter {
 public:
  explicit Counter(std::size_t memo_capacity = 0);

  /// Bipartite multigraphs with row degrees g and column degrees h.
  Profile bipartite(std::span<const std::int64_t> g,
                    std::span<const std::int64_t> h);
  /// Loopless multigraphs with degree sequence d.
  Profile loopless(std::span<const std::int64_t> d);

  std::size_t memo_capacity() const { return capacity_; }
  std::size_t memo_size() const { return bip_memo_.size() + loop_memo_.size(); }
  std::uint64_t evaluations() const { return evaluations_; }

  /// Counting past this instant throws TooLarge; nullopt removes the limit.
  void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline) {
    deadline_ = deadline;
  }

 private:
  using Key = std::vector<std::int32_t>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  Profile bip_canonical(Key g, Key h);
  Profile loop_canonical(Key d);
  bool can_store() const;
  void check_deadline() const;

  std::size_t capacity_;
  std::uint64_t evaluations_ = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::unordered_map<Key, Profile, KeyHash> bip_memo_;
  std::unordered_map<Key, Profile, KeyHash> loop_memo_;
};

/// N(g, h; t) for one t.
BigInt count_tables(Counter& counter, std::span<const std::int64_t> g,
                    std::span<const std::int64_t> h, std::int64_t t);

/// Number of multigraphs for the instance whose total multiplicity is at
/// least t0.
BigInt compute_R(Counter& counter, const DegreeData& data, std::int64_t t0);

/// Uniform multigraph on the instance with total multiplicity exactly
/// t_target. Throws Infeasible if there is none.
MultiGraph sub_brute(Counter& counter, const DegreeData& data,
                     std::int64_t t_target, BitSource& src);

struct BruteOutcome {
  bool accepted = false;
  bool empty = false;  // R = 0: nothing to sample above t0
  std::int64_t t = -1;
  MultiGraph graph;
};

/// Cached totals for one parameter set.
class BruteRunner {
 public:
  BruteRunner(const ParameterSet& params, Counter& counter);

  BruteOutcome run(BitSource& src);

  const BigInt& R() const { return R_; }
  const BigInt& H0() const { return h0_; }
  /// R / (|H_0| * B_hat), or 1 when t0 = 0.
  const Rational& accept_prob() const { return accept_; }

 private:
  const ParameterSet* params_;
  Counter* counter_;
  Profile profile_;
  BigInt R_ = 0;
  BigInt h0_ = 0;
  Rational accept_ = 1;
};

}  // namespace ctgen
