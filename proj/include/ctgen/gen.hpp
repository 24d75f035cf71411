#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "ctgen/exactprob.hpp"
#include "ctgen/multigraph.hpp"
#include "ctgen/params.hpp"

namespace ctgen {

enum class GenResult { Output, FReject, BReject, BetaReject };

const char* to_string(GenResult r);

/// Counters collected across Gen runs.
struct GenStats {
  std::uint64_t runs = 0;
  std::uint64_t outputs = 0;
  std::uint64_t f_rejects = 0;
  std::uint64_t b_rejects = 0;
  std::uint64_t beta_rejects = 0;
  std::uint64_t iterations = 0;  // switchings attempted
  std::uint64_t graph_ops = 0;   // point-list entries scanned for b-factors
  /// Histogram of the largest m_2 reached in each run.
  std::map<std::int64_t, std::uint64_t> max_m2;
  /// Per-iteration checks: lower bounds <= b-factors <= M.
  std::uint64_t bound_checks = 0;
  std::uint64_t bound_violations = 0;
  /// Per-iteration checks: transition probabilities sum to at most one.
  std::uint64_t mass_checks = 0;
  std::uint64_t mass_violations = 0;
  /// Per-iteration checks: f_bar / b_under <= S_k T_k / ((m_k+1) M^k eps^k).
  std::uint64_t ratio_checks = 0;
  std::uint64_t ratio_violations = 0;
};

/// Uniform star-centre picker: vertex v with weight (deg v)_s.
class CentrePicker {
 public:
  CentrePicker() = default;
  CentrePicker(const std::vector<std::int64_t>& degrees, int first_vertex,
               int s);

  bool empty() const { return vertices_.empty(); }
  Vertex draw(BitSource& src) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<std::uint64_t> cumulative_;
  std::vector<BigInt> big_cumulative_;  // used when the sum overflows
};

/// Everything Gen needs at one stratum m.
struct StratumStep {
  Rational output_prob;          // 1 / (1 + beta_m)
  CategoricalTable transitions;  // entry j is s = first_s + j
  int first_s = 2;
  /// lower[s][i-1] = b_under(s, m + e_s, i) for i = 1..s.
  std::vector<std::vector<Rational>> lower;
  bool mass_ok = true;
  bool ratio_ok = true;
};

/// Transition tables and star pickers for one parameter set. Strata with
/// top level 2 are precomputed; higher ones are built on first use.
class GenPlan {
 public:
  explicit GenPlan(const ParameterSet& params);

  const ParameterSet& params() const { return *params_; }
  const StratumStep& step(const StratumIndex& m);
  const CentrePicker& left_picker(int s) const { return left_[s]; }
  const CentrePicker& right_picker(int s) const { return right_[s]; }

 private:
  StratumStep build_step(const StratumIndex& m) const;

  const ParameterSet* params_;
  std::vector<StratumStep> level_two_;
  std::map<std::vector<std::int64_t>, StratumStep> higher_;
  std::vector<CentrePicker> left_, right_;
};

/// Uniformly random ordered pair of s-stars; nullopt means f-rejection.
std::optional<SwitchingAnchor> sample_star_pair(const MultiGraph& g, int s,
                                                const GenPlan& plan,
                                                BitSource& src);

/// Anchor validity: distinct vertices, single edges u1 ui and v1 vi, and
/// non-adjacent pairs ui vi and u1 v1.
bool validate_anchor(const MultiGraph& g, const SwitchingAnchor& anchor);

/// Scratch space for b-factor computation.
class BFactorWorkspace {
 public:
  /// b_s(G', V_i) for i = 0..s on the graph produced by `anchor`.
  std::vector<std::int64_t> compute(const MultiGraph& g,
                                    const SwitchingAnchor& anchor,
                                    std::uint64_t* ops = nullptr);

 private:
  std::vector<std::uint32_t> in_a_, in_b_;
  std::uint32_t epoch_ = 0;
};

std::vector<std::int64_t> b_factors(const MultiGraph& g,
                                    const SwitchingAnchor& anchor);

/// True if the switching is b-rejected. Throws InvariantViolation when a
/// factor is below its lower bound.
bool b_reject(std::span<const std::int64_t> factors,
              std::span<const Rational> lower, std::int64_t factor0_lower,
              BitSource& src);

/// Runs Gen from a simple graph until output or rejection, mutating g.
class GenRunner {
 public:
  explicit GenRunner(const ParameterSet& params);

  GenResult run(MultiGraph& g, BitSource& src);

  const GenStats& stats() const { return stats_; }
  GenStats& stats() { return stats_; }
  GenPlan& plan() { return plan_; }

 private:
  GenPlan plan_;
  BFactorWorkspace workspace_;
  GenStats stats_;
};

}  // namespace ctgen
