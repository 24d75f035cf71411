#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "ctgen/brute.hpp"
#include "ctgen/exactprob.hpp"
#include "ctgen/gen.hpp"
#include "ctgen/multigraph.hpp"
#include "ctgen/params.hpp"
#include "ctgen/simplegen.hpp"

namespace ctgen {

struct SamplerConfig {
  /// Restarts allowed per sample; unset means unlimited. In approximate
  /// mode an unset value becomes ceil(M ln M).
  std::optional<std::uint64_t> max_restarts;
  /// Skip the Brute branch whenever Gen is available (t0 > 0). The output
  /// is then uniform over multigraphs with total multiplicity below t0.
  bool approximate = false;
  /// Brute count cache capacity in entries; 0 disables it.
  std::size_t memo_capacity = 0;
  /// Wall-clock limit on exact counting; exceeding it throws TooLarge.
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct DriverStats {
  std::uint64_t samples = 0;
  std::uint64_t restarts = 0;
  std::uint64_t gen_calls = 0;
  std::uint64_t brute_calls = 0;
  std::uint64_t brute_accepts = 0;
  std::uint64_t brute_rejects = 0;
  std::uint64_t simple_shortcuts = 0;
};

/// MATRIXGEN / MULTIGRAPHGEN over one instance and parameter set.
class Sampler {
 public:
  Sampler(ParameterSet params, SamplerConfig config = {});

  /// One uniform sample. Throws ApproximateCutoff when the restart budget
  /// is exhausted.
  MultiGraph sample(BitSource& src);

  Sampler(const Sampler&) = delete;
  Sampler& operator=(const Sampler&) = delete;
  Sampler(Sampler&&) = default;

  const ParameterSet& params() const { return *params_; }
  const SamplerConfig& config() const { return config_; }
  std::optional<std::uint64_t> restart_limit() const { return limit_; }
  const DriverStats& stats() const { return stats_; }
  const GenStats& gen_stats() const { return gen_->stats(); }
  std::uint64_t simple_attempts() const { return simple_.attempts(); }
  /// Builds (on first use) and returns the Brute totals.
  BruteRunner& brute();

  /// Counters as a JSON object.
  std::string stats_json() const;

 private:
  std::shared_ptr<const ParameterSet> params_;  // address shared with runners
  SamplerConfig config_;
  std::optional<std::uint64_t> limit_;
  SimpleGraphSampler simple_;
  std::unique_ptr<GenRunner> gen_;
  std::unique_ptr<Counter> counter_;
  std::unique_ptr<BruteRunner> brute_;
  DriverStats stats_;
};

/// Checks realisability, builds honest parameters and a sampler for a
/// contingency-table instance. Throws NotBigraphical when a simple seed
/// graph is required but none exists.
Sampler make_table_sampler(const Marginals& marginals, SamplerConfig config = {},
                           const Rational& eps_min = Rational(1, 8));

/// Ceil(M ln M), the default approximate-mode restart budget.
std::uint64_t default_restart_budget(std::int64_t M);

}  // namespace ctgen
