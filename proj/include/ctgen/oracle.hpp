#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ctgen/exactprob.hpp"
#include "ctgen/multigraph.hpp"
#include "ctgen/params.hpp"

namespace ctgen {

/// All nonnegative integer matrices with the given row and column sums, in
/// lexicographic order of their row-major cells. Throws TooLarge past cap.
std::vector<Matrix> enumerate_tables(std::span<const std::int64_t> rows,
                                     std::span<const std::int64_t> cols,
                                     std::size_t cap = 1000000);

/// All loopless multigraphs with the given degrees, as symmetric adjacency
/// matrices. Throws TooLarge past cap.
std::vector<Matrix> enumerate_loopless(std::span<const std::int64_t> degrees,
                                       std::size_t cap = 1000000);

/// Stratum index of a table (or of an adjacency matrix when loopless), as
/// counts for multiplicities 2..delta.
std::vector<std::int64_t> stratum_of(const Matrix& cells, Topology topology,
                                     int delta);

using Census = std::map<std::vector<std::int64_t>, std::uint64_t>;

Census stratum_census(const std::vector<Matrix>& tables, Topology topology,
                      int delta);

/// S(m) for a stratum key.
std::int64_t stratum_total(const std::vector<std::int64_t>& key);

/// The order on strata along which Gen moves: a precedes b when they agree
/// below a's top level and a is lexicographically smaller.
bool precedes(const std::vector<std::int64_t>& a,
              const std::vector<std::int64_t>& b);

/// |H+_m|: members of strata b with m preceding b and S(b) < t0.
std::uint64_t plus_count(const Census& census,
                         const std::vector<std::int64_t>& m, std::int64_t t0);

struct ChiSquareResult {
  double statistic = 0;
  std::size_t dof = 0;
  double p_value = 1;
  double tv_distance = 0;
};

/// Pearson goodness of fit of observed counts against exact probabilities.
/// Throws InsufficientSamples when an expected count is below 5.
ChiSquareResult chi_square(std::span<const std::uint64_t> observed,
                           std::span<const double> expected);
ChiSquareResult chi_square_uniform(std::span<const std::uint64_t> observed);

/// Number of valid s-switchings on g (ordered star pairs passing
/// validate_anchor), by exhaustive enumeration.
std::uint64_t count_forward_switchings(const MultiGraph& g, int s);

/// b-factors of an anchored graph computed straight from the definition by
/// scanning every ordered vertex pair.
std::vector<std::int64_t> reference_b_factors(const MultiGraph& g,
                                              const SwitchingAnchor& anchor);

struct FixtureReport {
  std::uint64_t graphs = 0;
  std::uint64_t anchors_checked = 0;
  std::uint64_t strata_checked = 0;
  BigInt R = 0;
  BigInt H0 = 0;
  std::vector<std::string> notes;
};

/// Parameters for a tiny instance with t0 pinned, b lower bounds replaced
/// by exact minima over every anchored multigraph, and B set to
/// 2 R / |H_0|. Every inequality Gen and Brute rely on is then checked by
/// exhaustive enumeration; throws FixtureInvalid if one fails.
ParameterSet forced_parameter_fixture(const DegreeData& data, std::int64_t t0,
                                      FixtureReport* report = nullptr,
                                      std::size_t cap = 200000);

}  // namespace ctgen
