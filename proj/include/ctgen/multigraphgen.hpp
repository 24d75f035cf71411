#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ctgen/driver.hpp"

namespace ctgen {

/// Validated degree sequence for loopless multigraphs, zeros removed.
class DegreeSequence {
 public:
  /// Throws Empty when every entry is zero, OddSum when the total is odd,
  /// InvalidArgument for negative entries.
  static DegreeSequence validate(std::span<const std::int64_t> raw);

  const std::vector<std::int64_t>& degrees() const { return degrees_; }
  const std::vector<std::int64_t>& raw() const { return raw_; }
  const std::vector<std::size_t>& index() const { return index_; }
  std::int64_t total() const { return total_; }
  int max_degree() const { return delta_; }

 private:
  std::vector<std::int64_t> raw_, degrees_;
  std::vector<std::size_t> index_;
  std::int64_t total_ = 0;
  int delta_ = 0;
};

/// Erdos-Gallai test: is there a simple graph with these degrees?
bool is_graphical(std::span<const std::int64_t> degrees);

/// A loopless multigraph exists iff the sum is even and the largest degree
/// is at most the sum of the others.
bool is_multigraphical(std::span<const std::int64_t> degrees);

/// Sampler for loopless multigraphs. Throws NotGraphical when a simple
/// seed graph is required but none exists, or when no loopless
/// multigraph exists at all.
Sampler make_multigraph_sampler(const DegreeSequence& seq,
                                SamplerConfig config = {},
                                const Rational& eps_min = Rational(1, 8));

/// Adjacency matrix over the raw (unstripped) vertex order.
Matrix inflate_adjacency(const Matrix& stripped, const DegreeSequence& seq);

}  // namespace ctgen
