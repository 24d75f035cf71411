#pragma once

#include <cstdint>
#include <vector>

#include "ctgen/exactprob.hpp"
#include "ctgen/instance.hpp"
#include "ctgen/multigraph.hpp"

namespace ctgen {

/// Uniform simple graph with the given degrees, by configuration-model
/// pairing with rejection of multiple edges (and loops, when loopless).
///
/// The caller must ensure a simple realisation exists; otherwise sample()
/// never returns.
class SimpleGraphSampler {
 public:
  explicit SimpleGraphSampler(const DegreeData& data);

  MultiGraph sample(BitSource& src);

  /// Pairings drawn so far, including rejected ones.
  std::uint64_t attempts() const { return attempts_; }

 private:
  bool try_pairing(BitSource& src);

  DegreeData data_;
  std::vector<Vertex> left_points_;
  std::vector<Vertex> right_points_;  // shuffled in place
  std::vector<std::vector<Vertex>> partners_;
  std::uint64_t attempts_ = 0;
};

}  // namespace ctgen
