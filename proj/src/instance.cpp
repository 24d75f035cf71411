#include "ctgen/instance.hpp"

#include <algorithm>
#include <numeric>

#include "ctgen/error.hpp"

namespace ctgen {

DegreeData DegreeData::bipartite(const Marginals& marginals) {
  DegreeData d;
  d.topology = Topology::Bipartite;
  d.left = marginals.rows();
  d.right = marginals.cols();
  d.M = marginals.total();
  d.delta = marginals.max_component();
  d.S = factorial_moments(d.left, d.delta);
  d.T = factorial_moments(d.right, d.delta);
  return d;
}

DegreeData DegreeData::loopless(std::span<const std::int64_t> degrees) {
  DegreeData d;
  d.topology = Topology::Loopless;
  for (auto x : degrees) {
    if (x < 0) fail(ErrorCode::InvalidArgument, "negative degree");
    if (x > 0) d.left.push_back(x);
    d.delta = std::max<int>(d.delta, static_cast<int>(x));
  }
  d.M = std::accumulate(d.left.begin(), d.left.end(), std::int64_t{0});
  d.S = factorial_moments(d.left, d.delta);
  d.T = d.S;
  return d;
}

}  // namespace ctgen
