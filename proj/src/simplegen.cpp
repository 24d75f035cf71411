#include "ctgen/simplegen.hpp"

#include <algorithm>
#include <utility>

namespace ctgen {

SimpleGraphSampler::SimpleGraphSampler(const DegreeData& data) : data_(data) {
  const int left = static_cast<int>(data.left.size());
  for (int v = 0; v < left; ++v)
    for (std::int64_t k = 0; k < data.left[v]; ++k) left_points_.push_back(v);
  if (data.is_bipartite()) {
    for (std::size_t j = 0; j < data.right.size(); ++j)
      for (std::int64_t k = 0; k < data.right[j]; ++k)
        right_points_.push_back(left + static_cast<Vertex>(j));
  } else {
    right_points_ = left_points_;
  }
  partners_.resize(data.vertex_count());
  for (std::size_t v = 0; v < partners_.size(); ++v)
    partners_[v].reserve(static_cast<std::size_t>(data.delta));
}

bool SimpleGraphSampler::try_pairing(BitSource& src) {
  ++attempts_;
  for (auto& p : partners_) p.clear();
  auto& pts = right_points_;
  const std::size_t n = pts.size();
  auto link = [&](Vertex a, Vertex b) {
    if (a == b) return false;
    auto& pa = partners_[a];
    if (std::find(pa.begin(), pa.end(), b) != pa.end()) return false;
    pa.push_back(b);
    partners_[b].push_back(a);
    return true;
  };
  if (data_.is_bipartite()) {
    // Fisher-Yates, pairing left point i with the column point placed at i.
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(src.uniform_below(n - i));
      std::swap(pts[i], pts[j]);
      if (!link(left_points_[i], pts[i])) return false;
    }
    return true;
  }
  // Uniform perfect matching of one point set: consecutive positions of a
  // uniform permutation.
  for (std::size_t i = 0; i + 1 < n; i += 2) {
    for (std::size_t r = i; r <= i + 1; ++r) {
      const std::size_t j = r + static_cast<std::size_t>(src.uniform_below(n - r));
      std::swap(pts[r], pts[j]);
    }
    if (!link(pts[i], pts[i + 1])) return false;
  }
  return true;
}

MultiGraph SimpleGraphSampler::sample(BitSource& src) {
  while (!try_pairing(src)) {
  }
  MultiGraph g(data_);
  for (std::size_t a = 0; a < partners_.size(); ++a)
    for (Vertex b : partners_[a])
      if (static_cast<Vertex>(a) < b) g.add_edge(static_cast<Vertex>(a), b);
  return g;
}

}  // namespace ctgen
