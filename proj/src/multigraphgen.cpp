#include "ctgen/multigraphgen.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "ctgen/error.hpp"

namespace ctgen {

DegreeSequence DegreeSequence::validate(std::span<const std::int64_t> raw) {
  DegreeSequence d;
  d.raw_.assign(raw.begin(), raw.end());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] < 0) fail(ErrorCode::InvalidArgument, "negative degree");
    if (raw[i] == 0) continue;
    d.degrees_.push_back(raw[i]);
    d.index_.push_back(i);
    d.total_ += raw[i];
    d.delta_ = std::max<int>(d.delta_, static_cast<int>(raw[i]));
  }
  if (d.degrees_.empty()) fail(ErrorCode::Empty, "all degrees are zero");
  if (d.total_ % 2 != 0) fail(ErrorCode::OddSum, "degree sum is odd");
  return d;
}

bool is_graphical(std::span<const std::int64_t> degrees) {
  std::vector<std::int64_t> d(degrees.begin(), degrees.end());
  std::sort(d.begin(), d.end(), std::greater<>());
  const std::int64_t total = std::accumulate(d.begin(), d.end(), std::int64_t{0});
  if (total % 2 != 0) return false;
  const auto n = static_cast<std::int64_t>(d.size());
  std::int64_t prefix = 0;
  for (std::int64_t k = 1; k <= n; ++k) {
    prefix += d[k - 1];
    std::int64_t rhs = k * (k - 1);
    for (std::int64_t i = k; i < n; ++i) rhs += std::min(d[i], k);
    if (prefix > rhs) return false;
  }
  return true;
}

bool is_multigraphical(std::span<const std::int64_t> degrees) {
  const std::int64_t total =
      std::accumulate(degrees.begin(), degrees.end(), std::int64_t{0});
  if (total % 2 != 0) return false;
  const std::int64_t top =
      degrees.empty() ? 0 : *std::max_element(degrees.begin(), degrees.end());
  return top <= total - top;
}

Sampler make_multigraph_sampler(const DegreeSequence& seq, SamplerConfig config,
                                const Rational& eps_min) {
  const DegreeData data = DegreeData::loopless(seq.degrees());
  if (!is_multigraphical(seq.degrees()))
    fail(ErrorCode::NotGraphical, "no loopless multigraph has these degrees");
  ParameterSet params = ParameterSet::build(data, eps_min);
  if ((params.t0() > 0 || data.delta <= 1) && !is_graphical(seq.degrees()))
    fail(ErrorCode::NotGraphical, "degree sequence has no simple realisation");
  return Sampler(std::move(params), config);
}

Matrix inflate_adjacency(const Matrix& stripped, const DegreeSequence& seq) {
  return inflate(stripped, seq.raw().size(), seq.index(), seq.raw().size(),
                 seq.index());
}

}  // namespace ctgen
