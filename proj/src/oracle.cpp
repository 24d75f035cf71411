#include "ctgen/oracle.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <numeric>

#include "ctgen/error.hpp"
#include "ctgen/gen.hpp"

namespace ctgen {

std::vector<Matrix> enumerate_tables(std::span<const std::int64_t> rows,
                                     std::span<const std::int64_t> cols,
                                     std::size_t cap) {
  const std::size_t m = rows.size(), n = cols.size();
  std::vector<Matrix> out;
  if (std::accumulate(rows.begin(), rows.end(), std::int64_t{0}) !=
      std::accumulate(cols.begin(), cols.end(), std::int64_t{0}))
    return out;
  Matrix cur(m, std::vector<std::int64_t>(n, 0));
  std::vector<std::int64_t> col_left(cols.begin(), cols.end());
  std::function<void(std::size_t, std::size_t, std::int64_t)> rec =
      [&](std::size_t i, std::size_t j, std::int64_t row_left) {
        if (i == m) {
          if (out.size() >= cap) fail(ErrorCode::TooLarge, "enumeration cap reached");
          out.push_back(cur);
          return;
        }
        if (j == n) {
          if (row_left == 0) rec(i + 1, 0, i + 1 < m ? rows[i + 1] : 0);
          return;
        }
        std::int64_t room = 0;
        for (std::size_t k = j + 1; k < n; ++k) room += col_left[k];
        const std::int64_t hi = std::min(row_left, col_left[j]);
        for (std::int64_t v = std::max<std::int64_t>(0, row_left - room); v <= hi; ++v) {
          cur[i][j] = v;
          col_left[j] -= v;
          rec(i, j + 1, row_left - v);
          col_left[j] += v;
        }
        cur[i][j] = 0;
      };
  if (m == 0) {
    if (n == 0) out.push_back(cur);
    return out;
  }
  rec(0, 0, rows[0]);
  return out;
}

std::vector<Matrix> enumerate_loopless(std::span<const std::int64_t> degrees,
                                       std::size_t cap) {
  const std::size_t n = degrees.size();
  std::vector<Matrix> out;
  Matrix cur(n, std::vector<std::int64_t>(n, 0));
  std::vector<std::int64_t> left(degrees.begin(), degrees.end());
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t a,
                                                          std::size_t b) {
    if (a + 1 >= n) {
      if (n == 0 || left[n - 1] == 0) {
        if (out.size() >= cap) fail(ErrorCode::TooLarge, "enumeration cap reached");
        out.push_back(cur);
      }
      return;
    }
    if (b == n) {
      if (left[a] == 0) rec(a + 1, a + 2);
      return;
    }
    std::int64_t room = 0;
    for (std::size_t k = b + 1; k < n; ++k) room += left[k];
    const std::int64_t hi = std::min(left[a], left[b]);
    for (std::int64_t v = std::max<std::int64_t>(0, left[a] - room); v <= hi; ++v) {
      cur[a][b] = cur[b][a] = v;
      left[a] -= v;
      left[b] -= v;
      rec(a, b + 1);
      left[a] += v;
      left[b] += v;
    }
    cur[a][b] = cur[b][a] = 0;
  };
  rec(0, 1);
  return out;
}

std::vector<std::int64_t> stratum_of(const Matrix& cells, Topology topology,
                                     int delta) {
  std::vector<std::int64_t> key(static_cast<std::size_t>(std::max(delta - 1, 0)), 0);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::size_t start = topology == Topology::Loopless ? i + 1 : 0;
    for (std::size_t j = start; j < cells[i].size(); ++j) {
      const auto k = cells[i][j];
      if (k >= 2) {
        if (k > delta) fail(ErrorCode::InvalidArgument, "cell exceeds delta");
        ++key[k - 2];
      }
    }
  }
  while (!key.empty() && key.back() == 0) key.pop_back();
  return key;
}

Census stratum_census(const std::vector<Matrix>& tables, Topology topology,
                      int delta) {
  Census c;
  for (const auto& t : tables) ++c[stratum_of(t, topology, delta)];
  return c;
}

std::int64_t stratum_total(const std::vector<std::int64_t>& key) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < key.size(); ++i)
    s += static_cast<std::int64_t>(i + 2) * key[i];
  return s;
}

bool precedes(const std::vector<std::int64_t>& a,
              const std::vector<std::int64_t>& b) {
  const std::size_t L = std::max(a.size(), b.size());
  std::vector<std::int64_t> x(a), y(b);
  x.resize(L, 0);
  y.resize(L, 0);
  // Position p holds multiplicity p + 2; the top level of the zero vector is 2.
  std::size_t top = 0;
  for (std::size_t p = 0; p < L; ++p)
    if (x[p] > 0) top = p;
  for (std::size_t p = 0; p < top; ++p)
    if (x[p] != y[p]) return false;
  return x < y;
}

std::uint64_t plus_count(const Census& census,
                         const std::vector<std::int64_t>& m, std::int64_t t0) {
  std::uint64_t total = 0;
  for (const auto& [key, count] : census)
    if (stratum_total(key) < t0 && precedes(m, key)) total += count;
  return total;
}

ChiSquareResult chi_square(std::span<const std::uint64_t> observed,
                           std::span<const double> expected) {
  if (observed.size() != expected.size())
    fail(ErrorCode::InvalidArgument, "observed and expected sizes differ");
  const double n = static_cast<double>(
      std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  ChiSquareResult r;
  std::size_t used = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = n * expected[i];
    if (expected[i] == 0) {
      if (observed[i] != 0) {
        r.statistic = INFINITY;
        r.p_value = 0;
      }
      continue;
    }
    if (e < 5)
      fail(ErrorCode::InsufficientSamples,
           "expected count below 5 in cell " + std::to_string(i));
    const double d = static_cast<double>(observed[i]) - e;
    r.statistic += d * d / e;
    r.tv_distance += std::abs(static_cast<double>(observed[i]) / n - expected[i]);
    ++used;
  }
  r.tv_distance /= 2;
  r.dof = used > 0 ? used - 1 : 0;
  if (r.p_value != 0)
    r.p_value = r.dof == 0 ? 1.0
                           : boost::math::gamma_q(r.dof / 2.0, r.statistic / 2.0);
  return r;
}

ChiSquareResult chi_square_uniform(std::span<const std::uint64_t> observed) {
  std::vector<double> p(observed.size(),
                        observed.empty() ? 0.0 : 1.0 / static_cast<double>(observed.size()));
  return chi_square(observed, p);
}

std::uint64_t count_forward_switchings(const MultiGraph& g, int s) {
  std::uint64_t count = 0;
  SwitchingAnchor anchor;
  anchor.s = s;
  anchor.vertices.assign(static_cast<std::size_t>(2 * (s + 1)), 0);
  std::vector<char> used_u, used_v;
  const int V = g.vertex_count();
  // Enumerate ordered tuples of distinct points around each centre.
  std::function<void(int, int)> rec = [&](int side, int i) {
    const Vertex c = anchor.vertices[side];
    const auto pts = g.points(c);
    auto& used = side == 0 ? used_u : used_v;
    if (i == s) {
      if (side == 0) {
        rec(1, 0);
      } else if (validate_anchor(g, anchor)) {
        ++count;
      }
      return;
    }
    for (std::size_t p = 0; p < pts.size(); ++p) {
      if (used[p]) continue;
      used[p] = 1;
      anchor.vertices[2 * (i + 1) + side] = pts[p];
      rec(side, i + 1);
      used[p] = 0;
    }
  };
  for (Vertex u1 = 0; u1 < V; ++u1) {
    if (!g.in_left(u1) || g.degree(u1) < s) continue;
    for (Vertex v1 = 0; v1 < V; ++v1) {
      if (g.is_bipartite() ? g.in_left(v1) : false) continue;
      if (g.degree(v1) < s) continue;
      anchor.vertices[0] = u1;
      anchor.vertices[1] = v1;
      used_u.assign(g.points(u1).size(), 0);
      used_v.assign(g.points(v1).size(), 0);
      rec(0, 0);
    }
  }
  return count;
}

namespace {

/// Ordered simple edges (u, v) compatible with the first i anchor pairs.
std::vector<std::pair<Vertex, Vertex>> compatible_edges(
    const MultiGraph& g, const std::vector<Vertex>& anchor_prefix) {
  std::vector<std::pair<Vertex, Vertex>> out;
  const Vertex u1 = anchor_prefix[0], v1 = anchor_prefix[1];
  const int V = g.vertex_count();
  for (Vertex u = 0; u < V; ++u) {
    if (g.is_bipartite() && g.in_left(u)) continue;
    for (Vertex v = 0; v < V; ++v) {
      if (g.multiplicity(u, v) != 1) continue;
      if (std::find(anchor_prefix.begin(), anchor_prefix.end(), u) != anchor_prefix.end() ||
          std::find(anchor_prefix.begin(), anchor_prefix.end(), v) != anchor_prefix.end())
        continue;
      if (g.multiplicity(u1, u) != 0 || g.multiplicity(v1, v) != 0) continue;
      out.emplace_back(u, v);
    }
  }
  return out;
}

}  // namespace

std::vector<std::int64_t> reference_b_factors(const MultiGraph& g,
                                              const SwitchingAnchor& anchor) {
  const int s = anchor.s;
  std::vector<std::int64_t> out;
  out.push_back(g.is_bipartite() ? g.registry_size(s) : 2 * g.registry_size(s));
  for (int i = 1; i <= s; ++i) {
    const std::vector<Vertex> prefix(anchor.vertices.begin(),
                                     anchor.vertices.begin() + 2 * i);
    out.push_back(static_cast<std::int64_t>(compatible_edges(g, prefix).size()));
  }
  return out;
}

ParameterSet forced_parameter_fixture(const DegreeData& data, std::int64_t t0,
                                      FixtureReport* report, std::size_t cap) {
  if (t0 <= 0) fail(ErrorCode::FixtureInvalid, "forced t0 must be positive");
  if (data.delta < 2) fail(ErrorCode::FixtureInvalid, "fixture needs Delta >= 2");
  FixtureReport local;
  FixtureReport& rep = report ? *report : local;
  const int delta = data.delta;
  const std::vector<Matrix> tables =
      data.is_bipartite() ? enumerate_tables(data.left, data.right, cap)
                          : enumerate_loopless(data.left, cap);
  const Census census = stratum_census(tables, data.topology, delta);
  rep.graphs = tables.size();
  for (const auto& [key, count] : census) {
    if (stratum_total(key) >= t0) rep.R += count;
    if (key.empty()) rep.H0 = count;
  }
  if (rep.H0 == 0) fail(ErrorCode::FixtureInvalid, "instance has no simple realisation");

  std::vector<MultiGraph> graphs;
  graphs.reserve(tables.size());
  for (const auto& t : tables)
    graphs.push_back(data.is_bipartite() ? MultiGraph::from_matrix(data, t)
                                         : MultiGraph::from_adjacency(data, t));

  // Exact minima of the b-factors over every anchored multigraph.
  LowerBoundTable lower;
  for (const auto& g : graphs) {
    const auto key = g.stratum().key();
    if (key.empty() || g.stratum().total() >= t0) continue;
    for (int k = 2; k <= delta; ++k) {
      if (g.stratum()[k] == 0) continue;
      auto& mins = lower[{k, key}];
      std::vector<std::int64_t> best(static_cast<std::size_t>(k),
                                     std::numeric_limits<std::int64_t>::max());
      std::function<void(std::vector<Vertex>&, int)> rec =
          [&](std::vector<Vertex>& prefix, int i) {
            const auto edges = compatible_edges(g, prefix);
            ++rep.anchors_checked;
            best[i - 1] = std::min<std::int64_t>(best[i - 1],
                                                 static_cast<std::int64_t>(edges.size()));
            if (i == k) return;
            for (const auto& [u, v] : edges) {
              prefix.push_back(u);
              prefix.push_back(v);
              rec(prefix, i + 1);
              prefix.resize(prefix.size() - 2);
            }
          };
      for (const auto& e : g.edges()) {
        if (e.k != k) continue;
        std::vector<std::pair<Vertex, Vertex>> roots;
        if (g.is_bipartite())
          roots.emplace_back(e.a, e.b);  // row end first
        else {
          roots.emplace_back(e.a, e.b);
          roots.emplace_back(e.b, e.a);
        }
        for (const auto& [u1, v1] : roots) {
          std::vector<Vertex> prefix{u1, v1};
          rec(prefix, 1);
        }
      }
      std::vector<Rational> as_rational;
      for (std::size_t i = 0; i < best.size(); ++i) {
        if (best[i] <= 0)
          fail(ErrorCode::FixtureInvalid,
               "an anchored multigraph cannot be extended (k=" + std::to_string(k) + ")");
        as_rational.emplace_back(static_cast<long>(best[i]));
      }
      if (mins.empty()) {
        mins = as_rational;
      } else {
        for (std::size_t i = 0; i < mins.size(); ++i)
          mins[i] = std::min(mins[i], as_rational[i]);
      }
    }
  }
  // Strata below t0 with no members: moving into them has probability 0.
  std::vector<std::int64_t> m(static_cast<std::size_t>(delta - 1), 0);
  std::function<void(int, std::int64_t)> strata = [&](int k, std::int64_t used) {
    if (k > delta) {
      auto key = m;
      while (!key.empty() && key.back() == 0) key.pop_back();
      if (key.empty() || census.count(key)) return;
      for (int j = 2; j <= delta; ++j)
        if (m[j - 2] > 0) lower[{j, key}] = {};
      return;
    }
    for (std::int64_t c = 0; used + k * c < t0; ++c) {
      m[k - 2] = c;
      strata(k + 1, used + k * c);
    }
    m[k - 2] = 0;
  };
  strata(2, 0);

  Rational B_hat = 0;
  if (rep.R != 0) {
    B_hat = Rational(BigInt(2 * rep.R), rep.H0);
    B_hat.canonicalize();
  }
  std::optional<ParameterSet> params;
  try {
    params.emplace(ParameterSet::forced(data, t0, lower, B_hat));
  } catch (const Error& e) {
    fail(ErrorCode::FixtureInvalid, std::string("parameters undefined: ") + e.what());
  }
  const ParameterSet& p = *params;

  try {
    for (const auto& [key, count] : census) {
      if (stratum_total(key) >= t0) continue;
      ++rep.strata_checked;
      const StratumIndex idx(delta, key);
      const Beta beta = p.beta(idx);
      // Transition masses at most one.
      Rational mass = 0;
      for (int s = idx.top(); s <= delta; ++s) mass += p.transition_prob(s, idx);
      if (mass > 1)
        fail(ErrorCode::FixtureInvalid, "transition probabilities exceed one");
      // beta dominates the relative size of the strata above.
      Rational ratio(static_cast<long>(plus_count(census, key, t0)),
                     static_cast<long>(count));
      ratio.canonicalize();
      if (std::get<Rational>(beta) < ratio)
        fail(ErrorCode::FixtureInvalid, "beta below |H+|/|H| at a stratum");
    }
    // Forward switching counts never exceed f_bar.
    for (const auto& g : graphs) {
      const StratumIndex& idx = g.stratum();
      if (idx.total() >= t0) continue;
      for (int s = idx.top(); s <= delta; ++s) {
        if (sgn(p.transition_prob(s, idx)) == 0) continue;
        if (BigInt(static_cast<unsigned long>(count_forward_switchings(g, s))) > p.f_bar(s))
          fail(ErrorCode::FixtureInvalid, "forward switchings exceed f_bar");
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::FixtureInvalid) throw;
    fail(ErrorCode::FixtureInvalid, std::string("verification failed: ") + e.what());
  }
  // R / |H_0| <= B holds with equality up to the factor 2 chosen above.
  rep.notes.push_back("B = 2R/|H0| = " + B_hat.get_str());
  return p;
}

}  // namespace ctgen
