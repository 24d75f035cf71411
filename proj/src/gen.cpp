#include "ctgen/gen.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "ctgen/error.hpp"

namespace ctgen {

const char* to_string(GenResult r) {
  switch (r) {
    case GenResult::Output: return "output";
    case GenResult::FReject: return "f-reject";
    case GenResult::BReject: return "b-reject";
    case GenResult::BetaReject: return "beta-reject";
  }
  return "unknown";
}

CentrePicker::CentrePicker(const std::vector<std::int64_t>& degrees,
                           int first_vertex, int s) {
  BigInt total = 0;
  std::vector<BigInt> weights;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    BigInt w = falling_factorial(degrees[i], s);
    if (w == 0) continue;
    vertices_.push_back(first_vertex + static_cast<Vertex>(i));
    total += w;
    weights.push_back(w);
  }
  if (total < BigInt(std::numeric_limits<std::int64_t>::max())) {
    std::uint64_t acc = 0;
    for (const auto& w : weights) {
      acc += w.get_ui();
      cumulative_.push_back(acc);
    }
  } else {
    BigInt acc = 0;
    for (const auto& w : weights) {
      acc += w;
      big_cumulative_.push_back(acc);
    }
  }
}

Vertex CentrePicker::draw(BitSource& src) const {
  if (vertices_.empty())
    fail(ErrorCode::InvariantViolation, "no vertex carries an s-star");
  std::size_t idx;
  if (!cumulative_.empty()) {
    const std::uint64_t u = src.uniform_below(cumulative_.back());
    idx = static_cast<std::size_t>(
        std::upper_bound(cumulative_.begin(), cumulative_.end(), u) -
        cumulative_.begin());
  } else {
    const BigInt u = src.uniform_below(big_cumulative_.back());
    idx = static_cast<std::size_t>(
        std::upper_bound(big_cumulative_.begin(), big_cumulative_.end(), u) -
        big_cumulative_.begin());
  }
  return vertices_[idx];
}

GenPlan::GenPlan(const ParameterSet& params) : params_(&params) {
  const auto& data = params.data();
  const int delta = params.delta();
  left_.resize(static_cast<std::size_t>(std::max(delta, 2)) + 1);
  right_.resize(left_.size());
  for (int s = 2; s <= delta; ++s) {
    left_[s] = CentrePicker(data.left, 0, s);
    right_[s] = data.is_bipartite()
                    ? CentrePicker(data.right, static_cast<int>(data.left.size()), s)
                    : left_[s];
  }
  if (params.t0() <= 0) return;
  const std::int64_t len = (params.t0() + 1) / 2;
  level_two_.reserve(static_cast<std::size_t>(len));
  StratumIndex m(delta);
  for (std::int64_t m2 = 0; m2 < len; ++m2) {
    level_two_.push_back(build_step(m));
    m.increment(2);
  }
}

StratumStep GenPlan::build_step(const StratumIndex& m) const {
  const ParameterSet& p = *params_;
  const Beta beta = p.beta(m);
  if (is_neg_one(beta))
    fail(ErrorCode::InvariantViolation, "Gen reached a stratum beyond t0");
  StratumStep step;
  step.output_prob = 1 / (1 + std::get<Rational>(beta));
  step.first_s = m.top();
  const int delta = p.delta();
  std::vector<Rational> probs;
  Rational sum = 0;
  step.lower.resize(static_cast<std::size_t>(delta) + 1);
  const Rational M(p.M());
  for (int s = step.first_s; s <= delta; ++s) {
    const Rational q = p.transition_prob(s, m);
    probs.push_back(q);
    sum += q;
    if (sgn(q) == 0) continue;
    const StratumIndex next = m.plus(s);
    for (int i = 1; i <= s; ++i) step.lower[s].push_back(p.b_under(s, next, i));
    if (!p.forced_fixture() && sgn(p.eps()) > 0) {
      // f_bar / b_under <= S_k T_k / ((m_k + 1) M^k eps^k)
      const Rational bound =
          Rational(p.data().S[s] * p.data().T[s]) /
          (Rational(m[s] + 1) * pow(M, s) * pow(p.eps(), s));
      if (p.switch_ratio(s, m) > bound) step.ratio_ok = false;
    }
  }
  step.mass_ok = sum <= 1;
  if (step.mass_ok) step.transitions = CategoricalTable(probs);
  return step;
}

const StratumStep& GenPlan::step(const StratumIndex& m) {
  if (m.top() == 2) {
    const auto m2 = static_cast<std::size_t>(m[2]);
    if (m2 >= level_two_.size())
      fail(ErrorCode::InvariantViolation, "Gen reached a stratum beyond t0");
    return level_two_[m2];
  }
  auto key = m.key();
  auto it = higher_.find(key);
  if (it == higher_.end()) it = higher_.emplace(std::move(key), build_step(m)).first;
  return it->second;
}

std::optional<SwitchingAnchor> sample_star_pair(const MultiGraph& g, int s,
                                                const GenPlan& plan,
                                                BitSource& src) {
  SwitchingAnchor anchor;
  anchor.s = s;
  anchor.vertices.assign(static_cast<std::size_t>(2 * (s + 1)), 0);
  const Vertex centres[2] = {plan.left_picker(s).draw(src),
                             plan.right_picker(s).draw(src)};
  std::vector<std::size_t> idx;
  for (int side = 0; side < 2; ++side) {
    const Vertex c = centres[side];
    const auto pts = g.points(c);
    idx.resize(pts.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    anchor.vertices[side] = c;
    for (int i = 0; i < s; ++i) {
      const std::size_t j =
          i + static_cast<std::size_t>(src.uniform_below(idx.size() - i));
      std::swap(idx[i], idx[j]);
      anchor.vertices[2 * (i + 1) + side] = pts[idx[i]];
    }
  }
  if (!validate_anchor(g, anchor)) return std::nullopt;
  return anchor;
}

bool validate_anchor(const MultiGraph& g, const SwitchingAnchor& anchor) {
  const auto& vs = anchor.vertices;
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      if (vs[i] == vs[j]) return false;
  const Vertex u1 = anchor.u(1), v1 = anchor.v(1);
  if (g.is_bipartite() && (!g.in_left(u1) || g.in_left(v1))) return false;
  if (g.multiplicity(u1, v1) != 0) return false;
  for (int i = 2; i <= anchor.s + 1; ++i) {
    const Vertex ui = anchor.u(i), vi = anchor.v(i);
    if (g.multiplicity(u1, ui) != 1 || g.multiplicity(v1, vi) != 1) return false;
    if (g.multiplicity(ui, vi) != 0) return false;
  }
  return true;
}

std::vector<std::int64_t> BFactorWorkspace::compute(
    const MultiGraph& g, const SwitchingAnchor& anchor, std::uint64_t* ops) {
  const auto V = static_cast<std::size_t>(g.vertex_count());
  if (in_a_.size() != V || epoch_ == std::numeric_limits<std::uint32_t>::max()) {
    in_a_.assign(V, 0);
    in_b_.assign(V, 0);
    epoch_ = 0;
  }
  ++epoch_;
  const bool bip = g.is_bipartite();
  const int s = anchor.s;
  std::int64_t count_a = 0, count_b = 0, cross = 0;
  std::uint64_t scanned = 0;

  // Ordered simple edges (u, v) are excluded when u is in A or v is in B.
  auto add = [&](Vertex w, std::vector<std::uint32_t>& mine,
                 const std::vector<std::uint32_t>& other, std::int64_t& count) {
    if (mine[w] == epoch_) return;
    mine[w] = epoch_;
    for (Vertex z : g.points(w)) {
      ++scanned;
      if (g.multiplicity(w, z) != 1) continue;
      ++count;
      if (other[z] == epoch_) ++cross;
    }
  };
  auto add_a = [&](Vertex w) { add(w, in_a_, in_b_, count_a); };
  auto add_b = [&](Vertex w) { add(w, in_b_, in_a_, count_b); };
  // In the bipartite case u ranges over columns and v over rows.
  auto add_anchor_vertex = [&](Vertex w) {
    if (!bip || !g.in_left(w)) add_a(w);
    if (!bip || g.in_left(w)) add_b(w);
  };

  const std::int64_t ordered =
      bip ? g.simple_edge_count() : 2 * g.simple_edge_count();
  std::vector<std::int64_t> factors;
  factors.reserve(static_cast<std::size_t>(s) + 1);
  factors.push_back(bip ? g.registry_size(s) : 2 * g.registry_size(s));

  const Vertex u1 = anchor.u(1), v1 = anchor.v(1);
  add_anchor_vertex(u1);
  add_anchor_vertex(v1);
  for (Vertex z : g.points(u1)) add_a(z);
  for (Vertex z : g.points(v1)) add_b(z);
  scanned += g.points(u1).size() + g.points(v1).size();
  factors.push_back(ordered - (count_a + count_b - cross));
  for (int i = 2; i <= s; ++i) {
    add_anchor_vertex(anchor.u(i));
    add_anchor_vertex(anchor.v(i));
    factors.push_back(ordered - (count_a + count_b - cross));
  }
  if (ops) *ops += scanned;
  return factors;
}

std::vector<std::int64_t> b_factors(const MultiGraph& g,
                                    const SwitchingAnchor& anchor) {
  BFactorWorkspace ws;
  return ws.compute(g, anchor);
}

bool b_reject(std::span<const std::int64_t> factors,
              std::span<const Rational> lower, std::int64_t factor0_lower,
              BitSource& src) {
  if (factors.size() != lower.size() + 1)
    fail(ErrorCode::InvalidArgument, "b-factor count mismatch");
  if (factors[0] != factor0_lower)
    fail(ErrorCode::InvariantViolation, "multiple-edge count disagrees with stratum");
  Rational accept = 1;
  for (std::size_t i = 1; i < factors.size(); ++i) {
    const Rational f(static_cast<long>(factors[i]));
    if (f < lower[i - 1] || sgn(f) <= 0)
      fail(ErrorCode::InvariantViolation,
           "b-factor " + std::to_string(factors[i]) + " below lower bound " +
               lower[i - 1].get_str());
    accept *= lower[i - 1] / f;
  }
  return !bernoulli(accept, src);
}

GenRunner::GenRunner(const ParameterSet& params) : plan_(params) {}

GenResult GenRunner::run(MultiGraph& g, BitSource& src) {
  const ParameterSet& p = plan_.params();
  if (p.t0() <= 0) fail(ErrorCode::InvalidArgument, "Gen needs t0 > 0");
  ++stats_.runs;
  std::int64_t top_m2 = g.stratum()[2];
  auto finish = [&](GenResult r) {
    ++stats_.max_m2[top_m2];
    switch (r) {
      case GenResult::Output: ++stats_.outputs; break;
      case GenResult::FReject: ++stats_.f_rejects; break;
      case GenResult::BReject: ++stats_.b_rejects; break;
      case GenResult::BetaReject: ++stats_.beta_rejects; break;
    }
    return r;
  };
  const std::int64_t M = p.M();
  for (;;) {
    const StratumIndex m = g.stratum();
    const StratumStep& step = plan_.step(m);
    ++stats_.mass_checks;
    ++stats_.ratio_checks;
    if (!step.ratio_ok) ++stats_.ratio_violations;
    if (!step.mass_ok) {
      ++stats_.mass_violations;
      fail(ErrorCode::InvariantViolation, "transition probabilities exceed one");
    }
    if (bernoulli(step.output_prob, src)) return finish(GenResult::Output);
    const auto pick = step.transitions.draw(src);
    if (!pick) return finish(GenResult::BetaReject);
    const int s = step.first_s + static_cast<int>(*pick);
    ++stats_.iterations;
    const auto anchor = sample_star_pair(g, s, plan_, src);
    if (!anchor) return finish(GenResult::FReject);
    g.apply_switching(*anchor);
    top_m2 = std::max(top_m2, g.stratum()[2]);
    const auto factors = workspace_.compute(g, *anchor, &stats_.graph_ops);
    const auto& lower = step.lower[s];
    const std::int64_t lower0 =
        g.is_bipartite() ? g.stratum()[s] : 2 * g.stratum()[s];
    ++stats_.bound_checks;
    bool ok = factors[0] == lower0;
    for (int i = 1; i <= s; ++i) {
      const Rational f(static_cast<long>(factors[i]));
      if (f < lower[i - 1] || factors[i] > M) ok = false;
    }
    if (!ok) ++stats_.bound_violations;
    if (b_reject(factors, lower, lower0, src)) return finish(GenResult::BReject);
  }
}

}  // namespace ctgen
