#include "ctgen/brute.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "ctgen/error.hpp"

namespace ctgen {

namespace {

using Key = std::vector<std::int32_t>;

Key canonical(std::span<const std::int64_t> v) {
  Key out;
  out.reserve(v.size());
  for (auto x : v) {
    if (x < 0) fail(ErrorCode::InvalidArgument, "negative degree");
    if (x > 0) out.push_back(static_cast<std::int32_t>(x));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t sum_of(const Key& k) {
  return std::accumulate(k.begin(), k.end(), std::int64_t{0});
}

Profile single(std::int64_t t) {
  Profile p(static_cast<std::size_t>(t) + 1, 0);
  p[t] = 1;
  return p;
}

Profile convolve(const Profile& a, const Profile& b) {
  if (a.empty() || b.empty()) return {};
  Profile out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (b[j] != 0) out[i + j] += a[i] * b[j];
  }
  return out;
}

void accumulate_into(Profile& acc, const Profile& p, const BigInt& coef) {
  if (p.empty()) return;
  if (acc.size() < p.size()) acc.resize(p.size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != 0) acc[i] += coef * p[i];
}

void trim(Profile& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

const BigInt& factorial(std::size_t n) {
  static thread_local std::vector<BigInt> table{1};
  while (table.size() <= n) table.push_back(table.back() * static_cast<unsigned long>(table.size()));
  return table[n];
}

/// Distinct values of a sorted key with their multiplicities.
struct DegreeClass {
  std::int32_t value;
  std::int32_t count;
};

std::vector<DegreeClass> classes_of(const Key& k) {
  std::vector<DegreeClass> out;
  for (auto x : k) {
    if (!out.empty() && out.back().value == x)
      ++out.back().count;
    else
      out.push_back({x, 1});
  }
  return out;
}

/// One way of dividing each class of `classes` into parts: split[c][j]
/// vertices of class c take the value j (0 <= j <= cap(c)).
using Split = std::vector<std::vector<std::int32_t>>;

/// Calls visit(split, weight) for every division with sum_j j*split[c][j]
/// equal to `target`, where part values are bounded by min(value, bound).
void for_each_split(const std::vector<DegreeClass>& classes, std::int64_t target,
                    std::int64_t bound,
                    const std::function<void(const Split&, std::int64_t)>& visit) {
  const std::size_t C = classes.size();
  std::vector<std::int64_t> max_rest(C + 1, 0);
  for (std::size_t c = C; c-- > 0;)
    max_rest[c] = max_rest[c + 1] +
                  std::min<std::int64_t>(classes[c].value, bound) * classes[c].count;
  Split split(C);
  for (std::size_t c = 0; c < C; ++c)
    split[c].assign(std::min<std::int64_t>(classes[c].value, bound) + 1, 0);

  // Fill class c, value j downward, with `left` vertices still unassigned.
  std::function<void(std::size_t, std::int64_t, std::int32_t, std::int64_t)> rec;
  rec = [&](std::size_t c, std::int64_t j, std::int32_t left, std::int64_t need) {
    if (c == C) {
      if (need == 0) visit(split, target);
      return;
    }
    if (j == 0) {
      split[c][0] = left;
      if (c + 1 == C)
        rec(C, 0, 0, need);
      else
        rec(c + 1, static_cast<std::int64_t>(split[c + 1].size()) - 1,
            classes[c + 1].count, need);
      split[c][0] = 0;
      return;
    }
    // Largest remaining weight achievable from class c at values <= j.
    const std::int64_t most = j * left + max_rest[c + 1];
    if (need > most) return;
    const std::int32_t top = static_cast<std::int32_t>(std::min<std::int64_t>(left, need / j));
    for (std::int32_t k = top; k >= 0; --k) {
      split[c][j] = k;
      rec(c, j - 1, left - k, need - j * k);
    }
    split[c][j] = 0;
  };
  if (C == 0) {
    if (target == 0) visit(split, target);
    return;
  }
  rec(0, static_cast<std::int64_t>(split[0].size()) - 1, classes[0].count, target);
}

BigInt multinomial_weight(const std::vector<DegreeClass>& classes,
                          const Split& split) {
  BigInt w = 1;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    w *= factorial(classes[c].count);
    for (auto k : split[c]) w /= factorial(k);
  }
  return w;
}

bool loop_realisable(const Key& d) {
  if (d.empty()) return true;
  const std::int64_t total = sum_of(d);
  return total % 2 == 0 && d.back() <= total - d.back();
}

}  // namespace

std::size_t Counter::KeyHash::operator()(const Key& k) const noexcept {
  std::size_t h = k.size() * 0x9e3779b97f4a7c15ULL;
  for (auto x : k) h = (h ^ static_cast<std::size_t>(x + 0x7f)) * 0x100000001b3ULL;
  return h;
}

Counter::Counter(std::size_t memo_capacity) : capacity_(memo_capacity) {}

bool Counter::can_store() const { return memo_size() < capacity_; }

void Counter::check_deadline() const {
  if (deadline_ && (evaluations_ & 0xff) == 0 && std::chrono::steady_clock::now() > *deadline_)
    fail(ErrorCode::TooLarge, "counting deadline reached");
}

Profile Counter::bipartite(std::span<const std::int64_t> g,
                           std::span<const std::int64_t> h) {
  return bip_canonical(canonical(g), canonical(h));
}

Profile Counter::loopless(std::span<const std::int64_t> d) {
  return loop_canonical(canonical(d));
}

Profile Counter::bip_canonical(Key g, Key h) {
  if (sum_of(g) != sum_of(h)) return {};
  if (g.empty()) return {1};
  if (h < g) std::swap(g, h);
  if (g.size() == 1 || h.size() == 1) {
    const Key& other = g.size() == 1 ? h : g;
    std::int64_t t = 0;
    for (auto x : other)
      if (x >= 2) t += x;
    return single(t);
  }
  Key key = g;
  key.push_back(-1);
  key.insert(key.end(), h.begin(), h.end());
  if (capacity_ > 0) {
    if (auto it = bip_memo_.find(key); it != bip_memo_.end()) return it->second;
  }
  ++evaluations_;
  check_deadline();

  const std::size_t half = g.size() / 2;
  const Key g1(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(half));
  const Key g2(g.begin() + static_cast<std::ptrdiff_t>(half), g.end());
  const std::int64_t w1 = sum_of(g1);
  const auto classes = classes_of(h);
  Profile acc;
  for_each_split(classes, w1, w1, [&](const Split& split, std::int64_t) {
    Key h1, h2;
    for (std::size_t c = 0; c < classes.size(); ++c)
      for (std::size_t j = 0; j < split[c].size(); ++j)
        for (std::int32_t r = 0; r < split[c][j]; ++r) {
          if (j > 0) h1.push_back(static_cast<std::int32_t>(j));
          if (classes[c].value > static_cast<std::int32_t>(j))
            h2.push_back(classes[c].value - static_cast<std::int32_t>(j));
        }
    std::sort(h1.begin(), h1.end());
    std::sort(h2.begin(), h2.end());
    const Profile p1 = bip_canonical(g1, h1);
    if (p1.empty()) return;
    const Profile p2 = bip_canonical(g2, std::move(h2));
    if (p2.empty()) return;
    accumulate_into(acc, convolve(p1, p2), multinomial_weight(classes, split));
  });
  trim(acc);
  if (capacity_ > 0 && can_store()) bip_memo_.emplace(std::move(key), acc);
  return acc;
}

Profile Counter::loop_canonical(Key d) {
  if (!loop_realisable(d)) return {};
  if (d.empty()) return {1};
  if (d.size() == 2) return single(d[0] >= 2 ? d[0] : 0);
  if (capacity_ > 0) {
    if (auto it = loop_memo_.find(d); it != loop_memo_.end()) return it->second;
  }
  ++evaluations_;
  check_deadline();

  const std::size_t half = d.size() / 2;
  const Key a(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(half));
  const Key b(d.begin() + static_cast<std::ptrdiff_t>(half), d.end());

  struct Part {
    Key cross, rest;
    BigInt weight;
  };
  // Patterns for one side, grouped by the total cross degree.
  auto patterns = [&](const Key& side) {
    std::vector<std::vector<Part>> by_sum;
    const auto classes = classes_of(side);
    const std::int64_t total = sum_of(side);
    for (std::int64_t x = 0; x <= total; ++x) {
      for_each_split(classes, x, total, [&](const Split& split, std::int64_t) {
        Part part;
        for (std::size_t c = 0; c < classes.size(); ++c)
          for (std::size_t j = 0; j < split[c].size(); ++j)
            for (std::int32_t r = 0; r < split[c][j]; ++r) {
              if (j > 0) part.cross.push_back(static_cast<std::int32_t>(j));
              if (classes[c].value > static_cast<std::int32_t>(j))
                part.rest.push_back(classes[c].value - static_cast<std::int32_t>(j));
            }
        std::sort(part.cross.begin(), part.cross.end());
        std::sort(part.rest.begin(), part.rest.end());
        if (!loop_realisable(part.rest)) return;
        part.weight = multinomial_weight(classes, split);
        if (by_sum.size() <= static_cast<std::size_t>(x)) by_sum.resize(x + 1);
        by_sum[x].push_back(std::move(part));
      });
    }
    return by_sum;
  };
  const auto pa = patterns(a);
  const auto pb = patterns(b);
  Profile acc;
  for (std::size_t x = 0; x < std::min(pa.size(), pb.size()); ++x) {
    for (const auto& left : pa[x]) {
      const Profile rest_a = loop_canonical(left.rest);
      if (rest_a.empty()) continue;
      for (const auto& right : pb[x]) {
        const Profile cross = bip_canonical(left.cross, right.cross);
        if (cross.empty()) continue;
        const Profile rest_b = loop_canonical(right.rest);
        if (rest_b.empty()) continue;
        accumulate_into(acc, convolve(convolve(rest_a, rest_b), cross),
                        left.weight * right.weight);
      }
    }
  }
  trim(acc);
  if (capacity_ > 0 && can_store()) loop_memo_.emplace(std::move(d), acc);
  return acc;
}

BigInt count_tables(Counter& counter, std::span<const std::int64_t> g,
                    std::span<const std::int64_t> h, std::int64_t t) {
  const Profile p = counter.bipartite(g, h);
  if (t < 0 || static_cast<std::size_t>(t) >= p.size()) return 0;
  return p[t];
}

namespace {

Profile instance_profile(Counter& counter, const DegreeData& data) {
  return data.is_bipartite() ? counter.bipartite(data.left, data.right)
                             : counter.loopless(data.left);
}

/// Chooses the values a_j placed on `targets` (capacities caps[j]) for a
/// vertex of degree x, with probability proportional to the number of
/// completions counted by `rest`, whose profile entry at t_left - tau(a)
/// is used.
std::vector<std::int64_t> choose_row(
    std::int64_t x, const std::vector<std::int64_t>& caps, std::int64_t t_left,
    const std::function<Profile(const std::vector<std::int64_t>&)>& rest,
    BitSource& src) {
  // Group targets by capacity; targets of equal capacity are interchangeable.
  std::vector<std::size_t> order(caps.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return caps[i] < caps[j]; });
  std::vector<DegreeClass> classes;
  std::vector<std::vector<std::size_t>> members;
  for (auto i : order) {
    if (caps[i] == 0) continue;
    if (classes.empty() || classes.back().value != caps[i]) {
      classes.push_back({static_cast<std::int32_t>(caps[i]), 0});
      members.emplace_back();
    }
    ++classes.back().count;
    members.back().push_back(i);
  }
  std::vector<Split> splits;
  std::vector<BigInt> weights;
  for_each_split(classes, x, x, [&](const Split& split, std::int64_t) {
    std::vector<std::int64_t> left;
    std::int64_t tau = 0;
    for (std::size_t c = 0; c < classes.size(); ++c)
      for (std::size_t j = 0; j < split[c].size(); ++j) {
        if (j >= 2) tau += static_cast<std::int64_t>(j) * split[c][j];
        for (std::int32_t r = 0; r < split[c][j]; ++r)
          left.push_back(classes[c].value - static_cast<std::int64_t>(j));
      }
    const std::int64_t t_rest = t_left - tau;
    if (t_rest < 0) return;
    const Profile p = rest(left);
    if (static_cast<std::size_t>(t_rest) >= p.size() || p[t_rest] == 0) return;
    splits.push_back(split);
    weights.push_back(multinomial_weight(classes, split) * p[t_rest]);
  });
  if (weights.empty())
    fail(ErrorCode::InvariantViolation, "no completion for a Brute row");
  const Split& chosen = splits[weighted_index(weights, src)];
  std::vector<std::int64_t> a(caps.size(), 0);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    std::vector<std::int64_t> values;
    for (std::size_t j = 0; j < chosen[c].size(); ++j)
      for (std::int32_t r = 0; r < chosen[c][j]; ++r)
        values.push_back(static_cast<std::int64_t>(j));
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      const std::size_t j = i + static_cast<std::size_t>(src.uniform_below(values.size() - i));
      std::swap(values[i], values[j]);
    }
    for (std::size_t i = 0; i < values.size(); ++i) a[members[c][i]] = values[i];
  }
  return a;
}

}  // namespace

BigInt compute_R(Counter& counter, const DegreeData& data, std::int64_t t0) {
  const Profile p = instance_profile(counter, data);
  BigInt r = 0;
  for (std::size_t t = static_cast<std::size_t>(std::max<std::int64_t>(t0, 0)); t < p.size(); ++t)
    r += p[t];
  return r;
}

MultiGraph sub_brute(Counter& counter, const DegreeData& data,
                     std::int64_t t_target, BitSource& src) {
  const Profile top = instance_profile(counter, data);
  if (t_target < 0 || static_cast<std::size_t>(t_target) >= top.size() ||
      top[t_target] == 0)
    fail(ErrorCode::Infeasible, "no multigraph with total multiplicity " +
                                    std::to_string(t_target));
  MultiGraph g(data);
  std::int64_t t_left = t_target;
  auto tau = [](const std::vector<std::int64_t>& a) {
    std::int64_t s = 0;
    for (auto x : a)
      if (x >= 2) s += x;
    return s;
  };
  if (data.is_bipartite()) {
    const auto& rows = data.left;
    std::vector<std::int64_t> caps = data.right;
    const Vertex offset = static_cast<Vertex>(rows.size());
    for (std::size_t v = 0; v < rows.size(); ++v) {
      const std::span<const std::int64_t> later(rows.data() + v + 1, rows.size() - v - 1);
      const auto a = choose_row(
          rows[v], caps, t_left,
          [&](const std::vector<std::int64_t>& left) {
            return counter.bipartite(later, left);
          },
          src);
      for (std::size_t j = 0; j < caps.size(); ++j) {
        for (std::int64_t r = 0; r < a[j]; ++r)
          g.add_edge(static_cast<Vertex>(v), offset + static_cast<Vertex>(j));
        caps[j] -= a[j];
      }
      t_left -= tau(a);
    }
  } else {
    std::vector<std::int64_t> residual = data.left;
    const std::size_t n = residual.size();
    for (std::size_t v = 0; v + 1 < n; ++v) {
      std::vector<std::int64_t> caps(residual.begin() + static_cast<std::ptrdiff_t>(v) + 1,
                                     residual.end());
      const auto a = choose_row(
          residual[v], caps, t_left,
          [&](const std::vector<std::int64_t>& left) {
            return counter.loopless(left);
          },
          src);
      for (std::size_t j = 0; j < caps.size(); ++j) {
        for (std::int64_t r = 0; r < a[j]; ++r)
          g.add_edge(static_cast<Vertex>(v), static_cast<Vertex>(v + 1 + j));
        residual[v + 1 + j] -= a[j];
      }
      residual[v] = 0;
      t_left -= tau(a);
    }
  }
  if (t_left != 0 || !g.audit())
    fail(ErrorCode::InvariantViolation, "Brute produced an inconsistent graph");
  return g;
}

BruteRunner::BruteRunner(const ParameterSet& params, Counter& counter)
    : params_(&params), counter_(&counter) {
  profile_ = instance_profile(counter, params.data());
  const std::int64_t t0 = params.t0();
  for (std::size_t t = static_cast<std::size_t>(t0); t < profile_.size(); ++t) R_ += profile_[t];
  h0_ = profile_.empty() ? BigInt(0) : profile_[0];
  if (t0 <= 0) {
    accept_ = 1;
    return;
  }
  if (R_ == 0) {
    accept_ = 0;
    return;
  }
  if (h0_ == 0 || sgn(params.B_hat()) <= 0)
    fail(ErrorCode::InvariantViolation, "Brute needs |H_0| > 0 and B > 0");
  accept_ = Rational(R_) / (Rational(h0_) * params.B_hat());
  if (accept_ > 1)
    fail(ErrorCode::InvariantViolation,
         "Brute acceptance probability exceeds one: " + accept_.get_str());
}

BruteOutcome BruteRunner::run(BitSource& src) {
  BruteOutcome out;
  if (R_ == 0) {
    out.empty = true;
    return out;
  }
  const std::size_t t0 = static_cast<std::size_t>(params_->t0());
  const std::span<const BigInt> tail(profile_.data() + t0, profile_.size() - t0);
  out.t = static_cast<std::int64_t>(t0 + weighted_index(tail, src));
  out.graph = sub_brute(*counter_, params_->data(), out.t, src);
  out.accepted = bernoulli(accept_, src);
  return out;
}

}  // namespace ctgen
