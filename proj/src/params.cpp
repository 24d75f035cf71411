#include "ctgen/params.hpp"

#include <algorithm>
#include <string>

#include "ctgen/error.hpp"

namespace ctgen {

StratumIndex::StratumIndex(int delta)
    : m_(static_cast<std::size_t>(std::max(delta, 2)) + 1, 0) {}

StratumIndex::StratumIndex(int delta, const std::vector<std::int64_t>& counts)
    : StratumIndex(delta) {
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const std::size_t k = i + 2;
    if (k >= m_.size()) {
      if (counts[i] != 0)
        fail(ErrorCode::InvalidArgument, "stratum entry beyond Delta");
      continue;
    }
    m_[k] = counts[i];
  }
  recompute();
}

void StratumIndex::recompute() {
  total_ = 0;
  top_ = 2;
  for (std::size_t k = 2; k < m_.size(); ++k) {
    total_ += static_cast<std::int64_t>(k) * m_[k];
    if (m_[k] > 0) top_ = static_cast<int>(k);
  }
}

std::int64_t StratumIndex::operator[](int k) const {
  if (k < 2 || static_cast<std::size_t>(k) >= m_.size()) return 0;
  return m_[k];
}

void StratumIndex::increment(int k) {
  if (k < 2 || static_cast<std::size_t>(k) >= m_.size())
    fail(ErrorCode::InvalidArgument, "stratum increment out of range");
  ++m_[k];
  total_ += k;
  top_ = std::max(top_, k);
}

void StratumIndex::decrement(int k) {
  if (k < 2 || static_cast<std::size_t>(k) >= m_.size() || m_[k] == 0)
    fail(ErrorCode::InvalidArgument, "stratum decrement out of range");
  --m_[k];
  recompute();
}

StratumIndex StratumIndex::plus(int k) const {
  StratumIndex r = *this;
  r.increment(k);
  return r;
}

std::vector<std::int64_t> StratumIndex::key() const {
  std::vector<std::int64_t> out(m_.begin() + 2, m_.end());
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

Rational epsilon_for(const DegreeData& data, std::int64_t t0) {
  const std::int64_t d2 = static_cast<std::int64_t>(data.delta) * data.delta;
  if (data.is_bipartite())
    return make_rational(BigInt(static_cast<long>(data.M - t0 - 4 * d2)),
                         BigInt(static_cast<long>(data.M)));
  return make_rational(BigInt(static_cast<long>(data.M - 2 * t0 - 6 * d2)),
                       BigInt(static_cast<long>(data.M)));
}

Rational e_upper() { return Rational(2718281829, 1000000000); }

namespace {

bool t0_feasible(const DegreeData& data, std::int64_t t0,
                 const Rational& eps_min) {
  const BigInt M = static_cast<long>(data.M);
  const BigInt D = data.delta;
  const BigInt D2 = D * D, D3 = D2 * D, D4 = D2 * D2;
  const BigInt t = static_cast<long>(t0);
  const bool bip = data.is_bipartite();
  const BigInt eps_num = bip ? BigInt(M - t - 4 * D2) : BigInt(M - 2 * t - 6 * D2);
  if (eps_num <= 0) return false;
  if (make_rational(eps_num, M) < eps_min) return false;
  // eps^3 > c * Delta^4 / M  <=>  eps_num^3 > c * Delta^4 * M^2
  const BigInt lhs = eps_num * eps_num * eps_num;
  const BigInt rhs = BigInt(bip ? 4 : 2) * D4 * M * M;
  if (!(lhs > rhs)) return false;
  const BigInt rest = t - D2 - D3;
  if (bip) {
    const BigInt r = t + 4 * D2;
    return BigInt(2 * t * rest) >= BigInt(r * r);
  }
  const BigInt r = 2 * t + 6 * D2;
  return BigInt(8 * t * rest) >= BigInt(r * r);
}

}  // namespace

std::pair<std::int64_t, Rational> choose_t0(const DegreeData& data,
                                            const Rational& eps_min) {
  if (data.delta < 2) return {0, 0};
  for (std::int64_t t0 = data.M - 1; t0 > 7; --t0)
    if (t0_feasible(data, t0, eps_min)) return {t0, epsilon_for(data, t0)};
  return {0, 0};
}

Rational compute_B_hat(const DegreeData& data, std::int64_t t0,
                       const Rational& eps) {
  if (t0 <= 7 || sgn(eps) <= 0 || eps >= 1)
    fail(ErrorCode::InvalidArgument, "B-hat needs t0 > 7 and 0 < eps < 1");
  const Rational one_minus = 1 - eps;
  const Rational om2 = one_minus * one_minus;
  const Rational base1 = Rational(3, 2) / om2 + Rational(3, 4) / (om2 * om2);
  // ceil(eps * M / 2)
  const Rational half_eps_m = eps * Rational(data.M) / 2;
  BigInt exp1;
  mpz_cdiv_q(exp1.get_mpz_t(), half_eps_m.get_num_mpz_t(),
             half_eps_m.get_den_mpz_t());
  const BigInt d2 = BigInt(data.delta) * data.delta;
  Rational denom = eps * eps * one_minus * Rational(t0 - 7);
  if (!data.is_bipartite()) denom *= 2;
  const Rational base2 = Rational(d2) * e_upper() / denom;
  return 4 * pow(base1, exp1.get_ui()) *
         pow(base2, static_cast<unsigned long>(t0 - 7));
}

ParameterSet ParameterSet::build(const DegreeData& data,
                                 const Rational& eps_min) {
  ParameterSet p;
  p.data_ = data;
  p.eps_min_ = eps_min;
  auto [t0, eps] = choose_t0(data, eps_min);
  p.t0_ = t0;
  p.eps_ = eps;
  p.finish(std::nullopt);
  return p;
}

ParameterSet ParameterSet::forced(const DegreeData& data, std::int64_t t0,
                                  LowerBoundTable lower_bounds,
                                  std::optional<Rational> B_hat,
                                  const Rational& eps_min) {
  if (t0 < 0) fail(ErrorCode::InvalidArgument, "negative forced t0");
  ParameterSet p;
  p.data_ = data;
  p.eps_min_ = eps_min;
  p.forced_ = true;
  p.t0_ = t0;
  p.eps_ = t0 > 0 ? epsilon_for(data, t0) : Rational(0);
  p.lower_bounds_ = std::move(lower_bounds);
  p.finish(std::move(B_hat));
  return p;
}

void ParameterSet::finish(std::optional<Rational> B_hat) {
  const int delta = data_.delta;
  f_bar_.assign(static_cast<std::size_t>(std::max(delta, 2)) + 1, 0);
  for (int k = 2; k <= delta; ++k) {
    // Ordered star pairs: one k-star on each side (or two anywhere).
    f_bar_[k] = data_.S[k] * data_.T[k];
  }
  beta_table_.clear();
  if (t0_ <= 0 || delta < 2) {
    B_hat_ = 0;
    rho_hat_ = 1;
    return;
  }

  // beta for m = (0, m2, 0, ...) with 2*m2 < t0, filled for decreasing m2.
  const std::int64_t len = (t0_ + 1) / 2;
  beta_table_.assign(static_cast<std::size_t>(len), 0);
  for (std::int64_t m2 = len - 1; m2 >= 0; --m2) {
    StratumIndex m(delta);
    for (std::int64_t j = 0; j < m2; ++j) m.increment(2);
    Rational sum = 0;
    for (int i = 2; i <= delta; ++i) {
      const StratumIndex next = m.plus(i);
      if (next.total() >= t0_) continue;
      const Rational ratio = switch_ratio(i, m);
      if (sgn(ratio) == 0) continue;
      sum += ratio * one_plus_beta(next);
    }
    beta_table_[static_cast<std::size_t>(m2)] = sum;
  }

  if (B_hat) {
    B_hat_ = *B_hat;
  } else {
    B_hat_ = compute_B_hat(data_, t0_, eps_);
  }
  const Rational scaled = B_hat_ / (1 + beta_table_[0]);
  rho_hat_ = scaled / (1 + scaled);
}

const BigInt& ParameterSet::f_bar(int k) const {
  static const BigInt zero = 0;
  if (k < 2 || static_cast<std::size_t>(k) >= f_bar_.size()) return zero;
  return f_bar_[k];
}

const std::vector<Rational>* ParameterSet::override_for(
    int k, const StratumIndex& m) const {
  if (lower_bounds_.empty()) return nullptr;
  auto it = lower_bounds_.find({k, m.key()});
  return it == lower_bounds_.end() ? nullptr : &it->second;
}

Rational ParameterSet::b_under(int k, const StratumIndex& m, int i) const {
  if (k < 2 || k > data_.delta || i < 0 || i > k)
    fail(ErrorCode::InvalidArgument, "b_under index out of range");
  const bool bip = data_.is_bipartite();
  if (i == 0) return Rational(bip ? m[k] : 2 * m[k]);
  if (const auto* o = override_for(k, m); o && !o->empty())
    return (*o)[static_cast<std::size_t>(i - 1)];
  if (k >= 3) return eps_ * Rational(data_.M);
  const std::int64_t D = data_.delta;
  if (bip) return Rational(data_.M - m.total() - 2 * i * D - 2 * D * D);
  return Rational(data_.M - 2 * m.total() - 4 * i * D - 2 * D * D);
}

Rational ParameterSet::b_under_total(int k, const StratumIndex& m) const {
  Rational r = 1;
  for (int i = 0; i <= k; ++i) r *= b_under(k, m, i);
  return r;
}

Rational closed_form_beta(Topology topology, int delta, std::int64_t M,
                          const Rational& eps, int level) {
  if (sgn(eps) <= 0)
    fail(ErrorCode::InvariantViolation,
         "closed-form beta needs a positive epsilon");
  const BigInt D = delta;
  BigInt num;
  mpz_pow_ui(num.get_mpz_t(), D.get_mpz_t(),
             static_cast<unsigned long>(2 * level - 2));
  num *= topology == Topology::Bipartite ? 4 : 2;
  BigInt mpow;
  mpz_ui_pow_ui(mpow.get_mpz_t(), static_cast<unsigned long>(M),
                static_cast<unsigned long>(level - 2));
  return Rational(num) /
         (Rational(mpow) * pow(eps, static_cast<unsigned long>(level)));
}

Rational ParameterSet::closed_form_beta(int level) const {
  return ctgen::closed_form_beta(data_.topology, data_.delta, data_.M, eps_,
                                 level);
}

Beta ParameterSet::beta(const StratumIndex& m) const {
  if (m.total() >= t0_) return NegOne{};
  if (m.top() >= 3) return closed_form_beta(m.top());
  return beta_table_.at(static_cast<std::size_t>(m[2]));
}

const Rational& ParameterSet::beta0() const {
  static const Rational zero = 0;
  return beta_table_.empty() ? zero : beta_table_[0];
}

Rational ParameterSet::one_plus_beta(const StratumIndex& m) const {
  const Beta b = beta(m);
  if (is_neg_one(b)) return 0;
  return 1 + std::get<Rational>(b);
}

Rational ParameterSet::switch_ratio(int k, const StratumIndex& m) const {
  const StratumIndex next = m.plus(k);
  if (const auto* o = override_for(k, next); o && o->empty()) return 0;
  if (f_bar(k) == 0) return 0;
  const Rational lower = b_under_total(k, next);
  if (sgn(lower) <= 0)
    fail(ErrorCode::InvariantViolation,
         "non-positive b lower bound for k=" + std::to_string(k));
  return Rational(f_bar(k)) / lower;
}

Rational ParameterSet::transition_prob(int s, const StratumIndex& m) const {
  const Beta here = beta(m);
  if (is_neg_one(here) || sgn(std::get<Rational>(here)) == 0) return 0;
  const StratumIndex next = m.plus(s);
  const Rational opb = one_plus_beta(next);
  if (sgn(opb) == 0) return 0;
  const Rational ratio = switch_ratio(s, m);
  if (sgn(ratio) == 0) return 0;
  return ratio * opb / std::get<Rational>(here);
}

}  // namespace ctgen
