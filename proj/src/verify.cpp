#include "ctgen/verify.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <json.hpp>
#include <map>
#include <sstream>

#include "ctgen/brute.hpp"
#include "ctgen/driver.hpp"
#include "ctgen/error.hpp"
#include "ctgen/format.hpp"
#include "ctgen/multigraphgen.hpp"
#include "ctgen/oracle.hpp"

namespace ctgen {
namespace {

// Pinned thresholds.
constexpr double kMinP = 0.001;
constexpr std::int64_t kCountMaxSide = 3;
constexpr std::int64_t kCountMaxTotal = 8;
constexpr double kCountSeconds = 300;
constexpr std::uint64_t kBruteSamples22 = 30000;
constexpr std::uint64_t kBruteSamples21 = 20000;
constexpr std::uint64_t kFixturePerOutcome = 1000;
constexpr int kFixturesWithSwitchings = 3;
constexpr int kSymmetricSide = 50;
constexpr int kSupplementarySide = 128;
constexpr std::uint64_t kQualifying = 100000;
constexpr std::uint64_t kGenIterations = 1000000;
constexpr std::uint64_t kGenRuns = 100000;
constexpr int kTailLevels = 8;
constexpr double kTailBase = 7.0 / 8.0;
constexpr double kTailScale = 1.5;
constexpr double kMinCleanRuns = 0.01;
constexpr std::array<int, 4> kScalingSides{64, 128, 256, 512};
constexpr std::array<int, 4> kApproxScalingSides{128, 256, 512, 1024};
constexpr std::uint64_t kScalingSamples = 1000;
constexpr std::uint64_t kApproxScalingSamples = 10000;
constexpr double kScalingBudgetSeconds = 30;
constexpr std::uint64_t kRestartChunk = 20;
constexpr double kMaxDoublingRatio = 2.5;
constexpr std::uint64_t kMultigraphSamples = 30000;
constexpr std::uint64_t kFixedOutcomeSamples = 1000;
constexpr std::size_t kMemo = std::size_t{1} << 20;

CriterionResult result(int id, std::string name, bool supplementary = false) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.supplementary = supplementary;
  return r;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double x, int precision = 4) {
  std::ostringstream out;
  out << std::setprecision(precision) << x;
  return out.str();
}

template <class T>
std::string str(const T& x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

std::vector<std::int64_t> constant(int n, std::int64_t value) {
  return std::vector<std::int64_t>(static_cast<std::size_t>(n), value);
}

void compositions(std::int64_t parts, std::int64_t total,
                  std::vector<std::int64_t>& cur,
                  std::vector<std::vector<std::int64_t>>& out) {
  if (parts == 0) {
    if (total == 0) out.push_back(cur);
    return;
  }
  for (std::int64_t first = 1; first <= total - (parts - 1); ++first) {
    cur.push_back(first);
    compositions(parts - 1, total - first, cur, out);
    cur.pop_back();
  }
}

/// Draws n samples and tallies them against an enumerated outcome list.
/// Returns false if a sample is not among the outcomes.
bool tally(Sampler& sampler, const std::vector<Matrix>& outcomes,
           std::uint64_t n, BitSource& src, std::vector<std::uint64_t>& counts) {
  std::map<Matrix, std::size_t> index;
  for (std::size_t i = 0; i < outcomes.size(); ++i) index[outcomes[i]] = i;
  counts.assign(outcomes.size(), 0);
  for (std::uint64_t s = 0; s < n; ++s) {
    const MultiGraph g = sampler.sample(src);
    if (!g.audit()) return false;
    const auto it = index.find(g.to_matrix());
    if (it == index.end()) return false;
    ++counts[it->second];
  }
  return true;
}

// ---------------------------------------------------------------- 1

CriterionResult count_oracle() {
  CriterionResult r = result(1, "count-oracle equivalence");
  const auto start = Clock::now();
  std::uint64_t pairs = 0, checks = 0, mismatches = 0;
  std::string first_mismatch;
  Counter counter;
  for (std::int64_t total = 1; total <= kCountMaxTotal; ++total) {
    for (std::int64_t m = 1; m <= kCountMaxSide; ++m) {
      std::vector<std::vector<std::int64_t>> rows, cols;
      std::vector<std::int64_t> cur;
      compositions(m, total, cur, rows);
      for (std::int64_t n = 1; n <= kCountMaxSide; ++n) {
        cols.clear();
        compositions(n, total, cur, cols);
        for (const auto& g : rows) {
          for (const auto& h : cols) {
            ++pairs;
            const auto tables = enumerate_tables(g, h);
            std::vector<std::uint64_t> by_t(static_cast<std::size_t>(total) + 1, 0);
            for (const auto& t : tables) {
              std::int64_t s = 0;
              for (const auto& row : t)
                for (auto c : row)
                  if (c >= 2) s += c;
              ++by_t[static_cast<std::size_t>(s)];
            }
            for (std::int64_t t = 0; t <= total; ++t) {
              ++checks;
              const BigInt got = count_tables(counter, g, h, t);
              if (got != BigInt(static_cast<unsigned long>(by_t[t]))) {
                ++mismatches;
                if (first_mismatch.empty())
                  first_mismatch = "rows " + str(g.size()) + "x" + str(h.size()) +
                                   " total " + str(total) + " t " + str(t);
              }
            }
          }
        }
      }
    }
  }
  r.seconds = seconds_since(start);
  r.pass = mismatches == 0 && r.seconds < kCountSeconds;
  r.detail = str(pairs) + " marginal pairs, " + str(checks) + " (pair, t) counts, " +
             str(mismatches) + " mismatches, " + num(r.seconds) + " s (limit " +
             num(kCountSeconds) + " s)";
  if (!first_mismatch.empty()) r.detail += "; first mismatch at " + first_mismatch;
  r.metrics = {{"pairs", str(pairs)}, {"checks", str(checks)},
               {"mismatches", str(mismatches)}};
  return r;
}

// ---------------------------------------------------------------- 2

CriterionResult brute_uniformity() {
  CriterionResult r = result(2, "end-to-end uniformity, Brute path");
  const auto start = Clock::now();
  struct Case {
    std::vector<std::int64_t> rows, cols;
    std::uint64_t samples;
    std::uint64_t seed;
  };
  const std::vector<Case> cases = {{{2, 2}, {2, 2}, kBruteSamples22, 201},
                                   {{2, 1}, {2, 1}, kBruteSamples21, 202}};
  r.pass = true;
  for (const auto& c : cases) {
    const auto marg = Marginals::validate(c.rows, c.cols);
    Sampler sampler = make_table_sampler(marg, SamplerConfig{});
    const auto tables = enumerate_tables(marg.rows(), marg.cols());
    BitSource src(c.seed);
    std::vector<std::uint64_t> counts;
    const bool valid = tally(sampler, tables, c.samples, src, counts);
    const auto chi = chi_square_uniform(counts);
    const bool brute_only = sampler.params().t0() == 0 && sampler.stats().gen_calls == 0;
    const bool ok = valid && brute_only && chi.p_value > kMinP;
    r.pass = r.pass && ok;
    std::string counts_s;
    for (auto k : counts) counts_s += (counts_s.empty() ? "" : "/") + str(k);
    r.detail += (r.detail.empty() ? "" : "; ") + str(tables.size()) + " tables, counts " +
                counts_s + ", p=" + num(chi.p_value) + (brute_only ? "" : " (Gen used)") +
                (valid ? "" : " (invalid output)");
  }
  r.seconds = seconds_since(start);
  return r;
}

// ---------------------------------------------------------------- 3

struct Fixture {
  Topology topology;
  std::vector<std::int64_t> left, right;
  std::int64_t t0;
  std::uint64_t seed;
};

std::string fixture_name(const Fixture& f) {
  auto list = [](const std::vector<std::int64_t>& v) {
    std::string s;
    for (auto x : v) s += (s.empty() ? "" : ",") + str(x);
    return "[" + s + "]";
  };
  if (f.topology == Topology::Bipartite)
    return "(" + list(f.left) + "," + list(f.right) + ") t0=" + str(f.t0);
  return "d=" + list(f.left) + " t0=" + str(f.t0);
}

CriterionResult gen_uniformity() {
  CriterionResult r = result(3, "end-to-end uniformity, Gen path (verified fixtures)");
  const auto start = Clock::now();
  const std::vector<Fixture> fixtures = {
      {Topology::Bipartite, {2, 2}, {2, 2}, 3, 301},
      {Topology::Bipartite, {2, 1, 1}, {2, 1, 1}, 3, 302},
      {Topology::Bipartite, {2, 2, 1, 1}, {2, 2, 1, 1}, 3, 303},
      {Topology::Bipartite, {2, 2, 1, 1}, {2, 2, 1, 1}, 5, 304},
      {Topology::Bipartite, {2, 2, 2}, {2, 2, 2}, 3, 305},
      {Topology::Loopless, {2, 2, 2, 2, 2, 2}, {}, 5, 306},
  };
  int with_switchings = 0;
  bool all_ok = true;
  for (const auto& f : fixtures) {
    std::string line = fixture_name(f) + ": ";
    try {
      DegreeData data;
      if (f.topology == Topology::Bipartite)
        data = DegreeData::bipartite(Marginals::validate(f.left, f.right));
      else
        data = DegreeData::loopless(f.left);
      FixtureReport report;
      ParameterSet params = forced_parameter_fixture(data, f.t0, &report);
      const auto outcomes = f.topology == Topology::Bipartite
                                ? enumerate_tables(data.left, data.right)
                                : enumerate_loopless(data.left);
      Sampler sampler(std::move(params), SamplerConfig{});
      BitSource src(f.seed);
      std::vector<std::uint64_t> counts;
      const std::uint64_t n = kFixturePerOutcome * outcomes.size();
      const bool valid = tally(sampler, outcomes, n, src, counts);
      const auto chi = chi_square_uniform(counts);
      const auto& gs = sampler.gen_stats();
      const bool switched = gs.iterations > 0;
      if (switched) ++with_switchings;
      const bool ok = valid && chi.p_value > kMinP && gs.bound_violations == 0 &&
                      gs.mass_violations == 0;
      all_ok = all_ok && ok;
      line += str(outcomes.size()) + " outcomes, " + str(n) + " samples, p=" +
              num(chi.p_value) + ", tv=" + num(chi.tv_distance) + ", rho=" +
              sampler.params().rho_hat().get_str() + ", switchings=" +
              str(gs.iterations) + (valid ? "" : " (invalid output)");
    } catch (const Error& e) {
      all_ok = false;
      line += std::string("error ") + to_string(e.code()) + ": " + e.what();
    }
    r.detail += (r.detail.empty() ? "" : "; ") + line;
  }
  r.pass = all_ok && with_switchings >= kFixturesWithSwitchings;
  r.detail = str(fixtures.size()) + " fixtures, " + str(with_switchings) +
             " exercising switchings (need " + str(kFixturesWithSwitchings) + "); " + r.detail;
  r.seconds = seconds_since(start);
  return r;
}

// ---------------------------------------------------------- 4, 5, 6, 10

/// Sampling run on 2-regular n x n marginals collecting everything the
/// Gen-side criteria need.
struct Battery {
  int side = 0;
  bool approximate = false;
  std::int64_t t0 = 0;
  std::string eps;
  bool ran = false;
  std::string error;
  std::uint64_t samples = 0;
  std::uint64_t qualifying = 0;
  std::vector<std::uint64_t> double_rows;
  GenStats gen;
  Rational threshold;  // 3 S_2 T_2 / (eps^2 M^2)
  double seconds = 0;
};

struct BatteryTarget {
  std::uint64_t qualifying = 0;
  std::uint64_t iterations = 0;
  std::uint64_t runs = 0;
};

BatteryTarget target_for(int id) {
  switch (id) {
    case 4: return {kQualifying, 0, 0};
    case 5: return {0, kGenIterations, 0};
    default: return {0, 0, kGenRuns};
  }
}

Battery run_battery(int side, bool approximate, std::uint64_t seed, BatteryTarget target) {
  Battery b;
  b.side = side;
  b.approximate = approximate;
  const auto start = Clock::now();
  const auto marg = Marginals::validate(constant(side, 2), constant(side, 2));
  SamplerConfig config;
  config.approximate = approximate;
  config.memo_capacity = kMemo;
  Sampler sampler = make_table_sampler(marg, config);
  const ParameterSet& p = sampler.params();
  b.t0 = p.t0();
  b.eps = p.eps().get_str();
  if (b.t0 <= 0) return b;
  b.ran = true;
  const DegreeData& d = p.data();
  b.threshold = Rational(3 * d.S[2] * d.T[2]) / (p.eps() * p.eps() * Rational(d.M * d.M));
  b.double_rows.assign(static_cast<std::size_t>(side), 0);
  BitSource src(seed);
  std::vector<Vertex> pts;
  try {
    while (b.qualifying < target.qualifying ||
           sampler.gen_stats().iterations < target.iterations ||
           sampler.gen_stats().runs < target.runs) {
      const MultiGraph g = sampler.sample(src);
      ++b.samples;
      if (g.stratum().total() != 2) continue;
      ++b.qualifying;
      for (Vertex row = 0; row < g.left_count(); ++row) {
        const auto p = g.points(row);
        pts.assign(p.begin(), p.end());
        std::sort(pts.begin(), pts.end());
        if (std::adjacent_find(pts.begin(), pts.end()) != pts.end()) {
          ++b.double_rows[static_cast<std::size_t>(row)];
          break;
        }
      }
    }
  } catch (const Error& e) {
    b.error = std::string(to_string(e.code())) + ": " + e.what();
  }
  b.gen = sampler.gen_stats();
  b.seconds = seconds_since(start);
  return b;
}

std::string battery_label(const Battery& b) {
  return str(b.side) + "x" + str(b.side) + (b.approximate ? " approximate" : " exact") +
         " (t0=" + str(b.t0) + ", eps=" + b.eps + ")";
}

CriterionResult not_run(int id, const std::string& name, const Battery& b) {
  CriterionResult r = result(id, name);
  r.pass = false;
  r.detail = "honest t0 = " + str(b.t0) + " on " + str(b.side) + "x" + str(b.side) +
             " 2-regular marginals: the t0 feasibility conditions have no solution at M=" +
             str(2 * b.side) + ", so Gen never runs and the criterion cannot be measured";
  r.metrics = {{"t0", str(b.t0)}};
  return r;
}

CriterionResult symmetry(const Battery& b, bool supp) {
  CriterionResult r = result(4, "within-stratum symmetry", supp);
  if (!b.ran) return not_run(4, r.name, b);
  if (!b.error.empty()) {
    r.detail = battery_label(b) + ": " + b.error;
    return r;
  }
  const auto chi = chi_square_uniform(b.double_rows);
  r.pass = b.qualifying >= kQualifying && chi.p_value > kMinP;
  r.detail = battery_label(b) + ": " + str(b.qualifying) + " samples with one double entry (of " +
             str(b.samples) + "), row index chi-square over " + str(b.side) + " rows p=" +
             num(chi.p_value) + ", tv=" + num(chi.tv_distance);
  r.seconds = b.seconds;
  return r;
}

CriterionResult lemma_checks(const Battery& b, bool supp) {
  CriterionResult r = result(5, "lemma inequalities as runtime assertions", supp);
  if (!b.ran) return not_run(5, r.name, b);
  const GenStats& g = b.gen;
  const std::uint64_t violations = g.bound_violations + g.mass_violations + g.ratio_violations;
  r.pass = b.error.empty() && g.iterations >= kGenIterations && violations == 0 &&
           g.bound_checks > 0 && g.mass_checks > 0 && g.ratio_checks > 0;
  r.detail = battery_label(b) + ": " + str(g.iterations) + " iterations; b-factor bounds " +
             str(g.bound_violations) + "/" + str(g.bound_checks) + ", transition mass " +
             str(g.mass_violations) + "/" + str(g.mass_checks) + ", switch ratio " +
             str(g.ratio_violations) + "/" + str(g.ratio_checks) + " violations/checks" +
             (b.error.empty() ? "" : "; " + b.error);
  return r;
}

CriterionResult tail(const Battery& b, bool supp) {
  CriterionResult r = result(6, "tail of the largest m_2", supp);
  if (!b.ran) return not_run(6, r.name, b);
  const GenStats& g = b.gen;
  r.pass = b.error.empty() && g.runs >= kGenRuns;
  std::string levels;
  for (int j = 1; j <= kTailLevels; ++j) {
    std::uint64_t over = 0;
    for (const auto& [m2, count] : g.max_m2)
      if (Rational(m2) - b.threshold >= j) over += count;
    const double frac = static_cast<double>(over) / static_cast<double>(g.runs);
    const double bound = kTailScale * std::pow(kTailBase, j);
    if (frac > bound) r.pass = false;
    levels += (levels.empty() ? "" : " ") + ("j" + str(j) + "=" + num(frac, 3));
  }
  r.detail = battery_label(b) + ": " + str(g.runs) + " runs, threshold " +
             num(b.threshold.get_d()) + ", largest m_2 seen " +
             (g.max_m2.empty() ? std::string("none") : str(g.max_m2.rbegin()->first)) +
             ", exceedance " + levels;
  return r;
}

CriterionResult clean_runs(const Battery& b, bool supp) {
  CriterionResult r = result(10, "rejection sanity", supp);
  if (!b.ran) return not_run(10, r.name, b);
  const GenStats& g = b.gen;
  const double frac = g.runs ? static_cast<double>(g.outputs) / static_cast<double>(g.runs) : 0;
  r.pass = b.error.empty() && g.runs > 0 && frac >= kMinCleanRuns;
  r.detail = battery_label(b) + ": " + str(g.outputs) + " of " + str(g.runs) +
             " Gen runs finished without rejection (" + num(frac) + ", need >= " +
             num(kMinCleanRuns) + "); f/b/beta rejects " + str(g.f_rejects) + "/" +
             str(g.b_rejects) + "/" + str(g.beta_rejects);
  return r;
}

std::vector<CriterionResult> gen_side(int id, const VerifyOptions& options) {
  const auto start = Clock::now();
  auto pick = [&](const Battery& b, bool supp) {
    switch (id) {
      case 4: return symmetry(b, supp);
      case 5: return lemma_checks(b, supp);
      case 6: return tail(b, supp);
      default: return clean_runs(b, supp);
    }
  };
  const Battery primary = run_battery(kSymmetricSide, false, 400 + id, target_for(id));
  std::vector<CriterionResult> out{pick(primary, false)};
  out[0].seconds = seconds_since(start);
  if (!out[0].pass && !primary.ran && !options.skip_supplementary) {
    const auto s = Clock::now();
    const Battery supp = run_battery(kSupplementarySide, true, 500 + id, target_for(id));
    out.push_back(pick(supp, true));
    out.back().seconds = seconds_since(s);
  }
  return out;
}

// ---------------------------------------------------------------- 7

struct Timing {
  int side = 0;
  std::int64_t t0 = 0;
  std::uint64_t samples = 0;
  std::uint64_t restarts = 0;
  double setup = 0;
  double seconds = 0;
  bool complete = false;
  bool counting_cut = false;  // exact counting hit the deadline
  double per_sample() const { return samples ? seconds / static_cast<double>(samples) : 0; }
};

Timing time_sampler(int side, bool approximate, std::uint64_t n, std::uint64_t seed) {
  Timing t;
  t.side = side;
  const auto s0 = Clock::now();
  const auto deadline = s0 + std::chrono::duration_cast<Clock::duration>(
                                 std::chrono::duration<double>(kScalingBudgetSeconds));
  const auto marg = Marginals::validate(constant(side, 2), constant(side, 2));
  SamplerConfig config;
  config.approximate = approximate;
  config.memo_capacity = kMemo;
  config.deadline = deadline;
  // Restart chunks let the wall-clock budget be enforced between calls;
  // each restart is independent, so chunking does not alter the output law.
  config.max_restarts = kRestartChunk;
  Sampler sampler = make_table_sampler(marg, config);
  t.t0 = sampler.params().t0();
  BitSource src(seed);
  auto start = Clock::now();
  try {
    if (t.t0 <= 0 || (!approximate && sampler.params().rho_hat() > Rational(1, 1000000)))
      sampler.brute();
    t.setup = seconds_since(s0);
    start = Clock::now();
    while (t.samples < n && Clock::now() < deadline) {
      try {
        sampler.sample(src);
        ++t.samples;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ApproximateCutoff) throw;
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TooLarge) throw;
    t.counting_cut = true;
    if (t.setup == 0) t.setup = seconds_since(s0);
  }
  t.seconds = seconds_since(start);
  t.complete = t.samples == n;
  t.restarts = sampler.stats().restarts;
  return t;
}

CriterionResult scaling_result(int id, const std::string& name, bool supp,
                               const std::vector<Timing>& timings, std::uint64_t n,
                               const std::string& mode) {
  CriterionResult r = result(id, name, supp);
  r.pass = true;
  std::string sizes, ratios;
  for (std::size_t i = 0; i < timings.size(); ++i) {
    const Timing& t = timings[i];
    if (!t.complete) r.pass = false;
    sizes += (sizes.empty() ? "" : "; ") + str(t.side) + ": t0=" + str(t.t0) + " " +
             (t.complete ? num(t.per_sample() * 1e6) + " us/sample"
                         : "only " + str(t.samples) + "/" + str(n) + " samples in " +
                               num(kScalingBudgetSeconds) + " s" +
                               (t.counting_cut ? " (exact counting unfinished)" : "")) +
             " (" + str(t.restarts) + " restarts, setup " + num(t.setup, 3) + " s)";
    if (i > 0 && timings[i - 1].complete && t.complete) {
      const double ratio = t.per_sample() / timings[i - 1].per_sample();
      if (ratio > kMaxDoublingRatio) r.pass = false;
      ratios += (ratios.empty() ? "" : " ") + num(ratio, 3);
    }
  }
  r.detail = mode + ", " + str(n) + " samples per size; " + sizes + "; doubling ratios " +
             (ratios.empty() ? std::string("none") : ratios) + " (limit " +
             num(kMaxDoublingRatio) + ")";
  return r;
}

std::vector<CriterionResult> scaling(const VerifyOptions& options) {
  const std::string name = "linear-scaling proxy";
  auto start = Clock::now();
  std::vector<Timing> exact;
  for (std::size_t i = 0; i < kScalingSides.size(); ++i)
    exact.push_back(time_sampler(kScalingSides[i], false, kScalingSamples, 700 + i));
  std::vector<CriterionResult> out{
      scaling_result(7, name, false, exact, kScalingSamples, "exact mode")};
  out[0].seconds = seconds_since(start);
  if (!out[0].pass && !options.skip_supplementary) {
    start = Clock::now();
    std::vector<Timing> approx;
    for (std::size_t i = 0; i < kApproxScalingSides.size(); ++i)
      approx.push_back(
          time_sampler(kApproxScalingSides[i], true, kApproxScalingSamples, 710 + i));
    out.push_back(scaling_result(7, name, true, approx, kApproxScalingSamples,
                                 "approximate mode (Gen branch only)"));
    out.back().seconds = seconds_since(start);
  }
  return out;
}

// ---------------------------------------------------------------- 8

CriterionResult multigraph_mode() {
  CriterionResult r = result(8, "multigraph mode");
  const auto start = Clock::now();
  r.pass = true;
  auto sampler_for = [](std::vector<std::int64_t> d) {
    return make_multigraph_sampler(DegreeSequence::validate(d), SamplerConfig{});
  };
  auto fixed = [&](std::vector<std::int64_t> d, const Matrix& expected, std::uint64_t seed,
                   const std::string& label) {
    Sampler s = sampler_for(d);
    BitSource src(seed);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < kFixedOutcomeSamples; ++i)
      if (s.sample(src).to_matrix() == expected) ++hits;
    const auto all = enumerate_loopless(d);
    const bool ok = hits == kFixedOutcomeSamples && all.size() == 1 && all[0] == expected;
    r.pass = r.pass && ok;
    r.detail += (r.detail.empty() ? "" : "; ") + label + " " + str(hits) + "/" +
                str(kFixedOutcomeSamples) + " (enumeration: " + str(all.size()) + " graph)";
  };
  fixed({2, 2}, Matrix{{0, 2}, {2, 0}}, 801, "d=(2,2) double edge");
  {
    const std::vector<std::int64_t> d{1, 1, 1, 1};
    Sampler s = sampler_for(d);
    const auto all = enumerate_loopless(d);
    BitSource src(802);
    std::vector<std::uint64_t> counts;
    const bool valid = tally(s, all, kMultigraphSamples, src, counts);
    const auto chi = chi_square_uniform(counts);
    const bool ok = valid && all.size() == 3 && chi.p_value > kMinP;
    r.pass = r.pass && ok;
    std::string cs;
    for (auto k : counts) cs += (cs.empty() ? "" : "/") + str(k);
    r.detail += "; d=(1,1,1,1) " + str(all.size()) + " matchings, counts " + cs +
                ", p=" + num(chi.p_value);
  }
  fixed({2, 2, 2}, Matrix{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, 803, "d=(2,2,2) triangle");
  r.seconds = seconds_since(start);
  return r;
}

// ---------------------------------------------------------------- 9

std::string library_stream(std::uint64_t seed) {
  std::string out;
  {
    const auto marg = Marginals::validate(std::vector<std::int64_t>{3, 2, 2, 1},
                                          std::vector<std::int64_t>{2, 2, 2, 2});
    Sampler s = make_table_sampler(marg);
    BitSource src(seed);
    std::vector<Matrix> tables;
    for (int i = 0; i < 200; ++i) tables.push_back(s.sample(src).to_matrix());
    out += tables_csv(tables) + s.stats_json();
  }
  {
    const auto data = DegreeData::bipartite(Marginals::validate(
        std::vector<std::int64_t>{2, 2, 1, 1}, std::vector<std::int64_t>{2, 2, 1, 1}));
    Sampler s(forced_parameter_fixture(data, 5));
    BitSource src(seed);
    std::vector<Matrix> tables;
    for (int i = 0; i < 300; ++i) tables.push_back(s.sample(src).to_matrix());
    out += tables_json(tables) + s.stats_json();
  }
  return out;
}

bool run_command(const std::string& cmd, std::string& output, int& status) {
  output.clear();
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return false;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), got);
  status = pclose(pipe);
  return true;
}

CriterionResult determinism(const VerifyOptions& options) {
  CriterionResult r = result(9, "determinism");
  const auto start = Clock::now();
  const std::string a = library_stream(901), b = library_stream(901), c = library_stream(902);
  r.pass = a == b && a != c;
  r.detail = "library: two runs at seed 901 " + std::string(a == b ? "identical" : "DIFFER") +
             " (" + str(a.size()) + " bytes), seed 902 " +
             (a != c ? "differs" : "IDENTICAL");
  if (!options.cli_path.empty()) {
    const std::vector<std::string> commands = {
        "sample --rows 2,2,1,1 --cols 2,2,1,1 --samples 300 --seed 11 --force-t0 5 --stats "
        "--format json",
        "sample --rows 3,2,2,1 --cols 2,2,2,2 --samples 200 --seed 11 --format csv",
        "multigraph --degrees 2,2,2,2,2,2 --samples 200 --seed 11 --force-t0 5 --stats "
        "--format json",
        "sample --rows 2,2,2,2,2,2,2,2,2,2 --cols 2,2,2,2,2,2,2,2,2,2 --samples 50 --seed 11 "
        "--threads 3 --format json --stats"};
    for (const auto& args : commands) {
      const std::string cmd = "\"" + options.cli_path + "\" " + args + " 2>&1";
      std::string first, second;
      int s1 = -1, s2 = -1;
      const bool ran = run_command(cmd, first, s1) && run_command(cmd, second, s2);
      const bool ok = ran && s1 == 0 && s2 == 0 && first == second && !first.empty();
      r.pass = r.pass && ok;
      r.detail += "; cli `" + args + "`: " +
                  (ok ? "identical (" + str(first.size()) + " bytes)"
                      : "FAILED (status " + str(s1) + "/" + str(s2) + ")");
    }
  }
  r.seconds = seconds_since(start);
  return r;
}

}  // namespace

std::vector<CriterionResult> run_criterion(int id, const VerifyOptions& options) {
  auto guard = [&](const std::function<std::vector<CriterionResult>()>& f) {
    try {
      return f();
    } catch (const Error& e) {
      CriterionResult r = result(id, "criterion " + str(id));
      r.detail = std::string("error ") + to_string(e.code()) + ": " + e.what();
      return std::vector<CriterionResult>{r};
    }
  };
  switch (id) {
    case 1: return guard([] { return std::vector<CriterionResult>{count_oracle()}; });
    case 2: return guard([] { return std::vector<CriterionResult>{brute_uniformity()}; });
    case 3: return guard([] { return std::vector<CriterionResult>{gen_uniformity()}; });
    case 4:
    case 5:
    case 6:
    case 10: return guard([&] { return gen_side(id, options); });
    case 7: return guard([&] { return scaling(options); });
    case 8: return guard([] { return std::vector<CriterionResult>{multigraph_mode()}; });
    case 9: return guard([&] { return std::vector<CriterionResult>{determinism(options)}; });
    default: fail(ErrorCode::InvalidArgument, "no criterion " + str(id));
  }
}

std::string result_line(const CriterionResult& r) {
  return std::string(r.supplementary ? (r.pass ? "[supplementary PASS] " : "[supplementary FAIL] ")
                                     : (r.pass ? "[PASS] " : "[FAIL] ")) +
         str(r.id) + " " + r.name + ": " + r.detail + " [" + num(r.seconds, 3) + " s]";
}

std::string results_json(const std::vector<CriterionResult>& results) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json metrics = nlohmann::json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = v;
    list.push_back({{"id", r.id},
                    {"name", r.name},
                    {"supplementary", r.supplementary},
                    {"pass", r.pass},
                    {"detail", r.detail},
                    {"seconds", r.seconds},
                    {"metrics", metrics}});
  }
  nlohmann::json j;
  j["format"] = 1;
  j["results"] = list;
  return j.dump(2) + "\n";
}

}  // namespace ctgen
