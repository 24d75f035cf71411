#include <chrono>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "ctgen/brute.hpp"
#include "ctgen/ctgen.h"
#include "ctgen/driver.hpp"
#include "ctgen/error.hpp"
#include "ctgen/format.hpp"
#include "ctgen/multigraphgen.hpp"
#include "ctgen/oracle.hpp"
#include "ctgen/verify.hpp"

using namespace ctgen;

struct ctg_rng {
  BitSource src;
};

struct ctg_sampler {
  Sampler sampler;
  bool multigraph = false;
  std::optional<Marginals> marginals;
  std::optional<DegreeSequence> degrees;
};

namespace {

thread_local std::string last_error;

ctg_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return CTG_INVALID_ARGUMENT;
    case ErrorCode::UnequalSums: return CTG_UNEQUAL_SUMS;
    case ErrorCode::Empty: return CTG_EMPTY;
    case ErrorCode::NotBigraphical: return CTG_NOT_BIGRAPHICAL;
    case ErrorCode::NotGraphical: return CTG_NOT_GRAPHICAL;
    case ErrorCode::OddSum: return CTG_ODD_SUM;
    case ErrorCode::ProbabilityOutOfRange: return CTG_PROBABILITY_OUT_OF_RANGE;
    case ErrorCode::InvalidDistribution: return CTG_INVALID_DISTRIBUTION;
    case ErrorCode::InvariantViolation: return CTG_INVARIANT_VIOLATION;
    case ErrorCode::Infeasible: return CTG_INFEASIBLE;
    case ErrorCode::ApproximateCutoff: return CTG_APPROXIMATE_CUTOFF;
    case ErrorCode::FixtureInvalid: return CTG_FIXTURE_INVALID;
    case ErrorCode::TooLarge: return CTG_TOO_LARGE;
    case ErrorCode::InsufficientSamples: return CTG_INSUFFICIENT_SAMPLES;
  }
  return CTG_INTERNAL;
}

template <class F>
ctg_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return CTG_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CTG_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CTG_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) fail(ErrorCode::InvalidArgument, what);
}

SamplerConfig sampler_config(const ctg_config* c) {
  SamplerConfig out;
  if (!c) return out;
  out.approximate = c->approximate != 0;
  if (c->max_restarts > 0) out.max_restarts = c->max_restarts;
  out.memo_capacity = static_cast<std::size_t>(c->memo_capacity);
  if (c->counting_seconds > 0)
    out.deadline = std::chrono::steady_clock::now() +
                   std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                       std::chrono::duration<double>(c->counting_seconds));
  return out;
}

Rational eps_min_of(const ctg_config* c) {
  if (!c || !c->eps_min) return Rational(1, 8);
  Rational q;
  if (q.set_str(c->eps_min, 10) != 0) fail(ErrorCode::InvalidArgument, "eps_min must be p/q");
  q.canonicalize();
  if (q <= 0 || q >= 1) fail(ErrorCode::InvalidArgument, "eps_min must lie in (0, 1)");
  return q;
}

std::span<const std::int64_t> view(const int64_t* p, std::size_t n) {
  require(p || n == 0, "null array");
  return {reinterpret_cast<const std::int64_t*>(p), n};
}

}  // namespace

extern "C" {

void ctg_config_init(ctg_config* config) {
  if (!config) return;
  config->approximate = 0;
  config->max_restarts = 0;
  config->memo_capacity = 0;
  config->eps_min = nullptr;
  config->force_t0 = 0;
  config->counting_seconds = 0;
}

const char* ctg_status_string(ctg_status status) {
  switch (status) {
    case CTG_OK: return "Ok";
    case CTG_INTERNAL: return "Internal";
    default: break;
  }
  if (status > CTG_OK && status < CTG_INTERNAL)
    return to_string(static_cast<ErrorCode>(static_cast<int>(status) - 1));
  return "Unknown";
}

const char* ctg_last_error(void) { return last_error.c_str(); }

void ctg_string_free(char* s) { delete[] s; }

ctg_status ctg_rng_create(uint64_t seed, ctg_rng** out) {
  return guarded([&] {
    require(out, "null output pointer");
    *out = new ctg_rng{BitSource(seed)};
  });
}

void ctg_rng_destroy(ctg_rng* rng) { delete rng; }

uint64_t ctg_derive_seed(uint64_t seed, uint64_t index) { return derive_seed(seed, index); }

ctg_status ctg_table_sampler_create(const int64_t* rows, size_t n_rows,
                                    const int64_t* cols, size_t n_cols,
                                    const ctg_config* config, ctg_sampler** out) {
  return guarded([&] {
    require(out, "null output pointer");
    *out = nullptr;
    Marginals marg = Marginals::validate(view(rows, n_rows), view(cols, n_cols));
    const SamplerConfig sc = sampler_config(config);
    std::optional<Sampler> sampler;
    if (config && config->force_t0 > 0) {
      if (!is_bigraphical(marg))
        fail(ErrorCode::NotBigraphical, "a pinned t0 needs a simple realisation");
      sampler.emplace(forced_parameter_fixture(DegreeData::bipartite(marg), config->force_t0),
                      sc);
    } else {
      sampler.emplace(make_table_sampler(marg, sc, eps_min_of(config)));
    }
    *out = new ctg_sampler{std::move(*sampler), false, std::move(marg), std::nullopt};
  });
}

ctg_status ctg_multigraph_sampler_create(const int64_t* degrees, size_t n,
                                         const ctg_config* config, ctg_sampler** out) {
  return guarded([&] {
    require(out, "null output pointer");
    *out = nullptr;
    DegreeSequence seq = DegreeSequence::validate(view(degrees, n));
    const SamplerConfig sc = sampler_config(config);
    std::optional<Sampler> sampler;
    if (config && config->force_t0 > 0) {
      if (!is_graphical(seq.degrees()))
        fail(ErrorCode::NotGraphical, "a pinned t0 needs a simple realisation");
      sampler.emplace(
          forced_parameter_fixture(DegreeData::loopless(seq.degrees()), config->force_t0), sc);
    } else {
      sampler.emplace(make_multigraph_sampler(seq, sc, eps_min_of(config)));
    }
    *out = new ctg_sampler{std::move(*sampler), true, std::nullopt, std::move(seq)};
  });
}

void ctg_sampler_destroy(ctg_sampler* sampler) { delete sampler; }

ctg_status ctg_sampler_shape(const ctg_sampler* sampler, size_t* rows, size_t* cols) {
  return guarded([&] {
    require(sampler && rows && cols, "null argument");
    if (sampler->multigraph) {
      *rows = *cols = sampler->degrees->raw().size();
    } else {
      *rows = sampler->marginals->raw_rows().size();
      *cols = sampler->marginals->raw_cols().size();
    }
  });
}

ctg_status ctg_sampler_sample(ctg_sampler* sampler, ctg_rng* rng, int64_t* cells,
                              size_t n_cells) {
  return guarded([&] {
    require(sampler && rng && cells, "null argument");
    size_t rows = 0, cols = 0;
    ctg_sampler_shape(sampler, &rows, &cols);
    require(n_cells == rows * cols, "cell buffer has the wrong size");
    const MultiGraph g = sampler->sampler.sample(rng->src);
    Matrix full;
    if (sampler->multigraph) {
      full = inflate_adjacency(g.to_matrix(), *sampler->degrees);
    } else {
      const Marginals& m = *sampler->marginals;
      full = inflate(g.to_matrix(), m.raw_rows().size(), m.row_index(), m.raw_cols().size(),
                     m.col_index());
    }
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j < cols; ++j) cells[i * cols + j] = full[i][j];
  });
}

ctg_status ctg_sampler_stats_json(const ctg_sampler* sampler, char** out) {
  return guarded([&] {
    require(sampler && out, "null argument");
    *out = copy_string(sampler->sampler.stats_json());
  });
}

ctg_status ctg_count(const int64_t* rows, size_t n_rows, const int64_t* cols, size_t n_cols,
                     int64_t t, char** out) {
  return guarded([&] {
    require(out, "null output pointer");
    require(t >= 0, "t must be nonnegative");
    const Marginals marg = Marginals::validate(view(rows, n_rows), view(cols, n_cols));
    Counter counter(std::size_t{1} << 20);
    const BigInt n = t > marg.total() ? BigInt(0)
                                      : count_tables(counter, marg.rows(), marg.cols(), t);
    *out = copy_string(n.get_str());
  });
}

ctg_status ctg_count_multigraphs(const int64_t* degrees, size_t n, int64_t t, char** out) {
  return guarded([&] {
    require(out, "null output pointer");
    require(t >= 0, "t must be nonnegative");
    const DegreeSequence seq = DegreeSequence::validate(view(degrees, n));
    Counter counter(std::size_t{1} << 20);
    const Profile p = counter.loopless(seq.degrees());
    const BigInt c = static_cast<std::size_t>(t) < p.size() ? p[t] : BigInt(0);
    *out = copy_string(c.get_str());
  });
}

ctg_status ctg_format_samples(int kind, int json, const int64_t* cells, size_t count,
                              size_t rows, size_t cols, char** out) {
  return guarded([&] {
    require(out && (cells || count == 0), "null argument");
    require(kind == 0 || kind == 1, "kind must be 0 or 1");
    std::vector<Matrix> items(count, Matrix(rows, std::vector<std::int64_t>(cols)));
    for (size_t s = 0; s < count; ++s)
      for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) items[s][i][j] = cells[(s * rows + i) * cols + j];
    std::string text = kind == 0 ? (json ? tables_json(items) : tables_csv(items))
                                 : (json ? multigraphs_json(items) : multigraphs_csv(items));
    *out = copy_string(text);
  });
}

ctg_status ctg_verify(int id, const char* cli_path, int skip_supplementary, char** report_json,
                      char** lines, int* passed) {
  return guarded([&] {
    require(id >= 1 && id <= kCriterionCount, "criterion id out of range");
    VerifyOptions options;
    if (cli_path) options.cli_path = cli_path;
    options.skip_supplementary = skip_supplementary != 0;
    const auto results = run_criterion(id, options);
    std::string text;
    for (const auto& r : results) text += result_line(r) + "\n";
    if (report_json) *report_json = copy_string(results_json(results));
    if (lines) *lines = copy_string(text);
    if (passed) *passed = !results.empty() && results.front().pass ? 1 : 0;
  });
}

}  // extern "C"
