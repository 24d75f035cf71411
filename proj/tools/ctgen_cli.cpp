// Command-line front end over the C interface.
#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unistd.h>
#include <vector>

#include "ctgen/ctgen.h"

namespace {

using json = nlohmann::json;
using Vec = std::vector<int64_t>;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitUnequalSums = 3;
constexpr int kExitNotBigraphical = 4;
constexpr int kExitNotGraphical = 5;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StatusError : std::runtime_error {
  ctg_status status;
  StatusError(ctg_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(ctg_status s) {
  if (s != CTG_OK)
    throw StatusError(s, std::string(ctg_status_string(s)) + ": " + ctg_last_error());
}

std::string take(char* s) {
  std::string out(s ? s : "");
  ctg_string_free(s);
  return out;
}

struct SamplerDeleter {
  void operator()(ctg_sampler* s) const { ctg_sampler_destroy(s); }
};
struct RngDeleter {
  void operator()(ctg_rng* r) const { ctg_rng_destroy(r); }
};
using SamplerPtr = std::unique_ptr<ctg_sampler, SamplerDeleter>;
using RngPtr = std::unique_ptr<ctg_rng, RngDeleter>;

Vec parse_list(const std::string& text) {
  Vec out;
  std::string item;
  std::stringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw UsageError("empty entry in list '" + text + "'");
    item = item.substr(first, last - first + 1);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw UsageError("not an integer: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

Vec parse_line(const std::string& line) {
  Vec out;
  std::stringstream in(line);
  std::string tok;
  while (in >> tok) {
    for (const auto& v : parse_list(tok)) out.push_back(v);
  }
  return out;
}

/// Reads {"rows":[..],"cols":[..]} / {"degrees":[..]} or whitespace text
/// (one line per list).
std::vector<Vec> read_input(const std::string& path, std::size_t lists) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto start = text.find_first_not_of(" \t\r\n");
  if (start != std::string::npos && text[start] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw UsageError(std::string("invalid JSON input: ") + e.what());
    }
    try {
      if (lists == 2) return {j.at("rows").get<Vec>(), j.at("cols").get<Vec>()};
      return {j.at("degrees").get<Vec>()};
    } catch (const json::exception& e) {
      throw UsageError(std::string("input JSON lacks expected arrays: ") + e.what());
    }
  }
  std::vector<Vec> out;
  std::stringstream lines(text);
  std::string line;
  while (std::getline(lines, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(parse_line(line));
  if (out.size() != lists)
    throw UsageError("expected " + std::to_string(lists) + " non-empty line(s) in " + path);
  return out;
}

struct SampleOptions {
  std::string rows, cols, degrees, input, output, format = "csv", eps_min;
  uint64_t samples = 1;
  uint64_t seed = 1;
  uint64_t max_restarts = 0;
  uint64_t memo = 0;
  int64_t force_t0 = 0;
  unsigned threads = 1;
  bool approximate = false;
  bool stats = false;
};

void add_sampling_flags(CLI::App* cmd, SampleOptions& o) {
  cmd->add_option("--input", o.input, "JSON or text file with the margins");
  cmd->add_option("--samples", o.samples, "number of samples")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "64-bit seed");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--output", o.output, "write to this file instead of stdout");
  cmd->add_flag("--approximate", o.approximate,
                "skip the exact fallback whenever switchings are available");
  cmd->add_option("--max-restarts", o.max_restarts, "restart budget per sample (0: default)");
  cmd->add_flag("--stats", o.stats, "emit parameter and rejection counters");
  cmd->add_option("--eps-min", o.eps_min, "smallest acceptable epsilon, as p/q");
  cmd->add_option("--force-t0", o.force_t0,
                  "pin t0 on a small instance after exhaustive verification");
  cmd->add_option("--memo", o.memo, "counting cache capacity in entries (0: off)");
  cmd->add_option("--threads", o.threads, "worker count")->check(CLI::PositiveNumber);
}

ctg_config config_of(const SampleOptions& o) {
  ctg_config c;
  ctg_config_init(&c);
  c.approximate = o.approximate ? 1 : 0;
  c.max_restarts = o.max_restarts;
  c.memo_capacity = o.memo;
  c.eps_min = o.eps_min.empty() ? nullptr : o.eps_min.c_str();
  c.force_t0 = o.force_t0;
  return c;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

/// Samples with `threads` workers. Sample i goes to worker i mod threads;
/// a single worker uses the seed itself, worker w of several uses
/// ctg_derive_seed(seed, w).
int run_sampling(const SampleOptions& o, bool multigraph) {
  std::vector<Vec> lists;
  if (!o.input.empty()) {
    lists = read_input(o.input, multigraph ? 1 : 2);
  } else if (multigraph) {
    if (o.degrees.empty()) throw UsageError("--degrees or --input is required");
    lists = {parse_list(o.degrees)};
  } else {
    if (o.rows.empty() || o.cols.empty()) throw UsageError("--rows and --cols, or --input, are required");
    lists = {parse_list(o.rows), parse_list(o.cols)};
  }
  const ctg_config config = config_of(o);
  const unsigned workers = static_cast<unsigned>(
      std::min<uint64_t>(o.threads, std::max<uint64_t>(o.samples, 1)));

  std::vector<SamplerPtr> samplers;
  for (unsigned w = 0; w < workers; ++w) {
    ctg_sampler* s = nullptr;
    if (multigraph)
      check(ctg_multigraph_sampler_create(lists[0].data(), lists[0].size(), &config, &s));
    else
      check(ctg_table_sampler_create(lists[0].data(), lists[0].size(), lists[1].data(),
                                     lists[1].size(), &config, &s));
    samplers.emplace_back(s);
  }
  size_t rows = 0, cols = 0;
  check(ctg_sampler_shape(samplers[0].get(), &rows, &cols));
  const size_t cells = rows * cols;
  std::vector<int64_t> out(o.samples * cells);
  std::vector<std::optional<StatusError>> errors(workers);

  auto work = [&](unsigned w) {
    try {
      ctg_rng* raw = nullptr;
      check(ctg_rng_create(workers == 1 ? o.seed : ctg_derive_seed(o.seed, w), &raw));
      RngPtr rng(raw);
      for (uint64_t i = w; i < o.samples; i += workers)
        check(ctg_sampler_sample(samplers[w].get(), rng.get(), out.data() + i * cells, cells));
    } catch (const StatusError& e) {
      errors[w] = e;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) throw *e;

  const bool as_json = o.format == "json";
  std::string text = take([&] {
    char* s = nullptr;
    check(ctg_format_samples(multigraph ? 1 : 0, as_json ? 1 : 0, out.data(), o.samples, rows,
                             cols, &s));
    return s;
  }());
  json stats = json::array();
  if (o.stats) {
    for (const auto& s : samplers) {
      char* raw = nullptr;
      check(ctg_sampler_stats_json(s.get(), &raw));
      stats.push_back(json::parse(take(raw)));
    }
  }
  if (as_json) {
    json doc = json::parse(text);
    doc["seed"] = o.seed;
    doc["approximate"] = o.approximate;
    doc["threads"] = workers;
    if (o.stats) doc["stats"] = stats;
    text = doc.dump() + "\n";
  } else {
    if (o.approximate)
      std::cerr << "note: approximate run; outputs are uniform only over multigraphs "
                   "reachable without the exact fallback\n";
    if (o.stats) std::cerr << stats.dump() << "\n";
  }
  write_output(o.output, text);
  return 0;
}

int run_count(const std::string& rows, const std::string& cols, const std::string& degrees,
              const std::string& input, int64_t t, const std::string& format) {
  char* raw = nullptr;
  if (!degrees.empty()) {
    const Vec d = parse_list(degrees);
    check(ctg_count_multigraphs(d.data(), d.size(), t, &raw));
  } else {
    std::vector<Vec> lists;
    if (!input.empty())
      lists = read_input(input, 2);
    else if (!rows.empty() && !cols.empty())
      lists = {parse_list(rows), parse_list(cols)};
    else
      throw UsageError("--rows and --cols, --degrees, or --input are required");
    check(ctg_count(lists[0].data(), lists[0].size(), lists[1].data(), lists[1].size(), t, &raw));
  }
  const std::string n = take(raw);
  if (format == "json")
    std::cout << json{{"format", 1}, {"t", t}, {"count", n}}.dump() << "\n";
  else
    std::cout << n << "\n";
  return 0;
}

std::string self_path(const char* argv0) {
  char buf[4096];
  const ssize_t n = readlink("/proc/self/exe", buf, sizeof(buf) - 1);
  if (n > 0) return std::string(buf, static_cast<std::size_t>(n));
  return argv0;
}

int run_verify(const std::string& criteria, bool skip_supp, const std::string& cli,
               const std::string& output) {
  std::vector<int64_t> ids;
  if (criteria.empty()) {
    for (int i = 1; i <= 10; ++i) ids.push_back(i);
  } else {
    ids = parse_list(criteria);
  }
  json results = json::array();
  bool all = true;
  for (const auto id : ids) {
    char *report = nullptr, *lines = nullptr;
    int passed = 0;
    check(ctg_verify(static_cast<int>(id), cli.c_str(), skip_supp ? 1 : 0, &report, &lines,
                     &passed));
    std::cerr << take(lines);
    for (auto& r : json::parse(take(report))["results"]) results.push_back(r);
    all = all && passed;
  }
  write_output(output, json{{"format", 1}, {"results", results}, {"pass", all}}.dump(2) + "\n");
  return all ? 0 : kExitFailure;
}

int run_bench(const std::string& sizes, int64_t degree, uint64_t samples, uint64_t seed,
              bool approximate, double budget, uint64_t memo, const std::string& output) {
  const Vec sides = parse_list(sizes);
  json rows = json::array();
  double previous = 0;
  for (const auto n : sides) {
    if (n <= 0) throw UsageError("sizes must be positive");
    const Vec margin(static_cast<std::size_t>(n), degree);
    ctg_config config;
    ctg_config_init(&config);
    config.approximate = approximate ? 1 : 0;
    config.memo_capacity = memo;
    config.max_restarts = 20;  // chunking so the budget can be enforced
    config.counting_seconds = budget;
    ctg_sampler* raw = nullptr;
    const auto setup_start = std::chrono::steady_clock::now();
    check(ctg_table_sampler_create(margin.data(), margin.size(), margin.data(), margin.size(),
                                   &config, &raw));
    SamplerPtr sampler(raw);
    ctg_rng* r = nullptr;
    check(ctg_rng_create(seed, &r));
    RngPtr rng(r);
    std::vector<int64_t> cells(static_cast<std::size_t>(n * n));
    const auto start = std::chrono::steady_clock::now();
    uint64_t done = 0;
    bool counting_cut = false;
    while (done < samples) {
      const ctg_status s = ctg_sampler_sample(sampler.get(), rng.get(), cells.data(), cells.size());
      if (s == CTG_OK) {
        ++done;
      } else if (s == CTG_TOO_LARGE) {
        counting_cut = true;
        break;
      } else if (s != CTG_APPROXIMATE_CUTOFF) {
        check(s);
      }
      if (std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > budget)
        break;
    }
    const auto end = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(end - start).count();
    const double per = done ? secs / static_cast<double>(done) : 0;
    char* st = nullptr;
    check(ctg_sampler_stats_json(sampler.get(), &st));
    json row = {{"n", n},
                {"samples", done},
                {"complete", done == samples},
                {"counting_cut", counting_cut},
                {"seconds", secs},
                {"setup_seconds",
                 std::chrono::duration<double>(start - setup_start).count()},
                {"seconds_per_sample", per},
                {"stats", json::parse(take(st))}};
    if (previous > 0 && per > 0) row["ratio_to_previous"] = per / previous;
    previous = done == samples ? per : 0;
    std::cerr << "n=" << n << " " << done << "/" << samples << " samples, "
              << per * 1e6 << " us/sample\n";
    rows.push_back(row);
  }
  write_output(output, json{{"format", 1}, {"approximate", approximate}, {"runs", rows}}.dump(2) + "\n");
  return 0;
}

int exit_code_for(ctg_status s) {
  switch (s) {
    case CTG_UNEQUAL_SUMS: return kExitUnequalSums;
    case CTG_NOT_BIGRAPHICAL: return kExitNotBigraphical;
    case CTG_NOT_GRAPHICAL: return kExitNotGraphical;
    default: return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform sampling of contingency tables and loopless multigraphs"};
  app.require_subcommand(1);

  SampleOptions table_opts, graph_opts;
  auto* sample = app.add_subcommand("sample", "sample contingency tables");
  sample->add_option("--rows", table_opts.rows, "row sums, comma separated");
  sample->add_option("--cols", table_opts.cols, "column sums, comma separated");
  add_sampling_flags(sample, table_opts);

  auto* multigraph = app.add_subcommand("multigraph", "sample loopless multigraphs");
  multigraph->add_option("--degrees", graph_opts.degrees, "degrees, comma separated");
  add_sampling_flags(multigraph, graph_opts);

  std::string c_rows, c_cols, c_degrees, c_input, c_format = "text";
  int64_t c_t = 0;
  uint64_t unused_seed = 0;
  auto* count = app.add_subcommand("count", "count tables by total multiplicity");
  count->add_option("--rows", c_rows, "row sums");
  count->add_option("--cols", c_cols, "column sums");
  count->add_option("--degrees", c_degrees, "count loopless multigraphs instead");
  count->add_option("--input", c_input, "JSON or text file with the margins");
  count->add_option("--t", c_t, "sum of the entries that are at least 2")->required();
  count->add_option("--format", c_format, "text or json")->check(CLI::IsMember({"text", "json"}));
  count->add_option("--seed", unused_seed, "accepted for uniformity; counting is deterministic");

  std::string v_criteria, v_cli, v_output;
  bool v_skip = false;
  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  verify->add_option("--criteria", v_criteria, "comma list of criterion ids (default: all)");
  verify->add_flag("--no-supplementary", v_skip, "skip supplementary runs");
  verify->add_option("--cli", v_cli, "tool used for the byte-identity check (default: this one)");
  verify->add_option("--output", v_output, "write the JSON report here");
  verify->add_option("--seed", unused_seed, "accepted for uniformity; criteria pin their seeds");

  std::string b_sizes = "64,128,256,512", b_output;
  int64_t b_degree = 2;
  uint64_t b_samples = 1000, b_seed = 1, b_memo = std::size_t{1} << 20;
  double b_budget = 60;
  bool b_approx = false;
  auto* bench = app.add_subcommand("bench", "time sampling on d-regular n x n margins");
  bench->add_option("--sizes", b_sizes, "comma list of n");
  bench->add_option("--degree", b_degree, "common margin value");
  bench->add_option("--samples", b_samples, "samples per size");
  bench->add_option("--seed", b_seed, "64-bit seed");
  bench->add_flag("--approximate", b_approx, "approximate mode");
  bench->add_option("--budget", b_budget, "wall-clock seconds per size");
  bench->add_option("--memo", b_memo, "counting cache capacity");
  bench->add_option("--output", b_output, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sample) return run_sampling(table_opts, false);
    if (*multigraph) return run_sampling(graph_opts, true);
    if (*count) return run_count(c_rows, c_cols, c_degrees, c_input, c_t, c_format);
    if (*verify)
      return run_verify(v_criteria, v_skip, v_cli.empty() ? self_path(argv[0]) : v_cli,
                        v_output);
    if (*bench)
      return run_bench(b_sizes, b_degree, b_samples, b_seed, b_approx, b_budget, b_memo,
                       b_output);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const StatusError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.status);
  }
  return kExitUsage;
}
