#include "ctgen/driver.hpp"

#include <cmath>
#include <json.hpp>

#include "ctgen/error.hpp"

namespace ctgen {

std::uint64_t default_restart_budget(std::int64_t M) {
  const double m = static_cast<double>(std::max<std::int64_t>(M, 2));
  return static_cast<std::uint64_t>(std::ceil(m * std::log(m)));
}

Sampler::Sampler(ParameterSet params, SamplerConfig config)
    : params_(std::make_shared<const ParameterSet>(std::move(params))),
      config_(config),
      simple_(params_->data()),
      gen_(std::make_unique<GenRunner>(*params_)),
      counter_(std::make_unique<Counter>(config.memo_capacity)) {
  limit_ = config_.max_restarts;
  if (config_.approximate && !limit_) limit_ = default_restart_budget(params_->M());
  counter_->set_deadline(config_.deadline);
}

BruteRunner& Sampler::brute() {
  if (!brute_) brute_ = std::make_unique<BruteRunner>(*params_, *counter_);
  return *brute_;
}

MultiGraph Sampler::sample(BitSource& src) {
  std::uint64_t restarts = 0;
  for (;;) {
    if (params_->delta() <= 1) {
      ++stats_.simple_shortcuts;
      ++stats_.samples;
      return simple_.sample(src);
    }
    bool use_brute = params_->t0() <= 0;
    if (!use_brute && !config_.approximate) use_brute = bernoulli(params_->rho_hat(), src);
    if (use_brute) {
      ++stats_.brute_calls;
      BruteOutcome out = brute().run(src);
      if (out.accepted) {
        ++stats_.brute_accepts;
        ++stats_.samples;
        return std::move(out.graph);
      }
      ++stats_.brute_rejects;
    } else {
      ++stats_.gen_calls;
      MultiGraph g = simple_.sample(src);
      if (gen_->run(g, src) == GenResult::Output) {
        ++stats_.samples;
        return g;
      }
    }
    ++restarts;
    ++stats_.restarts;
    if (limit_ && restarts > *limit_)
      fail(ErrorCode::ApproximateCutoff,
           "gave up after " + std::to_string(restarts) + " restarts");
  }
}

std::string Sampler::stats_json() const {
  const GenStats& g = gen_->stats();
  nlohmann::json max_m2 = nlohmann::json::object();
  for (const auto& [k, v] : g.max_m2) max_m2[std::to_string(k)] = v;
  nlohmann::json j = {
      {"format", 1},
      {"topology", params_->data().is_bipartite() ? "bipartite" : "loopless"},
      {"approximate", config_.approximate},
      {"t0", params_->t0()},
      {"eps", params_->eps().get_str()},
      {"rho_hat", params_->rho_hat().get_d()},
      {"samples", stats_.samples},
      {"restarts", stats_.restarts},
      {"gen_calls", stats_.gen_calls},
      {"brute_calls", stats_.brute_calls},
      {"brute_accepts", stats_.brute_accepts},
      {"brute_rejects", stats_.brute_rejects},
      {"simple_shortcuts", stats_.simple_shortcuts},
      {"simple_attempts", simple_.attempts()},
      {"gen",
       {{"runs", g.runs},
        {"outputs", g.outputs},
        {"iterations", g.iterations},
        {"f_rejects", g.f_rejects},
        {"b_rejects", g.b_rejects},
        {"beta_rejects", g.beta_rejects},
        {"graph_ops", g.graph_ops},
        {"max_m2", max_m2},
        {"bound_violations", g.bound_violations},
        {"mass_violations", g.mass_violations},
        {"ratio_violations", g.ratio_violations}}},
      {"memo_entries", counter_->memo_size()},
  };
  return j.dump();
}

Sampler make_table_sampler(const Marginals& marginals, SamplerConfig config,
                           const Rational& eps_min) {
  const DegreeData data = DegreeData::bipartite(marginals);
  ParameterSet params = ParameterSet::build(data, eps_min);
  if ((params.t0() > 0 || data.delta <= 1) && !is_bigraphical(marginals))
    fail(ErrorCode::NotBigraphical,
         "marginals have no simple bipartite realisation");
  return Sampler(std::move(params), config);
}

}  // namespace ctgen
