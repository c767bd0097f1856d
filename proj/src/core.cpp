#include "specsched/core.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace specsched {

using nlohmann::json;

double us_to_ms(Micros us) { return static_cast<double>(us) / 1000.0; }

Micros ms_to_us(double ms) { return static_cast<Micros>(std::llround(ms * 1000.0)); }

PipelineParams PipelineParams::from_ms(double alpha_ms, double beta_ms, double gamma_ms) {
  return PipelineParams{ms_to_us(alpha_ms), ms_to_us(beta_ms), ms_to_us(gamma_ms)};
}

ValidationResult PipelineParams::validate() const {
  if (alpha_us < 0) return ValidationResult::fail("alpha < 0");
  if (beta_us <= 0) return ValidationResult::fail("beta <= 0");
  if (gamma_us <= 0) return ValidationResult::fail("gamma <= 0");
  return ValidationResult::pass();
}

ValidationResult validate_strategy(const BatchingStrategy& strategy, int n_hat) {
  const auto& b = strategy.boundaries;
  if (b.empty()) return ValidationResult::fail("empty boundary sequence");
  if (n_hat < 1) return ValidationResult::fail("n_hat < 1");
  if (b.front() != 1) return ValidationResult::fail("b1 != 1");
  for (std::size_t k = 1; k < b.size(); ++k) {
    if (b[k] <= b[k - 1]) return ValidationResult::fail("not strictly increasing");
  }
  if (b.back() > n_hat) return ValidationResult::fail("b_K > n_hat");
  return ValidationResult::pass();
}

ValidationResult TriggerThresholds::validate() const {
  if (!(r1 > 0.0 && r1 < 1.0)) return ValidationResult::fail("r1 outside (0,1)");
  if (!(r2 > 0.0 && r2 < 1.0)) return ValidationResult::fail("r2 outside (0,1)");
  if (max_draft_len < 1) return ValidationResult::fail("max_draft_len < 1");
  return ValidationResult::pass();
}

ValidationResult VerificationResult::validate(int n_submitted) const {
  if (n_accepted < 0 || n_accepted > n_submitted)
    return ValidationResult::fail("n_accepted outside [0, n_submitted]");
  if (correction.has_value() == bonus.has_value())
    return ValidationResult::fail("exactly one of correction/bonus must be present");
  if (bonus.has_value() && n_accepted != n_submitted)
    return ValidationResult::fail("bonus present but not all tokens accepted");
  if (correction.has_value() && n_accepted == n_submitted)
    return ValidationResult::fail("correction present but all tokens accepted");
  return ValidationResult::pass();
}

namespace {

double pct_of(Micros part, Micros total) {
  if (total <= 0) return 0.0;
  return 100.0 * static_cast<double>(part) / static_cast<double>(total);
}

}  // namespace

double RunMetrics::bo_overhead_pct() const { return pct_of(bo_overhead_us, total_time_us); }
double RunMetrics::dp_overhead_pct() const { return pct_of(dp_overhead_us, total_time_us); }
double RunMetrics::pm_overhead_pct() const { return pct_of(pm_overhead_us, total_time_us); }

BandwidthSpec BandwidthSpec::fixed(double bps) {
  BandwidthSpec s;
  s.kind = Kind::Fixed;
  s.fixed_bps = bps;
  return s;
}

ValidationResult BandwidthSpec::validate() const {
  switch (kind) {
    case Kind::Fixed:
      if (fixed_bps <= 0) return ValidationResult::fail("bandwidth <= 0");
      break;
    case Kind::Piecewise:
      if (pieces.empty()) return ValidationResult::fail("empty bandwidth schedule");
      for (const auto& [dur, bps] : pieces) {
        if (dur <= 0 || bps <= 0) return ValidationResult::fail("non-positive schedule entry");
      }
      break;
    case Kind::RandomHold:
      if (interval_s <= 0) return ValidationResult::fail("interval_s <= 0");
      if (min_bps <= 0 || max_bps < min_bps)
        return ValidationResult::fail("invalid bandwidth range");
      break;
  }
  return ValidationResult::pass();
}

ValidationResult ScenarioConfig::validate() const {
  if (auto v = uplink.validate(); !v) return ValidationResult::fail("uplink: " + v.message);
  if (auto v = downlink.validate(); !v) return ValidationResult::fail("downlink: " + v.message);
  if (edge_frequency_real_ghz <= 0 || edge_frequency_sim_ghz <= 0)
    return ValidationResult::fail("edge frequency <= 0");
  if (edge_frequency_sim_ghz > edge_frequency_real_ghz)
    return ValidationResult::fail("simulated frequency exceeds the real frequency");
  if (base_token_gen_time_ms <= 0) return ValidationResult::fail("base_token_gen_time <= 0");
  if (token_payload_bytes <= 0) return ValidationResult::fail("token_payload_bytes <= 0");
  if (comm_startup_ms < 0) return ValidationResult::fail("comm_startup < 0");
  if (nav_base_latency_ms < 0 || nav_per_token_latency_ms < 0)
    return ValidationResult::fail("negative NAV latency");
  if (cloud_idle_power_w <= 0 || cloud_verify_power_w < cloud_idle_power_w)
    return ValidationResult::fail("cloud power must satisfy verify >= idle > 0");
  if (vocab_size < 2) return ValidationResult::fail("vocab_size < 2");
  if (draft_beta_a <= 0 || draft_beta_b <= 0 || draft_kappa <= 0)
    return ValidationResult::fail("draft model shape parameters must be positive");
  if (n_hat_init < 1) return ValidationResult::fail("n_hat_init < 1");
  if (window_capacity < 1) return ValidationResult::fail("window_capacity < 1");
  if (max_draft_len < 1) return ValidationResult::fail("max_draft_len < 1");
  if (delta1 <= 0 || delta2 <= 0 || delta3 <= 0) return ValidationResult::fail("delta <= 0");
  if (bo_budget < 1) return ValidationResult::fail("bo_budget < 1");
  if (max_sim_time_s <= 0) return ValidationResult::fail("max_sim_time_s <= 0");
  return ValidationResult::pass();
}

namespace {

BandwidthSpec bandwidth_from_json(const json& j) {
  BandwidthSpec spec;
  if (j.is_number()) {
    spec.kind = BandwidthSpec::Kind::Fixed;
    spec.fixed_bps = j.get<double>();
    return spec;
  }
  if (j.is_array()) {
    spec.kind = BandwidthSpec::Kind::Piecewise;
    for (const auto& piece : j) {
      spec.pieces.emplace_back(piece.at("duration_s").get<double>(),
                               piece.at("bps").get<double>());
    }
    return spec;
  }
  if (j.is_object()) {
    spec.kind = BandwidthSpec::Kind::RandomHold;
    spec.interval_s = j.value("change_interval_s", 20.0);
    spec.min_bps = j.at("min_bps").get<double>();
    spec.max_bps = j.at("max_bps").get<double>();
    return spec;
  }
  throw std::invalid_argument("bandwidth must be a number, array, or object");
}

json bandwidth_to_json(const BandwidthSpec& spec) {
  switch (spec.kind) {
    case BandwidthSpec::Kind::Fixed:
      return spec.fixed_bps;
    case BandwidthSpec::Kind::Piecewise: {
      json arr = json::array();
      for (const auto& [dur, bps] : spec.pieces) {
        arr.push_back({{"duration_s", dur}, {"bps", bps}});
      }
      return arr;
    }
    case BandwidthSpec::Kind::RandomHold:
      return json{{"change_interval_s", spec.interval_s},
                  {"min_bps", spec.min_bps},
                  {"max_bps", spec.max_bps}};
  }
  return nullptr;
}

}  // namespace

ScenarioConfig load_scenario_json_text(const std::string& text) {
  json j = json::parse(text);
  ScenarioConfig c;
  c.name = j.value("name", std::string("unnamed"));
  if (j.contains("uplink_bandwidth_bps")) c.uplink = bandwidth_from_json(j.at("uplink_bandwidth_bps"));
  if (j.contains("downlink_bandwidth_bps"))
    c.downlink = bandwidth_from_json(j.at("downlink_bandwidth_bps"));
  else
    c.downlink = BandwidthSpec::fixed(200e6);
  c.edge_frequency_real_ghz = j.value("edge_frequency_real_ghz", c.edge_frequency_real_ghz);
  c.edge_frequency_sim_ghz = j.value("edge_frequency_sim_ghz", c.edge_frequency_sim_ghz);
  c.base_token_gen_time_ms = j.value("base_token_gen_time_ms", c.base_token_gen_time_ms);
  c.token_payload_bytes = j.value("token_payload_bytes", c.token_payload_bytes);
  c.comm_startup_ms = j.value("comm_startup_ms", c.comm_startup_ms);
  c.nav_base_latency_ms = j.value("nav_base_latency_ms", c.nav_base_latency_ms);
  c.nav_per_token_latency_ms = j.value("nav_per_token_latency_ms", c.nav_per_token_latency_ms);
  c.cloud_idle_power_w = j.value("cloud_idle_power_w", c.cloud_idle_power_w);
  c.cloud_verify_power_w = j.value("cloud_verify_power_w", c.cloud_verify_power_w);
  c.seed = j.value("seed", c.seed);
  c.vocab_size = j.value("vocab_size", c.vocab_size);
  c.draft_beta_a = j.value("draft_beta_a", c.draft_beta_a);
  c.draft_beta_b = j.value("draft_beta_b", c.draft_beta_b);
  c.draft_kappa = j.value("draft_kappa", c.draft_kappa);
  c.n_hat_init = j.value("n_hat_init", c.n_hat_init);
  c.window_capacity = j.value("window_capacity", c.window_capacity);
  c.max_draft_len = j.value("max_draft_len", c.max_draft_len);
  c.delta1 = j.value("delta1", c.delta1);
  c.delta2 = j.value("delta2", c.delta2);
  c.delta3 = j.value("delta3", c.delta3);
  c.bo_budget = j.value("bo_budget", c.bo_budget);
  c.bo_xi = j.value("bo_xi", c.bo_xi);
  c.max_sim_time_s = j.value("max_sim_time_s", c.max_sim_time_s);
  if (j.contains("methods")) {
    const json& m = j.at("methods");
    c.methods.r1 = m.value("r1", c.methods.r1);
    c.methods.r2 = m.value("r2", c.methods.r2);
    c.methods.token_r = m.value("token_r", c.methods.token_r);
    c.methods.seq_r1 = m.value("seq_r1", c.methods.seq_r1);
    c.methods.adaptive_r1_init = m.value("adaptive_r1_init", c.methods.adaptive_r1_init);
    c.methods.fixed_n = m.value("fixed_n", c.methods.fixed_n);
  }
  if (j.contains("costs")) {
    const json& k = j.at("costs");
    c.costs.dp_op_cost_us = k.value("dp_op_cost_us", c.costs.dp_op_cost_us);
    c.costs.bo_step_cost_us = k.value("bo_step_cost_us", c.costs.bo_step_cost_us);
    c.costs.estimator_cost_us = k.value("estimator_cost_us", c.costs.estimator_cost_us);
  }
  if (auto v = c.validate(); !v) throw std::invalid_argument("invalid scenario: " + v.message);
  return c;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario_json_text(ss.str());
}

std::string scenario_to_json_text(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["uplink_bandwidth_bps"] = bandwidth_to_json(c.uplink);
  j["downlink_bandwidth_bps"] = bandwidth_to_json(c.downlink);
  j["edge_frequency_real_ghz"] = c.edge_frequency_real_ghz;
  j["edge_frequency_sim_ghz"] = c.edge_frequency_sim_ghz;
  j["base_token_gen_time_ms"] = c.base_token_gen_time_ms;
  j["token_payload_bytes"] = c.token_payload_bytes;
  j["comm_startup_ms"] = c.comm_startup_ms;
  j["nav_base_latency_ms"] = c.nav_base_latency_ms;
  j["nav_per_token_latency_ms"] = c.nav_per_token_latency_ms;
  j["cloud_idle_power_w"] = c.cloud_idle_power_w;
  j["cloud_verify_power_w"] = c.cloud_verify_power_w;
  j["seed"] = c.seed;
  j["vocab_size"] = c.vocab_size;
  j["draft_beta_a"] = c.draft_beta_a;
  j["draft_beta_b"] = c.draft_beta_b;
  j["draft_kappa"] = c.draft_kappa;
  j["n_hat_init"] = c.n_hat_init;
  j["window_capacity"] = c.window_capacity;
  j["max_draft_len"] = c.max_draft_len;
  j["delta1"] = c.delta1;
  j["delta2"] = c.delta2;
  j["delta3"] = c.delta3;
  j["bo_budget"] = c.bo_budget;
  j["bo_xi"] = c.bo_xi;
  j["max_sim_time_s"] = c.max_sim_time_s;
  j["methods"] = {{"r1", c.methods.r1},
                  {"r2", c.methods.r2},
                  {"token_r", c.methods.token_r},
                  {"seq_r1", c.methods.seq_r1},
                  {"adaptive_r1_init", c.methods.adaptive_r1_init},
                  {"fixed_n", c.methods.fixed_n}};
  j["costs"] = {{"dp_op_cost_us", c.costs.dp_op_cost_us},
                {"bo_step_cost_us", c.costs.bo_step_cost_us},
                {"estimator_cost_us", c.costs.estimator_cost_us}};
  return j.dump(2);
}

ScenarioConfig default_scenario() { return ScenarioConfig{}; }

}  // namespace specsched
