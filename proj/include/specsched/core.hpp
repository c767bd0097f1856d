#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace specsched {

// All durations and timestamps are integer microseconds so that the simulator
// is deterministic and platform-independent. Reports convert to milliseconds.
using Micros = std::int64_t;

double us_to_ms(Micros us);
Micros ms_to_us(double ms);

struct ValidationResult {
  bool ok = true;
  std::string message;

  explicit operator bool() const { return ok; }
  static ValidationResult pass() { return {}; }
  static ValidationResult fail(std::string msg) { return {false, std::move(msg)}; }
};

// The (alpha, beta, gamma) latency triple of the pipeline timing model:
// communication startup overhead, per-token transmission time, per-token
// autoregressive generation time.
struct PipelineParams {
  Micros alpha_us = 0;
  Micros beta_us = 1;
  Micros gamma_us = 1;

  static PipelineParams from_ms(double alpha_ms, double beta_ms, double gamma_ms);
  ValidationResult validate() const;
};

// Strictly increasing batch boundary sequence (1-based). boundaries[k] is the
// index of the first draft token of batch k; the last batch runs to the end of
// the window.
struct BatchingStrategy {
  std::vector<int> boundaries;

  int num_batches() const { return static_cast<int>(boundaries.size()); }
  bool operator==(const BatchingStrategy& other) const { return boundaries == other.boundaries; }
};

// Checks b1 = 1, strict monotonicity and b_K <= n_hat. Returns a description
// naming the violated constraint on failure.
ValidationResult validate_strategy(const BatchingStrategy& strategy, int n_hat);

struct TriggerThresholds {
  double r1 = 0.4;   // cumulative sequence confidence threshold
  double r2 = 0.35;  // single-token confidence threshold
  int max_draft_len = 64;

  ValidationResult validate() const;
};

struct DraftToken {
  std::uint32_t token_id = 0;
  double confidence = 1.0;
  int position = 1;  // 1-based index within the current round
};

struct VerificationResult {
  int n_accepted = 0;
  std::optional<std::uint32_t> correction;  // present iff a draft token mismatched
  std::optional<std::uint32_t> bonus;       // present iff every draft token matched

  ValidationResult validate(int n_submitted) const;
};

struct RunMetrics {
  double tpt_ms = 0.0;               // total_time / accepted output tokens
  double ecs_joules = 0.0;           // cloud energy per 100 accepted tokens
  double verification_frequency = 0.0;  // NAV calls per generated draft token
  double mean_draft_length = 0.0;       // submitted draft tokens per NAV call
  double acceptance_rate = 0.0;         // accepted draft tokens / submitted
  Micros total_time_us = 0;
  std::int64_t accepted_tokens = 0;  // output tokens: accepted + corrections + bonuses
  std::int64_t drafted_tokens = 0;
  std::int64_t submitted_tokens = 0;
  std::int64_t accepted_draft_tokens = 0;
  std::int64_t nav_calls = 0;
  // Control-plane time charged to the session clock.
  Micros bo_overhead_us = 0;
  Micros dp_overhead_us = 0;
  Micros pm_overhead_us = 0;

  double bo_overhead_pct() const;
  double dp_overhead_pct() const;
  double pm_overhead_pct() const;
};

// Link bandwidth over simulated time: a constant, an explicit piecewise
// schedule (cycled), or a seeded uniform redraw every interval_s seconds.
struct BandwidthSpec {
  enum class Kind { Fixed, Piecewise, RandomHold };

  Kind kind = Kind::Fixed;
  double fixed_bps = 20e6;
  std::vector<std::pair<double, double>> pieces;  // (duration_s, bps)
  double interval_s = 20.0;
  double min_bps = 10e6;
  double max_bps = 80e6;

  static BandwidthSpec fixed(double bps);
  ValidationResult validate() const;
};

// Per-policy trigger knobs; scenario files may override any of them.
struct MethodParams {
  double r1 = 0.4;                // dual: cumulative sequence threshold
  double r2 = 0.35;               // dual: single-token threshold
  double token_r = 0.6;           // token-level baseline threshold
  double seq_r1 = 0.4;            // sequence-level baseline threshold
  double adaptive_r1_init = 0.4;  // adaptive sequence threshold, initial value
  int fixed_n = 6;                // fixed-length baseline draft size
};

// Simulated-time charges for control-plane work, so overhead percentages are
// measurable quantities rather than wall-clock artifacts.
struct ChargedCosts {
  double dp_op_cost_us = 1.0;        // per DP inner-loop relaxation
  double bo_step_cost_us = 2000.0;   // per GP fit + acquisition maximization
  double estimator_cost_us = 100.0;  // per sliding-window re-fit
};

struct ScenarioConfig {
  BandwidthSpec uplink;
  BandwidthSpec downlink;
  double edge_frequency_real_ghz = 5.1;
  double edge_frequency_sim_ghz = 5.1;
  double base_token_gen_time_ms = 100.0;
  std::int64_t token_payload_bytes = 2048;  // wire size per draft token, framing included
  double comm_startup_ms = 20.0;            // alpha
  double nav_base_latency_ms = 40.0;
  double nav_per_token_latency_ms = 1.0;
  double cloud_idle_power_w = 80.0;
  double cloud_verify_power_w = 250.0;
  std::uint64_t seed = 1;
  int vocab_size = 32000;
  double draft_beta_a = 8.0;
  double draft_beta_b = 2.0;
  double draft_kappa = 1.0;
  int n_hat_init = 20;
  int window_capacity = 100;
  int max_draft_len = 64;
  double delta1 = 0.2;
  double delta2 = 0.2;
  double delta3 = 0.2;
  int bo_budget = 16;
  double bo_xi = 0.1;
  double max_sim_time_s = 36000.0;
  MethodParams methods;
  ChargedCosts costs;
  std::string name = "unnamed";

  ValidationResult validate() const;
};

ScenarioConfig load_scenario_file(const std::string& path);
ScenarioConfig load_scenario_json_text(const std::string& text);
std::string scenario_to_json_text(const ScenarioConfig& config);

ScenarioConfig default_scenario();

}  // namespace specsched
