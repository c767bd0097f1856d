#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "specsched/autotune.hpp"
#include "specsched/core.hpp"
#include "specsched/monitor.hpp"
#include "specsched/rng.hpp"
#include "specsched/scheduler.hpp"
#include "specsched/trigger.hpp"
#include "specsched/workload.hpp"

namespace specsched {

enum class TransmitKind { AtTrigger, DpPipelined, Greedy, Immediate };

// A policy bundle: trigger policy, transmission policy, whether drafting
// continues while a NAV is in flight, whether the environment monitor (probe
// phase, alpha/beta/gamma estimation, delta-gated re-planning) runs, and
// whether the live autotuner may re-tune thresholds on TPT shifts.
struct MethodSpec {
  std::string name = "full";
  TriggerPolicy::Kind trigger_kind = TriggerPolicy::Kind::Dual;
  TransmitKind transmit = TransmitKind::DpPipelined;
  bool proactive = true;
  bool monitored = true;
  bool autotuned = true;
};

MethodSpec method_from_name(const std::string& name);
const std::vector<std::string>& all_method_names();

enum class BatchKind { Planned, Flush, Proactive, Probe };
char batch_kind_code(BatchKind kind);

struct BatchCmd {
  std::int64_t id = 0;
  BatchKind kind = BatchKind::Planned;
  std::int64_t start_position = 0;  // absolute stream position of the first token
  std::vector<std::uint32_t> tokens;
  std::vector<double> confidences;
  int probe_size = 0;
  int round_tag = 0;

  int size() const {
    return kind == BatchKind::Probe ? probe_size : static_cast<int>(tokens.size());
  }
};

struct NavCmd {
  std::int64_t nav_id = 0;
  std::int64_t start_position = 0;
  std::vector<std::uint32_t> tokens;
  Micros requested_at = 0;
};

struct BatchEventRecord {
  std::int64_t batch_id = 0;
  char kind = 'd';
  int size = 0;
  std::int64_t start_position = 0;
  Micros send_start = 0;
  Micros send_end = 0;
};

struct RoundTranscript {
  int round_index = 0;
  std::int64_t start_position = 0;
  std::vector<std::uint32_t> draft_tokens;
  std::vector<double> confidences;
  std::vector<BatchEventRecord> sends;
  std::string trigger_reason;
  double c1_at_trigger = 1.0;
  Micros trigger_time = 0;
  Micros nav_start = 0;
  Micros nav_end = 0;
  Micros result_time = 0;
  int n_submitted = 0;
  int n_accepted = 0;
  bool bonus_present = false;
  bool proactive_kept = false;
  int proactive_drafted = 0;
  bool threshold_clamped = false;
  double r1_after = 0.0;
  double r2_after = 0.0;
  int n_hat = 0;
};

// The edge-side control loop shared by the discrete-event simulator and the
// network harness. The host owns time, the uplink channel and the verifier;
// the controller owns drafting, triggering, batching decisions, the
// environment monitor and the live autotuner.
//
// Host protocol:
//   - while drafting() is true, generate one token per token_gen_time_us()
//     (plus take_stall_us()) and call on_token_generated;
//   - whenever the channel is idle, pop next_batch() and transmit it, then
//     report on_batch_delivered;
//   - after any controller call, collect take_nav_request() and serve it once
//     available, then report on_nav_result.
class EdgeController {
 public:
  EdgeController(const ScenarioConfig& scenario, const MethodSpec& method,
                 std::int64_t target_accepted, std::uint64_t seed);

  bool drafting() const { return drafting_; }
  bool done() const { return done_; }
  Micros token_gen_time_us() const { return gamma_effective_us_; }
  Micros take_stall_us();

  std::optional<BatchCmd> next_batch(Micros now);
  std::optional<NavCmd> take_nav_request(Micros now);

  void on_token_generated(Micros now, Micros gen_elapsed_us);
  void on_batch_delivered(const BatchCmd& batch, Micros send_start, Micros send_end);
  void on_nav_result(std::int64_t nav_id, const VerificationResult& result, bool cloud_kept,
                     Micros nav_start, Micros nav_end, Micros now);

  const TargetOracle& oracle() const { return oracle_; }
  const std::vector<std::uint32_t>& output_tokens() const { return output_; }
  std::int64_t accepted_tokens() const { return static_cast<std::int64_t>(output_.size()); }
  const std::vector<RoundTranscript>& rounds() const { return rounds_; }
  const MethodSpec& method() const { return method_; }

  int current_n_hat() const { return draft_lengths_.current(); }
  double current_r1() const { return trigger_.r1(); }
  double current_r2() const { return trigger_.r2(); }
  const std::optional<ParamEstimates>& estimates() const { return estimates_; }

  // Counters and charges for RunMetrics; ECS is filled in by the host.
  RunMetrics base_metrics(Micros total_time_us) const;

 private:
  void start_probe_phase();
  void ensure_plan();
  void rebuild_plan();
  void refit_estimates();
  void emit_planned_batches();
  void emit_proactive_batches();
  std::int64_t emit_flush();
  std::int64_t emit_batch(BatchKind kind, std::int64_t from_pos, std::int64_t to_pos);
  void arm_nav(const TriggerEvent& event, Micros trigger_time);
  void open_round();
  void finish_tuning_trial(Micros now);
  void maybe_start_tuning(double tpt_old, double tpt_new, Micros now);
  int pending_count() const { return static_cast<int>(pending_draft_.size()); }
  std::int64_t pending_end_pos() const { return pending_start_ + pending_count(); }
  void charge(Micros amount, Micros& bucket, bool stalls);

  // configuration
  ScenarioConfig scenario_;
  MethodSpec method_;
  std::int64_t target_accepted_;
  TargetOracle oracle_;
  DraftModelConfig draft_config_;
  Rng draft_rng_;
  Rng bo_rng_;
  Micros gamma_effective_us_ = 0;

  // phases
  bool probing_ = false;
  bool drafting_ = false;
  bool awaiting_nav_ = false;
  bool done_ = false;

  // output / positions (absolute, 0-based)
  std::vector<std::uint32_t> output_;
  std::int64_t submitted_start_ = 0;
  std::vector<DraftToken> submitted_draft_;
  std::int64_t pending_start_ = 0;
  std::vector<DraftToken> pending_draft_;
  std::int64_t sent_upto_pos_ = 0;     // next pending position not yet handed to the channel
  std::int64_t emitted_upto_pos_ = 0;  // next pending position not yet placed in a batch

  // batching
  TriggerPolicy trigger_;
  std::deque<BatchCmd> ready_batches_;
  std::deque<BatchCmd> ready_probes_;
  std::int64_t next_batch_id_ = 1;
  std::int64_t next_nav_id_ = 1;
  std::unordered_set<std::int64_t> delivered_batches_;
  std::optional<std::int64_t> nav_after_batch_;
  std::optional<NavCmd> armed_nav_;
  std::int64_t last_round_batch_id_ = 0;
  int probes_outstanding_ = 0;

  // plan state
  std::optional<BatchingStrategy> plan_;
  std::vector<int> plan_batch_ends_;
  int plan_n_hat_ = 0;
  std::int64_t window_base_pos_ = 0;

  // deferred trigger while a NAV is in flight
  std::optional<TriggerEvent> deferred_trigger_;
  Micros deferred_trigger_time_ = 0;

  // monitor
  SlidingWindow<GenerationRecord> gen_window_;
  SlidingWindow<CommRecord> comm_window_;
  std::optional<ParamEstimates> estimates_;
  DraftLengthWindow draft_lengths_;
  TptWindowTracker tpt_windows_;
  int batches_since_refit_ = 0;

  // live autotuning
  bool tuning_ = false;
  std::vector<Sample> tuning_samples_;
  double trial_r1_ = 0.0;
  double trial_r2_ = 0.0;
  std::int64_t trial_start_outputs_ = 0;
  Micros trial_start_time_ = 0;

  // accounting
  Micros stall_us_ = 0;
  Micros bo_us_ = 0;
  Micros dp_us_ = 0;
  Micros pm_us_ = 0;
  std::int64_t drafted_ = 0;
  std::int64_t submitted_count_ = 0;
  std::int64_t accepted_draft_ = 0;
  std::int64_t nav_calls_ = 0;
  Micros last_output_time_ = 0;

  // transcripts
  std::vector<RoundTranscript> rounds_;
  RoundTranscript current_round_;
  int round_counter_ = 0;
};

}  // namespace specsched
