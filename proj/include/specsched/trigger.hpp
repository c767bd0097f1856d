#pragma once

#include "specsched/core.hpp"

namespace specsched {

struct TriggerState {
  double c1 = 1.0;  // running product of confidences since the last NAV
  int tokens_since_nav = 0;
};

enum class TriggerReason { SequenceThreshold, TokenThreshold, FixedLength, SafetyCap };

const char* trigger_reason_name(TriggerReason reason);

struct TriggerEvent {
  bool triggered = false;
  TriggerReason reason = TriggerReason::SequenceThreshold;
  // C1 including the observed token, before any reset. Needed by the adaptive
  // threshold update and by transcripts.
  double c1_at_decision = 1.0;
};

// Dual-threshold observation: with the new token folded in, fire when
// C1* <= r1, or the token confidence <= r2, or the safety cap is reached.
// The sequence condition is checked first, then the token condition. On fire
// the state resets (c1 = 1, counter = 0); the triggering token is still part
// of the submitted draft. Passing r1 = 0 or r2 = 0 disables that branch.
TriggerEvent dual_observe(TriggerState& state, double r1, double r2, int max_draft_len,
                          double confidence);

inline TriggerEvent dual_observe(TriggerState& state, const TriggerThresholds& thresholds,
                                 double confidence) {
  return dual_observe(state, thresholds.r1, thresholds.r2, thresholds.max_draft_len, confidence);
}

// Fires every n_fixed tokens regardless of confidence.
TriggerEvent fixed_length_observe(TriggerState& state, int n_fixed, double confidence);

// Fires when a single token's confidence drops to or below r.
TriggerEvent token_level_observe(TriggerState& state, double r, int max_draft_len,
                                 double confidence);

// Fires when the cumulative sequence confidence drops to or below r1.
TriggerEvent sequence_level_observe(TriggerState& state, double r1, int max_draft_len,
                                    double confidence);

// Adaptive sequence-threshold update applied after each NAV: halve r1 when the
// whole window was accepted, otherwise divide by c1^((n_hat - n_correct)/n_hat).
// The result is clamped to [1e-6, 1 - 1e-6].
double edgellm_update_threshold(double r1, double c1_at_nav, int n_correct, int n_hat);

constexpr double kThresholdClampEpsilon = 1e-6;

// Convenience wrapper bundling a policy kind with its thresholds, used by the
// simulator and harness edge loop.
class TriggerPolicy {
 public:
  enum class Kind { Dual, FixedLength, TokenOnly, SequenceOnly, AdaptiveSequence };

  static TriggerPolicy dual(double r1, double r2, int max_draft_len);
  static TriggerPolicy fixed_length(int n_fixed, int max_draft_len);
  static TriggerPolicy token_only(double r, int max_draft_len);
  static TriggerPolicy sequence_only(double r1, int max_draft_len);
  static TriggerPolicy adaptive_sequence(double r1_init, int max_draft_len);

  TriggerEvent observe(double confidence);
  void reset();

  Kind kind() const { return kind_; }
  double r1() const { return r1_; }
  double r2() const { return r2_; }
  void set_thresholds(double r1, double r2);
  const TriggerState& state() const { return state_; }

  bool adapts_on_nav() const { return kind_ == Kind::AdaptiveSequence; }
  // Returns true when the updated threshold had to be clamped.
  bool apply_adaptive_update(double c1_at_nav, int n_correct, int n_hat);

 private:
  TriggerPolicy(Kind kind, double r1, double r2, int n_fixed, int max_draft_len);

  Kind kind_;
  double r1_;
  double r2_;
  int n_fixed_;
  int max_draft_len_;
  TriggerState state_;
};

}  // namespace specsched
