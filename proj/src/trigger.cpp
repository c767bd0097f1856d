#include "specsched/trigger.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specsched {

const char* trigger_reason_name(TriggerReason reason) {
  switch (reason) {
    case TriggerReason::SequenceThreshold: return "sequence_threshold";
    case TriggerReason::TokenThreshold: return "token_threshold";
    case TriggerReason::FixedLength: return "fixed_length";
    case TriggerReason::SafetyCap: return "safety_cap";
  }
  return "unknown";
}

namespace {

void require_confidence(double confidence) {
  if (!(confidence > 0.0) || confidence > 1.0 || !std::isfinite(confidence))
    throw std::invalid_argument("confidence must be in (0,1]");
}

TriggerEvent fire(TriggerState& state, TriggerReason reason, double c1_star) {
  state.c1 = 1.0;
  state.tokens_since_nav = 0;
  return TriggerEvent{true, reason, c1_star};
}

}  // namespace

TriggerEvent dual_observe(TriggerState& state, double r1, double r2, int max_draft_len,
                          double confidence) {
  require_confidence(confidence);
  const double c1_star = state.c1 * confidence;
  if (r1 > 0.0 && c1_star <= r1) return fire(state, TriggerReason::SequenceThreshold, c1_star);
  if (r2 > 0.0 && confidence <= r2) return fire(state, TriggerReason::TokenThreshold, c1_star);
  if (state.tokens_since_nav + 1 >= max_draft_len)
    return fire(state, TriggerReason::SafetyCap, c1_star);
  state.c1 = c1_star;
  state.tokens_since_nav += 1;
  return TriggerEvent{false, TriggerReason::SequenceThreshold, c1_star};
}

TriggerEvent fixed_length_observe(TriggerState& state, int n_fixed, double confidence) {
  require_confidence(confidence);
  if (n_fixed < 1) throw std::invalid_argument("n_fixed must be >= 1");
  const double c1_star = state.c1 * confidence;
  if (state.tokens_since_nav + 1 >= n_fixed)
    return fire(state, TriggerReason::FixedLength, c1_star);
  state.c1 = c1_star;
  state.tokens_since_nav += 1;
  return TriggerEvent{false, TriggerReason::FixedLength, c1_star};
}

TriggerEvent token_level_observe(TriggerState& state, double r, int max_draft_len,
                                 double confidence) {
  return dual_observe(state, 0.0, r, max_draft_len, confidence);
}

TriggerEvent sequence_level_observe(TriggerState& state, double r1, int max_draft_len,
                                    double confidence) {
  return dual_observe(state, r1, 0.0, max_draft_len, confidence);
}

namespace {

double edgellm_raw_update(double r1, double c1_at_nav, int n_correct, int n_hat) {
  if (!(c1_at_nav > 0.0) || c1_at_nav > 1.0)
    throw std::invalid_argument("c1_at_nav must be in (0,1]");
  if (n_hat < 1) throw std::invalid_argument("n_hat must be >= 1");
  if (n_correct < 0 || n_correct > n_hat)
    throw std::invalid_argument("n_correct outside [0, n_hat]");
  if (n_correct == n_hat) return 0.5 * r1;
  const double exponent = static_cast<double>(n_hat - n_correct) / static_cast<double>(n_hat);
  return r1 / std::pow(c1_at_nav, exponent);
}

}  // namespace

double edgellm_update_threshold(double r1, double c1_at_nav, int n_correct, int n_hat) {
  return std::clamp(edgellm_raw_update(r1, c1_at_nav, n_correct, n_hat), kThresholdClampEpsilon,
                    1.0 - kThresholdClampEpsilon);
}

TriggerPolicy::TriggerPolicy(Kind kind, double r1, double r2, int n_fixed, int max_draft_len)
    : kind_(kind), r1_(r1), r2_(r2), n_fixed_(n_fixed), max_draft_len_(max_draft_len) {}

TriggerPolicy TriggerPolicy::dual(double r1, double r2, int max_draft_len) {
  return TriggerPolicy(Kind::Dual, r1, r2, 0, max_draft_len);
}

TriggerPolicy TriggerPolicy::fixed_length(int n_fixed, int max_draft_len) {
  return TriggerPolicy(Kind::FixedLength, 0.0, 0.0, n_fixed, max_draft_len);
}

TriggerPolicy TriggerPolicy::token_only(double r, int max_draft_len) {
  return TriggerPolicy(Kind::TokenOnly, 0.0, r, 0, max_draft_len);
}

TriggerPolicy TriggerPolicy::sequence_only(double r1, int max_draft_len) {
  return TriggerPolicy(Kind::SequenceOnly, r1, 0.0, 0, max_draft_len);
}

TriggerPolicy TriggerPolicy::adaptive_sequence(double r1_init, int max_draft_len) {
  return TriggerPolicy(Kind::AdaptiveSequence, r1_init, 0.0, 0, max_draft_len);
}

TriggerEvent TriggerPolicy::observe(double confidence) {
  switch (kind_) {
    case Kind::Dual:
      return dual_observe(state_, r1_, r2_, max_draft_len_, confidence);
    case Kind::FixedLength:
      return fixed_length_observe(state_, n_fixed_, confidence);
    case Kind::TokenOnly:
      return token_level_observe(state_, r2_, max_draft_len_, confidence);
    case Kind::SequenceOnly:
    case Kind::AdaptiveSequence:
      return sequence_level_observe(state_, r1_, max_draft_len_, confidence);
  }
  throw std::logic_error("unreachable");
}

void TriggerPolicy::reset() { state_ = TriggerState{}; }

void TriggerPolicy::set_thresholds(double r1, double r2) {
  r1_ = r1;
  r2_ = r2;
}

bool TriggerPolicy::apply_adaptive_update(double c1_at_nav, int n_correct, int n_hat) {
  // Drafts can exceed the scheduling window; the update rule is defined on it.
  const int bounded_correct = std::min(n_correct, n_hat);
  const double raw = edgellm_raw_update(r1_, c1_at_nav, bounded_correct, n_hat);
  r1_ = std::clamp(raw, kThresholdClampEpsilon, 1.0 - kThresholdClampEpsilon);
  return raw != r1_;
}

}  // namespace specsched
