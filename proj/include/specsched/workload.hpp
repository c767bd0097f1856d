#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "specsched/core.hpp"
#include "specsched/rng.hpp"

namespace specsched {

// Deterministic target-model stand-in: the token at any position is a pure
// function of (seed, position), so the greedy output stream is enumerable
// without prefix state and losslessness is an exact equality check.
class TargetOracle {
 public:
  explicit TargetOracle(std::uint64_t seed, int vocab_size = 32000);

  std::uint32_t token_at(std::int64_t position) const;  // 0-based stream position
  std::uint64_t seed() const { return seed_; }
  int vocab_size() const { return vocab_size_; }

 private:
  std::uint64_t seed_;
  int vocab_size_;
};

// Draft-model stand-in. Confidence is sampled from Beta(a, b) and the emitted
// token matches the oracle with probability confidence^kappa, so confidence
// thresholds have causal power over acceptance.
struct DraftModelConfig {
  double beta_a = 8.0;
  double beta_b = 2.0;
  double kappa = 1.0;
};

DraftToken draft_next(const DraftModelConfig& config, const TargetOracle& oracle,
                      std::int64_t stream_position, int round_position, Rng& rng);

// Longest-matching-prefix verification: accepted tokens, then either the
// correcting token at the first mismatch or the bonus token after a fully
// accepted draft.
VerificationResult verify(const TargetOracle& oracle, std::int64_t start_position,
                          std::span<const std::uint32_t> draft_tokens);

// Extra per-token delay emulating a slower edge CPU:
// base * (f_real / f_sim - 1). Requires 0 < f_sim <= f_real.
Micros artificial_delay_us(Micros base_gen_time_us, double f_real_ghz, double f_sim_ghz);

struct EnergyConfig {
  double idle_power_w = 80.0;
  double verify_power_w = 250.0;
  Micros sample_interval_us = 5000;
};

// A power trace is a step function: (timestamp, watts) pairs sorted by time,
// each value holding until the next entry. Power is 0 before the first entry.
using PowerTrace = std::vector<std::pair<Micros, double>>;

// Left-Riemann integration of the trace sampled every sample_interval_us over
// [0, horizon). Returns joules.
double energy_integrate(std::span<const std::pair<Micros, double>> trace, Micros horizon,
                        Micros sample_interval_us = 5000);

// Builds the cloud power trace from verifier busy intervals.
PowerTrace build_power_trace(std::span<const std::pair<Micros, Micros>> busy_intervals,
                             const EnergyConfig& energy);

}  // namespace specsched
