#include "specsched/workload.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace specsched {

TargetOracle::TargetOracle(std::uint64_t seed, int vocab_size)
    : seed_(seed), vocab_size_(vocab_size) {
  if (vocab_size < 2) throw std::invalid_argument("vocab_size must be >= 2");
}

std::uint32_t TargetOracle::token_at(std::int64_t position) const {
  if (position < 0) throw std::invalid_argument("position must be >= 0");
  const std::uint64_t h = mix64(seed_ ^ mix64(static_cast<std::uint64_t>(position)));
  return static_cast<std::uint32_t>(h % static_cast<std::uint64_t>(vocab_size_));
}

DraftToken draft_next(const DraftModelConfig& config, const TargetOracle& oracle,
                      std::int64_t stream_position, int round_position, Rng& rng) {
  if (config.beta_a <= 0 || config.beta_b <= 0 || config.kappa <= 0)
    throw std::invalid_argument("draft model parameters must be positive");

  double confidence = rng.beta(config.beta_a, config.beta_b);
  confidence = std::clamp(confidence, 1e-12, 1.0);

  const std::uint32_t truth = oracle.token_at(stream_position);
  const double accept_probability = std::pow(confidence, config.kappa);

  DraftToken token;
  token.confidence = confidence;
  token.position = round_position;
  if (rng.uniform() < accept_probability) {
    token.token_id = truth;
  } else {
    // Uniformly random token different from the oracle's.
    std::uint32_t wrong =
        static_cast<std::uint32_t>(rng.uniform_int(static_cast<std::uint64_t>(oracle.vocab_size()) - 1));
    if (wrong >= truth) wrong += 1;
    token.token_id = wrong;
  }
  return token;
}

VerificationResult verify(const TargetOracle& oracle, std::int64_t start_position,
                          std::span<const std::uint32_t> draft_tokens) {
  VerificationResult result;
  for (std::size_t i = 0; i < draft_tokens.size(); ++i) {
    const std::uint32_t truth = oracle.token_at(start_position + static_cast<std::int64_t>(i));
    if (draft_tokens[i] != truth) {
      result.n_accepted = static_cast<int>(i);
      result.correction = truth;
      return result;
    }
  }
  result.n_accepted = static_cast<int>(draft_tokens.size());
  result.bonus = oracle.token_at(start_position + static_cast<std::int64_t>(draft_tokens.size()));
  return result;
}

Micros artificial_delay_us(Micros base_gen_time_us, double f_real_ghz, double f_sim_ghz) {
  if (f_real_ghz <= 0 || f_sim_ghz <= 0)
    throw std::invalid_argument("frequencies must be positive");
  if (f_sim_ghz > f_real_ghz)
    throw std::invalid_argument("simulated frequency exceeds the real frequency");
  const double delay = static_cast<double>(base_gen_time_us) * (f_real_ghz / f_sim_ghz - 1.0);
  return static_cast<Micros>(std::llround(delay));
}

double energy_integrate(std::span<const std::pair<Micros, double>> trace, Micros horizon,
                        Micros sample_interval_us) {
  if (sample_interval_us <= 0) throw std::invalid_argument("sample interval must be positive");
  if (trace.empty() || horizon <= 0) return 0.0;

  double joules = 0.0;
  std::size_t idx = 0;
  double current_power = 0.0;
  const double dt_seconds = static_cast<double>(sample_interval_us) / 1e6;
  for (Micros t = 0; t < horizon; t += sample_interval_us) {
    while (idx < trace.size() && trace[idx].first <= t) {
      current_power = trace[idx].second;
      ++idx;
    }
    joules += current_power * dt_seconds;
  }
  return joules;
}

PowerTrace build_power_trace(std::span<const std::pair<Micros, Micros>> busy_intervals,
                             const EnergyConfig& energy) {
  PowerTrace trace;
  trace.emplace_back(0, energy.idle_power_w);
  for (const auto& [start, end] : busy_intervals) {
    if (end <= start) continue;
    trace.emplace_back(start, energy.verify_power_w);
    trace.emplace_back(end, energy.idle_power_w);
  }
  std::sort(trace.begin(), trace.end());
  return trace;
}

}  // namespace specsched
