#include "specsched/scheduler.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace specsched {

namespace {

void require_valid(const PipelineParams& params) {
  if (auto v = params.validate(); !v) throw std::invalid_argument("invalid params: " + v.message);
}

}  // namespace

BatchTimeline evaluate_timeline(const BatchingStrategy& strategy, const PipelineParams& params,
                                int n) {
  require_valid(params);
  if (auto v = validate_strategy(strategy, n); !v)
    throw std::invalid_argument("invalid strategy: " + v.message);

  const auto& b = strategy.boundaries;
  const int k_batches = strategy.num_batches();
  BatchTimeline timeline;
  timeline.batches.reserve(k_batches);

  Micros gen_cursor = 0;
  Micros prev_comm_end = 0;
  for (int k = 0; k < k_batches; ++k) {
    BatchSpan span;
    span.first_token = b[k];
    span.last_token = (k + 1 < k_batches) ? b[k + 1] - 1 : n;
    const Micros gen_time = params.gamma_us * span.size();
    const Micros comm_time = params.alpha_us + params.beta_us * span.size();
    span.gen_start = gen_cursor;
    span.gen_end = gen_cursor + gen_time;
    span.comm_start = (k == 0) ? span.gen_end : std::max(prev_comm_end, span.gen_end);
    span.comm_end = span.comm_start + comm_time;
    gen_cursor = span.gen_end;
    prev_comm_end = span.comm_end;
    timeline.batches.push_back(span);
  }
  timeline.total_time = timeline.batches.back().comm_end - timeline.batches.front().gen_start;
  return timeline;
}

DpBatchingResult dp_optimal_batching(int n_hat, const PipelineParams& params) {
  require_valid(params);
  if (n_hat < 1) throw std::invalid_argument("n_hat must be >= 1");

  DpBatchingResult result;
  result.dp_table.assign(n_hat + 1, std::numeric_limits<Micros>::max());
  result.prev.assign(n_hat + 1, -1);
  result.dp_table[0] = 0;

  for (int j = 1; j <= n_hat; ++j) {
    for (int i = 0; i < j; ++i) {
      const Micros comm = params.alpha_us + params.beta_us * (j - i);
      const Micros candidate = std::max(result.dp_table[i], params.gamma_us * j) + comm;
      ++result.relaxations;
      if (candidate < result.dp_table[j]) {
        result.dp_table[j] = candidate;
        result.prev[j] = i;
      }
    }
  }

  int p = n_hat;
  while (p > 0) {
    const int q = result.prev[p];
    result.strategy.boundaries.insert(result.strategy.boundaries.begin(), q + 1);
    p = q;
  }
  result.total_time = result.dp_table[n_hat];
  return result;
}

BruteForceResult brute_force_batching(int n_hat, const PipelineParams& params) {
  require_valid(params);
  if (n_hat < 1) throw std::invalid_argument("n_hat must be >= 1");
  if (n_hat > 16) throw std::invalid_argument("brute force limited to n_hat <= 16");

  BruteForceResult best;
  best.total_time = std::numeric_limits<Micros>::max();

  const std::uint32_t masks = 1u << (n_hat - 1);  // bit k set => boundary at token k+2
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    BatchingStrategy candidate;
    candidate.boundaries.push_back(1);
    for (int bit = 0; bit < n_hat - 1; ++bit) {
      if (mask & (1u << bit)) candidate.boundaries.push_back(bit + 2);
    }
    const Micros t = evaluate_timeline(candidate, params, n_hat).total_time;
    ++best.candidates;
    const bool better =
        t < best.total_time ||
        (t == best.total_time && candidate.num_batches() < best.strategy.num_batches()) ||
        (t == best.total_time && candidate.num_batches() == best.strategy.num_batches() &&
         candidate.boundaries < best.strategy.boundaries);
    if (best.strategy.boundaries.empty() || better) {
      best.strategy = candidate;
      best.total_time = t;
    }
  }
  return best;
}

OnlineTimeline greedy_timeline(const PipelineParams& params, int n) {
  require_valid(params);
  if (n < 1) throw std::invalid_argument("n must be >= 1");

  OnlineTimeline out;
  Micros channel_free = 0;
  int sent = 0;
  while (sent < n) {
    // Token j finishes generating at gamma * j.
    const Micros first_ready = params.gamma_us * (sent + 1);
    const Micros start = std::max(channel_free, first_ready);
    const int generated = static_cast<int>(std::min<Micros>(n, start / params.gamma_us));
    BatchSpan span;
    span.first_token = sent + 1;
    span.last_token = generated;
    span.gen_start = params.gamma_us * sent;
    span.gen_end = params.gamma_us * generated;
    span.comm_start = start;
    span.comm_end = start + params.alpha_us + params.beta_us * span.size();
    out.timeline.batches.push_back(span);
    out.realized.boundaries.push_back(span.first_token);
    channel_free = span.comm_end;
    sent = generated;
  }
  out.timeline.total_time = out.timeline.batches.back().comm_end;
  return out;
}

Micros immediate_send_total_time(const PipelineParams& params, int n) {
  BatchingStrategy every_token;
  every_token.boundaries.resize(n);
  for (int i = 0; i < n; ++i) every_token.boundaries[i] = i + 1;
  return evaluate_timeline(every_token, params, n).total_time;
}

Micros no_early_upload_total_time(const PipelineParams& params, int n) {
  require_valid(params);
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  return params.gamma_us * n + params.alpha_us + params.beta_us * n;
}

}  // namespace specsched
