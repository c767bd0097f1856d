#pragma once

#include <cstdint>
#include <vector>

#include "specsched/core.hpp"

namespace specsched {

struct BatchSpan {
  int first_token = 1;  // 1-based, inclusive
  int last_token = 1;
  Micros gen_start = 0;
  Micros gen_end = 0;
  Micros comm_start = 0;
  Micros comm_end = 0;

  int size() const { return last_token - first_token + 1; }
};

struct BatchTimeline {
  std::vector<BatchSpan> batches;
  Micros total_time = 0;  // last comm_end minus first gen_start
};

// Evaluates the pipeline timing model for a given batching strategy over n
// tokens: generation is back-to-back, a batch's communication starts once the
// previous batch's communication finished and the batch itself is generated.
// Throws std::invalid_argument on an invalid strategy or params.
BatchTimeline evaluate_timeline(const BatchingStrategy& strategy, const PipelineParams& params,
                                int n);

struct DpBatchingResult {
  BatchingStrategy strategy;
  Micros total_time = 0;
  std::vector<Micros> dp_table;    // dp[0..n_hat]
  std::vector<int> prev;           // predecessor boundary per prefix length
  std::int64_t relaxations = 0;    // inner-loop iterations (complexity accounting)
};

// Optimal token batching for a window of n_hat tokens via dynamic programming
// over prefix lengths. dp[j] is the minimal completion time of the first j
// tokens; the last batch (i, j] costs max(dp[i], gamma*j) + alpha + beta*(j-i).
DpBatchingResult dp_optimal_batching(int n_hat, const PipelineParams& params);

struct BruteForceResult {
  BatchingStrategy strategy;
  Micros total_time = 0;
  std::int64_t candidates = 0;
};

// Exhaustive enumeration of all 2^(n_hat-1) boundary sequences, evaluated with
// evaluate_timeline. Ties broken by fewest batches, then lexicographically
// smallest boundaries. Rejects n_hat > 16.
BruteForceResult brute_force_batching(int n_hat, const PipelineParams& params);

struct OnlineTimeline {
  BatchTimeline timeline;
  BatchingStrategy realized;
};

// Online policy: whenever the channel is idle and at least one generated token
// is unsent, transmit all accumulated tokens as one batch.
OnlineTimeline greedy_timeline(const PipelineParams& params, int n);

// Each token is sent as its own batch as soon as it is generated.
Micros immediate_send_total_time(const PipelineParams& params, int n);

// Generate the whole draft sequence first, then upload it as a single batch.
Micros no_early_upload_total_time(const PipelineParams& params, int n);

}  // namespace specsched
