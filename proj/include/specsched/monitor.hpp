#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "specsched/core.hpp"

namespace specsched {

template <typename T>
class SlidingWindow {
 public:
  explicit SlidingWindow(std::size_t capacity) : capacity_(capacity) {}

  void push(T value) {
    entries_.push_back(std::move(value));
    if (entries_.size() > capacity_) entries_.pop_front();
  }

  bool full() const { return entries_.size() == capacity_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return entries_.empty(); }
  void clear() { entries_.clear(); }
  const std::deque<T>& entries() const { return entries_; }

 private:
  std::size_t capacity_;
  std::deque<T> entries_;
};

struct GenerationRecord {
  int tokens = 0;
  Micros elapsed_us = 0;
};

struct CommRecord {
  int batch_size = 0;
  Micros comm_time_us = 0;
};

// Average per-token generation time: total time / total tokens across the
// window. Throws on an empty record set.
double estimate_gamma_us(std::span<const GenerationRecord> records);

struct AlphaBetaFit {
  double alpha_us = 0.0;
  double beta_us = 0.0;
  double residual = 0.0;           // SSE over per-size mean points
  std::vector<int> missing_sizes;  // probe sizes in [1,8] absent from the data
};

// Ordinary least squares of per-size mean communication time versus batch
// size. Records are grouped by size and averaged before the fit. Throws when
// fewer than two distinct sizes are present.
AlphaBetaFit fit_alpha_beta(std::span<const CommRecord> records);

struct ParamEstimates {
  double alpha_us = 0.0;
  double beta_us = 0.0;
  double gamma_us = 0.0;
  std::size_t gen_records = 0;
  std::size_t comm_records = 0;
  double residual = 0.0;
};

// True iff |tpt_new - tpt_old| / tpt_old strictly exceeds delta1.
bool should_retune_thresholds(double tpt_old, double tpt_new, double delta1 = 0.2);

// True iff the relative change in gamma exceeds delta2, or the relative change
// in alpha or beta exceeds delta3.
bool should_reschedule(const ParamEstimates& old_estimates, const ParamEstimates& new_estimates,
                       double delta2 = 0.2, double delta3 = 0.2);

// Scheduling-window adaptation: rounded moving average of the most recent
// draft lengths, floored at 1; reports the initial value until the first
// draft completes.
class DraftLengthWindow {
 public:
  explicit DraftLengthWindow(int initial = 20, std::size_t capacity = 100);

  void record(int draft_length);
  int current() const;

 private:
  int initial_;
  SlidingWindow<int> lengths_;
};

// Tumbling windows of per-accepted-token times. Once two consecutive windows
// have filled, each completed window reports (previous, current) averages for
// the delta1 check.
class TptWindowTracker {
 public:
  explicit TptWindowTracker(std::size_t capacity = 100);

  // Records one accepted token's time share; returns the (old, new) window
  // averages when a window completes and a previous full window exists.
  std::optional<std::pair<double, double>> record(double per_token_ms);

  std::optional<double> last_window_average() const { return last_; }

 private:
  std::size_t capacity_;
  std::size_t count_ = 0;
  double sum_ = 0.0;
  std::optional<double> last_;
};

}  // namespace specsched
