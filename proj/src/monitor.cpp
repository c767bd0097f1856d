#include "specsched/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace specsched {

double estimate_gamma_us(std::span<const GenerationRecord> records) {
  if (records.empty()) throw std::invalid_argument("estimate_gamma: no records");
  long double total_time = 0;
  long long total_tokens = 0;
  for (const auto& r : records) {
    total_time += static_cast<long double>(r.elapsed_us);
    total_tokens += r.tokens;
  }
  if (total_tokens <= 0) throw std::invalid_argument("estimate_gamma: no tokens");
  return static_cast<double>(total_time / total_tokens);
}

AlphaBetaFit fit_alpha_beta(std::span<const CommRecord> records) {
  std::map<int, std::pair<double, int>> by_size;
  for (const auto& r : records) {
    auto& slot = by_size[r.batch_size];
    slot.first += static_cast<double>(r.comm_time_us);
    slot.second += 1;
  }
  if (by_size.size() < 2)
    throw std::invalid_argument("fit_alpha_beta: fewer than 2 distinct batch sizes");

  double sx = 0, sy = 0;
  for (const auto& [size, acc] : by_size) {
    sx += size;
    sy += acc.first / acc.second;
  }
  const double n = static_cast<double>(by_size.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [size, acc] : by_size) {
    const double mean_time = acc.first / acc.second;
    sxx += (size - mx) * (size - mx);
    sxy += (size - mx) * (mean_time - my);
  }

  AlphaBetaFit fit;
  fit.beta_us = sxy / sxx;
  fit.alpha_us = my - fit.beta_us * mx;
  for (const auto& [size, acc] : by_size) {
    const double mean_time = acc.first / acc.second;
    const double predicted = fit.alpha_us + fit.beta_us * size;
    fit.residual += (mean_time - predicted) * (mean_time - predicted);
  }
  for (int size = 1; size <= 8; ++size) {
    if (!by_size.count(size)) fit.missing_sizes.push_back(size);
  }
  return fit;
}

namespace {

bool relative_change_exceeds(double old_value, double new_value, double delta) {
  if (old_value == 0.0) return new_value != 0.0;
  return std::abs(new_value - old_value) / std::abs(old_value) > delta;
}

}  // namespace

bool should_retune_thresholds(double tpt_old, double tpt_new, double delta1) {
  return relative_change_exceeds(tpt_old, tpt_new, delta1);
}

bool should_reschedule(const ParamEstimates& old_estimates, const ParamEstimates& new_estimates,
                       double delta2, double delta3) {
  return relative_change_exceeds(old_estimates.gamma_us, new_estimates.gamma_us, delta2) ||
         relative_change_exceeds(old_estimates.alpha_us, new_estimates.alpha_us, delta3) ||
         relative_change_exceeds(old_estimates.beta_us, new_estimates.beta_us, delta3);
}

DraftLengthWindow::DraftLengthWindow(int initial, std::size_t capacity)
    : initial_(initial), lengths_(capacity) {}

void DraftLengthWindow::record(int draft_length) { lengths_.push(std::max(1, draft_length)); }

int DraftLengthWindow::current() const {
  if (lengths_.empty()) return initial_;
  long long sum = 0;
  for (int len : lengths_.entries()) sum += len;
  // Round half-up.
  const long long count = static_cast<long long>(lengths_.size());
  const long long rounded = (2 * sum + count) / (2 * count);
  return static_cast<int>(std::max<long long>(1, rounded));
}

TptWindowTracker::TptWindowTracker(std::size_t capacity) : capacity_(capacity) {}

std::optional<std::pair<double, double>> TptWindowTracker::record(double per_token_ms) {
  sum_ += per_token_ms;
  count_ += 1;
  if (count_ < capacity_) return std::nullopt;
  const double average = sum_ / static_cast<double>(capacity_);
  sum_ = 0.0;
  count_ = 0;
  std::optional<std::pair<double, double>> change;
  if (last_.has_value()) change = std::make_pair(*last_, average);
  last_ = average;
  return change;
}

}  // namespace specsched
