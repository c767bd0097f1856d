#include "specsched/autotune.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace specsched {

namespace {

constexpr int kCandidateCount = 2048;

double matern52(const std::array<double, 2>& a, const std::array<double, 2>& b,
                double length_scale) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double d = std::sqrt(dx * dx + dy * dy);
  const double s = std::sqrt(5.0) * d / length_scale;
  return (1.0 + s + s * s / 3.0) * std::exp(-s);
}

// In-place Cholesky of a row-major symmetric matrix. Returns false when a
// pivot is not positive.
bool cholesky(std::vector<double>& m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = m[i * n + j];
      for (std::size_t k = 0; k < j; ++k) sum -= m[i * n + k] * m[j * n + k];
      if (i == j) {
        if (sum <= 0.0) return false;
        m[i * n + j] = std::sqrt(sum);
      } else {
        m[i * n + j] = sum / m[j * n + j];
      }
    }
    for (std::size_t j = i + 1; j < n; ++j) m[i * n + j] = 0.0;
  }
  return true;
}

void solve_lower(const std::vector<double>& l, std::size_t n, std::vector<double>& b) {
  for (std::size_t i = 0; i < n; ++i) {
    double sum = b[i];
    for (std::size_t k = 0; k < i; ++k) sum -= l[i * n + k] * b[k];
    b[i] = sum / l[i * n + i];
  }
}

void solve_upper_from_lower(const std::vector<double>& l, std::size_t n, std::vector<double>& b) {
  for (std::size_t i = n; i-- > 0;) {
    double sum = b[i];
    for (std::size_t k = i + 1; k < n; ++k) sum -= l[k * n + i] * b[k];
    b[i] = sum / l[i * n + i];
  }
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

}  // namespace

GpPosterior gp_fit(const std::vector<Sample>& samples) {
  if (samples.empty()) throw std::invalid_argument("gp_fit requires at least one sample");

  // Average duplicated inputs.
  std::map<std::pair<double, double>, std::pair<double, int>> grouped;
  for (const Sample& s : samples) {
    auto& slot = grouped[{s.r1, s.r2}];
    slot.first += s.objective;
    slot.second += 1;
  }

  GpPosterior gp;
  for (const auto& [xy, acc] : grouped) {
    gp.x_.push_back({xy.first, xy.second});
    gp.y_std_.push_back(acc.first / acc.second);
  }

  const std::size_t n = gp.x_.size();
  double mean = 0.0;
  for (double y : gp.y_std_) mean += y;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double y : gp.y_std_) var += (y - mean) * (y - mean);
  var /= static_cast<double>(n);
  gp.y_mean_ = mean;
  gp.y_sd_ = var > 1e-24 ? std::sqrt(var) : 1.0;
  for (double& y : gp.y_std_) y = (y - gp.y_mean_) / gp.y_sd_;

  std::vector<double> kernel(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      kernel[i * n + j] = matern52(gp.x_[i], gp.x_[j], gp.length_scale_);
    }
  }

  for (double jitter = 1e-6; jitter <= 1e-2 + 1e-12; jitter *= 10.0) {
    gp.chol_ = kernel;
    for (std::size_t i = 0; i < n; ++i) gp.chol_[i * n + i] += jitter;
    if (cholesky(gp.chol_, n)) {
      gp.jitter_ = jitter;
      gp.alpha_ = gp.y_std_;
      solve_lower(gp.chol_, n, gp.alpha_);
      solve_upper_from_lower(gp.chol_, n, gp.alpha_);
      return gp;
    }
  }
  throw std::runtime_error("gp_fit: kernel matrix singular after jitter escalation to 1e-2");
}

GpPosterior::Prediction GpPosterior::predict_standardized(double r1, double r2) const {
  const std::size_t n = x_.size();
  const std::array<double, 2> q{r1, r2};
  std::vector<double> k_star(n);
  for (std::size_t i = 0; i < n; ++i) k_star[i] = matern52(q, x_[i], length_scale_);

  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += k_star[i] * alpha_[i];

  std::vector<double> v = k_star;
  solve_lower(chol_, n, v);
  double explained = 0.0;
  for (double value : v) explained += value * value;
  const double prior = matern52(q, q, length_scale_);
  const double variance = std::max(0.0, prior - explained);
  return Prediction{mean, std::sqrt(variance)};
}

GpPosterior::Prediction GpPosterior::predict(double r1, double r2) const {
  Prediction p = predict_standardized(r1, r2);
  return Prediction{p.mean * y_sd_ + y_mean_, p.sd * y_sd_};
}

double GpPosterior::min_standardized_target() const {
  double best = y_std_.empty() ? 0.0 : y_std_.front();
  for (double y : y_std_) best = std::min(best, y);
  return best;
}

double expected_improvement(double mean, double sd, double best_so_far, double xi) {
  if (sd < 0.0) throw std::invalid_argument("expected_improvement: sd < 0");
  const double improvement = best_so_far - mean - xi;
  if (sd == 0.0) return std::max(improvement, 0.0);
  const double u = improvement / sd;
  return std::max(0.0, improvement * normal_cdf(u) + sd * normal_pdf(u));
}

std::array<double, 2> halton_point(int index) {
  auto radical_inverse = [](int base, int i) {
    double inv = 1.0 / base;
    double factor = inv;
    double value = 0.0;
    while (i > 0) {
      value += factor * (i % base);
      i /= base;
      factor *= inv;
    }
    return value;
  };
  return {radical_inverse(2, index), radical_inverse(3, index)};
}

std::array<double, 2> bo_suggest(const GpPosterior& posterior, Rng& rng, double xi) {
  const double shift_x = rng.uniform();
  const double shift_y = rng.uniform();
  const double best_y = posterior.min_standardized_target();

  std::array<double, 2> best_point{0.5, 0.5};
  double best_ei = -1.0;
  for (int i = 0; i < kCandidateCount; ++i) {
    auto p = halton_point(i + 1);
    p[0] = std::fmod(p[0] + shift_x, 1.0);
    p[1] = std::fmod(p[1] + shift_y, 1.0);
    p[0] = std::clamp(p[0], 1e-9, 1.0 - 1e-9);
    p[1] = std::clamp(p[1], 1e-9, 1.0 - 1e-9);
    const auto pred = posterior.predict_standardized(p[0], p[1]);
    const double ei = expected_improvement(pred.mean, pred.sd, best_y, xi);
    if (ei > best_ei) {
      best_ei = ei;
      best_point = p;
    }
  }
  return best_point;
}

namespace {

void track_best(TuneResult& result, const Sample& sample) {
  result.samples.push_back(sample);
  if (result.samples.size() == 1 || sample.objective < result.objective) {
    result.r1 = sample.r1;
    result.r2 = sample.r2;
    result.objective = sample.objective;
  }
}

}  // namespace

TuneResult run_bo(const Evaluator& evaluate, int budget, std::uint64_t seed, double xi) {
  if (budget < 1) throw std::invalid_argument("run_bo: budget < 1");
  Rng rng(seed);
  TuneResult result;

  Sample first;
  first.r1 = std::clamp(rng.uniform(), 1e-9, 1.0 - 1e-9);
  first.r2 = std::clamp(rng.uniform(), 1e-9, 1.0 - 1e-9);
  first.objective = evaluate(first.r1, first.r2);
  track_best(result, first);

  for (int iter = 1; iter < budget; ++iter) {
    const GpPosterior posterior = gp_fit(result.samples);
    const auto next = bo_suggest(posterior, rng, xi);
    Sample s{next[0], next[1], evaluate(next[0], next[1])};
    track_best(result, s);
  }
  return result;
}

TuneResult run_grid(const Evaluator& evaluate, int k) {
  if (k < 1) throw std::invalid_argument("run_grid: k < 1");
  TuneResult result;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double r1 = (2.0 * i + 1.0) / (2.0 * k);
      const double r2 = (2.0 * j + 1.0) / (2.0 * k);
      track_best(result, Sample{r1, r2, evaluate(r1, r2)});
    }
  }
  return result;
}

TuneResult run_random(const Evaluator& evaluate, int budget, std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("run_random: budget < 1");
  Rng rng(seed);
  TuneResult result;
  for (int i = 0; i < budget; ++i) {
    const double r1 = std::clamp(rng.uniform(), 1e-9, 1.0 - 1e-9);
    const double r2 = std::clamp(rng.uniform(), 1e-9, 1.0 - 1e-9);
    track_best(result, Sample{r1, r2, evaluate(r1, r2)});
  }
  return result;
}

}  // namespace specsched
