#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "specsched/rng.hpp"

namespace specsched {

// One threshold-pair evaluation: (r1, r2) and the measured mean TPT (ms/token).
struct Sample {
  double r1 = 0.5;
  double r2 = 0.5;
  double objective = 0.0;
};

// Exact Gaussian-process regression with a Matern-5/2 kernel on the unit
// square. Targets are standardized before fitting and de-standardized on
// prediction. Duplicate inputs are averaged.
class GpPosterior {
 public:
  struct Prediction {
    double mean = 0.0;
    double sd = 0.0;
  };

  Prediction predict(double r1, double r2) const;  // raw (de-standardized) units
  Prediction predict_standardized(double r1, double r2) const;

  double target_mean() const { return y_mean_; }
  double target_sd() const { return y_sd_; }
  double min_standardized_target() const;
  double jitter() const { return jitter_; }
  std::size_t num_points() const { return x_.size(); }

 private:
  friend GpPosterior gp_fit(const std::vector<Sample>& samples);

  std::vector<std::array<double, 2>> x_;
  std::vector<double> y_std_;
  std::vector<double> chol_;   // lower-triangular Cholesky factor, row-major n*n
  std::vector<double> alpha_;  // K^{-1} y_std
  double y_mean_ = 0.0;
  double y_sd_ = 1.0;
  double length_scale_ = 0.2;
  double jitter_ = 1e-6;
};

// Fits the GP. Throws std::invalid_argument on an empty sample set and
// std::runtime_error if the kernel matrix stays singular after jitter
// escalation (1e-6 up to 1e-2).
GpPosterior gp_fit(const std::vector<Sample>& samples);

// Expected improvement under the minimization convention:
// improvement = best_so_far - mean - xi. With sd = 0 this degenerates to
// max(improvement, 0). Throws on sd < 0.
double expected_improvement(double mean, double sd, double best_so_far, double xi);

// Argmax of EI over 2048 Halton candidates in (0,1)^2, randomized by a
// Cranley-Patterson rotation drawn from rng. Deterministic given the rng seed;
// ties keep the lowest-index candidate. EI is evaluated on the standardized
// target scale so that xi acts scale-free.
std::array<double, 2> bo_suggest(const GpPosterior& posterior, Rng& rng, double xi = 0.1);

using Evaluator = std::function<double(double r1, double r2)>;

struct TuneResult {
  double r1 = 0.5;
  double r2 = 0.5;
  double objective = 0.0;
  std::vector<Sample> samples;
};

// One uniform-random initial sample followed by budget-1 BO iterations.
TuneResult run_bo(const Evaluator& evaluate, int budget, std::uint64_t seed, double xi = 0.1);

// k x k uniform grid with cell-center points {(2i+1)/(2k)} per axis.
TuneResult run_grid(const Evaluator& evaluate, int k = 4);

// budget points sampled independently and uniformly on (0,1)^2.
TuneResult run_random(const Evaluator& evaluate, int budget, std::uint64_t seed);

// Radical-inverse Halton point (bases 2 and 3), index >= 1.
std::array<double, 2> halton_point(int index);

}  // namespace specsched
