#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "dpkl/error.hpp"

namespace dpkl {

// Absolute tolerance on |sum - 1| accepted by validate_prob_vector. Loose
// enough for accumulated rounding at d ~ 1e5, tight enough to catch logic
// bugs in estimators.
inline constexpr double kNormalizationTol = 1e-9;

// A distribution over d symbols: nonnegative entries summing to one.
// Immutable after construction; safe to share across threads.
class ProbVector {
 public:
  ProbVector() = default;

  const std::vector<double>& probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::size_t size() const { return probs_.size(); }

  friend ProbVector validate_prob_vector(std::vector<double> raw);

 private:
  explicit ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {}
  std::vector<double> probs_;
};

// Symbol occurrence counts. Stored as reals because noisy intermediates
// (count + Laplace) flow through the same code paths as raw counts.
struct Histogram {
  std::vector<double> counts;

  Histogram() = default;
  explicit Histogram(std::vector<double> c) : counts(std::move(c)) {}

  double operator[](std::size_t i) const { return counts[i]; }
  std::size_t size() const { return counts.size(); }
  double total() const {
    double s = 0.0;
    for (double c : counts) s += c;
    return s;
  }
};

// The pair of independently sampled halves consumed by the sampling-twice
// estimators: x ~ Poi(alpha*n*p), x_prime ~ Poi((1-alpha)*n*p).
struct SplitSample {
  Histogram x;
  Histogram x_prime;
  double alpha = 0.5;
  double n = 0.0;
};

struct PrivacyParams {
  double epsilon = 1.0;
  double delta = 0.0;

  // min{epsilon, 1}, the clamp used by the DP estimators' floors and
  // thresholds.
  double epsilon_clamped() const { return epsilon < 1.0 ? epsilon : 1.0; }
};

// Estimator hyperparameters. tau is an absolute threshold in count units;
// the CLI layer converts its ln(d)-multiplier parameterization before
// calling into the library.
struct EstimatorConfig {
  double alpha = 0.5;
  double tau = 0.0;
  double add_constant = 1.0;
  double gt_cutoff_exponent = 1.0 / 3.0;
};

inline ProbVector validate_prob_vector(std::vector<double> raw) {
  if (raw.empty()) throw Error(errc::empty_input, "probability vector has no entries");
  double sum = 0.0;
  for (double v : raw) {
    if (v < 0.0 || std::isnan(v))
      throw Error(errc::negative_entry, "probability entry " + std::to_string(v) + " is negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kNormalizationTol)
    throw Error(errc::not_normalized, "entries sum to " + std::to_string(sum));
  return ProbVector(std::move(raw));
}

inline ProbVector normalize(std::vector<double> raw) {
  if (raw.empty()) throw Error(errc::empty_input, "cannot normalize an empty vector");
  double sum = 0.0;
  for (double v : raw) {
    if (v < 0.0 || std::isnan(v))
      throw Error(errc::negative_entry, "entry " + std::to_string(v) + " is negative");
    sum += v;
  }
  if (sum <= 0.0) throw Error(errc::zero_sum, "entries sum to zero");
  for (double& v : raw) v /= sum;
  return validate_prob_vector(std::move(raw));
}

}  // namespace dpkl
