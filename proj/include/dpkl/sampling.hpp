#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "dpkl/types.hpp"

namespace dpkl {

enum class NoiseMode { kRandom, kZeroNoise };

namespace detail {

// SplitMix64 finalizer; used to derive independent per-trial seeds from
// (master seed, trial index).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Seeded generator for every random draw in the library. Identical
// (seed, mode, call sequence) yields identical draws. ZeroNoise mode is a
// deterministic stand-in for fixture tests: Laplace draws become 0, Poisson
// draws become the rounded mean, binomial draws the rounded mean.
//
// Single-owner mutable state: sendable between threads, not shareable. The
// trial runner derives one NoiseSource per trial via for_trial().
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed, NoiseMode mode = NoiseMode::kRandom)
      : engine_(detail::mix64(seed)), mode_(mode), seed_(seed) {}

  // The stream for trial k is a pure function of (master_seed, k), so trials
  // can run in any order without perturbing each other's draws.
  static NoiseSource for_trial(std::uint64_t master_seed, std::uint64_t trial,
                               NoiseMode mode = NoiseMode::kRandom) {
    return NoiseSource(detail::mix64(master_seed ^ detail::mix64(trial)), mode);
  }

  NoiseMode mode() const { return mode_; }
  std::uint64_t seed() const { return seed_; }

  // Uniform in (0, 1); never returns an endpoint.
  double uniform01() {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    double u;
    do {
      u = dist(engine_);
    } while (u <= 0.0 || u >= 1.0);
    return u;
  }

  // Lap(0, b) via inverse CDF of a uniform draw. Not hardened against
  // floating-point attacks; this is a research artifact, not a production DP
  // system.
  double laplace(double scale_b) {
    if (mode_ == NoiseMode::kZeroNoise) return 0.0;
    double u = uniform01() - 0.5;
    double sign = (u < 0.0) ? -1.0 : 1.0;
    return -scale_b * sign * std::log(1.0 - 2.0 * std::abs(u));
  }

  double poisson(double mean) {
    if (mean <= 0.0) return 0.0;
    if (mode_ == NoiseMode::kZeroNoise) return std::llround(mean);
    std::poisson_distribution<long long> dist(mean);
    return static_cast<double>(dist(engine_));
  }

  double binomial(long long trials, double prob) {
    if (trials <= 0) return 0.0;
    if (prob <= 0.0) return 0.0;
    if (prob >= 1.0) return static_cast<double>(trials);
    if (mode_ == NoiseMode::kZeroNoise) return std::llround(trials * prob);
    std::binomial_distribution<long long> dist(trials, prob);
    return static_cast<double>(dist(engine_));
  }

 private:
  std::mt19937_64 engine_;
  NoiseMode mode_;
  std::uint64_t seed_;
};

inline double sample_laplace(double scale_b, NoiseSource& rng) {
  return rng.laplace(scale_b);
}

// counts[i] ~ Poi(n * p_i), independent across symbols. ZeroNoise mode gives
// round(n * p_i).
inline Histogram sample_poisson_histogram(const ProbVector& p, double n, NoiseSource& rng) {
  Histogram h;
  h.counts.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) h.counts.push_back(rng.poisson(n * p[i]));
  return h;
}

// counts ~ Mult(n, p); entries sum to exactly n. Drawn by conditional
// binomials coordinate by coordinate. ZeroNoise mode apportions round(n*p_i)
// by largest remainder so the total still equals n.
inline Histogram sample_multinomial_histogram(const ProbVector& p, long long n, NoiseSource& rng) {
  const std::size_t d = p.size();
  Histogram h;
  h.counts.assign(d, 0.0);
  if (rng.mode() == NoiseMode::kZeroNoise) {
    long long assigned = 0;
    std::vector<std::pair<double, std::size_t>> remainders;
    remainders.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
      double exact = n * p[i];
      double base = std::floor(exact);
      h.counts[i] = base;
      assigned += static_cast<long long>(base);
      remainders.emplace_back(-(exact - base), i);  // larger remainder first
    }
    std::stable_sort(remainders.begin(), remainders.end());
    for (long long k = 0; k < n - assigned; ++k) h.counts[remainders[static_cast<std::size_t>(k)].second] += 1.0;
    return h;
  }
  long long remaining = n;
  double rest_mass = 1.0;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    if (remaining <= 0) break;
    double q = (rest_mass > 0.0) ? p[i] / rest_mass : 1.0;
    if (q > 1.0) q = 1.0;
    double c = rng.binomial(remaining, q);
    h.counts[i] = c;
    remaining -= static_cast<long long>(c);
    rest_mass -= p[i];
  }
  if (d > 0) h.counts[d - 1] = static_cast<double>(remaining);
  return h;
}

// x ~ Poi(alpha*n*p) and x_prime ~ Poi((1-alpha)*n*p), mutually independent,
// so x + x_prime ~ Poi(n*p). Draw order: all of x first, then all of x_prime.
inline SplitSample split_sample(const ProbVector& p, double n, double alpha, NoiseSource& rng) {
  if (alpha <= 0.0 || alpha >= 1.0)
    throw Error(errc::condition_violated, "split ratio alpha must lie strictly inside (0,1)");
  SplitSample s;
  s.alpha = alpha;
  s.n = n;
  s.x = sample_poisson_histogram(p, alpha * n, rng);
  s.x_prime = sample_poisson_histogram(p, (1.0 - alpha) * n, rng);
  return s;
}

}  // namespace dpkl
