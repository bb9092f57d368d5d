#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "dpkl/sampling.hpp"
#include "dpkl/types.hpp"

namespace dpkl {

enum class EstimatorKind {
  kAddConstant,
  kAddConstantDp,
  kGoodTuring,
  kSamplingTwice,
  kSamplingTwiceDp,
};

// Short names fixed by the results-CSV vocabulary.
inline const char* estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kAddConstant: return "addconst";
    case EstimatorKind::kAddConstantDp: return "addconst_dp";
    case EstimatorKind::kGoodTuring: return "gt";
    case EstimatorKind::kSamplingTwice: return "st";
    case EstimatorKind::kSamplingTwiceDp: return "st_dp";
  }
  return "?";
}

inline bool estimator_is_private(EstimatorKind kind) {
  return kind == EstimatorKind::kAddConstantDp || kind == EstimatorKind::kSamplingTwiceDp;
}

// output_i = (x_i + c) / (sum_j x_j + c*d). c=1 is Laplace smoothing, c=1/2
// Krichevsky-Trofimov.
inline ProbVector add_constant(const Histogram& x, double c) {
  if (c <= 0.0) throw Error(errc::condition_violated, "add-constant c must be positive");
  std::vector<double> out(x.size());
  double denom = x.total() + c * static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x.counts[i] + c) / denom;
  return validate_prob_vector(std::move(out));
}

// Laplace mechanism over the count vector (l1-sensitivity 1), floored at
// 1/min{eps,1}, then normalized. eps-DP.
inline ProbVector add_constant_dp(const Histogram& x, const PrivacyParams& priv, NoiseSource& rng) {
  double floor = 1.0 / priv.epsilon_clamped();
  std::vector<double> noisy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    noisy[i] = std::max(x.counts[i] + rng.laplace(1.0 / priv.epsilon), floor);
  return normalize(std::move(noisy));
}

// Simplified Good-Turing baseline. Counts are grouped into classes by
// (rounded) value t with occupancy Phi_t. Classes at or below the cutoff
// n^gt_cutoff_exponent get smoothed mass (t+1)*(Phi_{t+1}+1); classes above
// keep their empirical mass t*Phi_t. Class mass is shared uniformly among its
// symbols and the whole vector normalized. Zero-count symbols share the t=0
// smoothed mass Phi_1 + 1.
inline ProbVector good_turing(const Histogram& x, const EstimatorConfig& cfg) {
  if (x.size() == 0) throw Error(errc::empty_histogram, "good_turing needs at least one symbol");
  double n = x.total();
  if (n <= 0.0) throw Error(errc::empty_histogram, "good_turing needs a nonzero total count");

  std::map<long long, std::size_t> occupancy;  // Phi_t over observed classes
  std::vector<long long> cls(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    cls[i] = std::llround(x.counts[i]);
    ++occupancy[cls[i]];
  }
  double cutoff = std::pow(n, cfg.gt_cutoff_exponent);

  std::map<long long, double> per_symbol;  // class mass / Phi_t
  for (const auto& [t, phi_t] : occupancy) {
    double mass;
    if (static_cast<double>(t) <= cutoff) {
      auto next = occupancy.find(t + 1);
      double phi_next = (next == occupancy.end()) ? 0.0 : static_cast<double>(next->second);
      mass = static_cast<double>(t + 1) * (phi_next + 1.0);
    } else {
      mass = static_cast<double>(t) * static_cast<double>(phi_t);
    }
    per_symbol[t] = mass / static_cast<double>(phi_t);
  }

  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = per_symbol[cls[i]];
  return normalize(std::move(out));
}

// Non-DP sampling twice. One half selects the low-count set L, the other half
// estimates L's combined mass and the individual symbols:
//   L = {i : x_i <= tau}
//   c~ = max{sum_{i in L} x'_i, 1}
//   x~_i = max{x'_i, 1}
//   N = c~ + sum_{i not in L} x~_i
//   out_i = c~/N * x~_i / sum_{j in L} x~_j   for i in L
//   out_i = x~_i / N                          for i not in L
// When L is empty the c~ term has no symbols to distribute over, so the raw
// vector sums to (N - c~)/N; the final normalize absorbs the gap. All outputs
// are strictly positive because x~_i >= 1 and c~ >= 1.
inline ProbVector sampling_twice(const SplitSample& s, double tau = 0.0) {
  const std::size_t d = s.x.size();
  if (d == 0 || s.x_prime.size() != d)
    throw Error(errc::dimension_mismatch, "split halves must share a nonzero length");

  std::vector<bool> low(d);
  double low_prime_total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    low[i] = s.x.counts[i] <= tau;
    if (low[i]) low_prime_total += s.x_prime.counts[i];
  }
  double combined = std::max(low_prime_total, 1.0);

  std::vector<double> trunc(d);
  double low_trunc_total = 0.0;
  double high_trunc_total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    trunc[i] = std::max(s.x_prime.counts[i], 1.0);
    (low[i] ? low_trunc_total : high_trunc_total) += trunc[i];
  }
  double norm = combined + high_trunc_total;

  std::vector<double> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (low[i]) {
      assert(low_trunc_total > 0.0);
      out[i] = combined / norm * trunc[i] / low_trunc_total;
    } else {
      out[i] = trunc[i] / norm;
    }
  }
  return normalize(std::move(out));
}

// Noisy threshold of the DP sampling-twice pipeline: a symbol is treated as
// small when x_i + Lap(0, 1/eps) <= tau / min{eps,1}.
inline double dp_threshold(double tau, const PrivacyParams& priv) {
  return tau / priv.epsilon_clamped();
}

// eps-DP sampling twice. Every statistic that touches the data is protected
// by Laplace noise of scale 1/eps: the per-symbol thresholding counts x_i,
// the combined small-set count on the fresh half, and the per-symbol fresh
// counts outside L. Each record lives in exactly one of x, x', and each
// protected scalar has l1-sensitivity 1.
//
// With eps_c = min{eps,1} and floor f = 1/eps_c:
//   x~_i = x_i + Lap(1/eps);        L = {i : x~_i <= tau/eps_c}  (ties in L)
//   c~   = max{sum_{i in L} x'_i + Lap(1/eps), f}
//   x~'_i = x'_i + Lap(1/eps)                     for i not in L
//   xbar_i = max{x~_i, f}                         for i in L
//   xbar_i = (1-alpha)*(max{x~_i,f} + max{x~'_i,f}) for i not in L
//   N = c~ + sum_{i not in L} xbar_i
//   out_i = c~/N * xbar_i / sum_{j in L} xbar_j   for i in L
//   out_i = xbar_i / N                            for i not in L
// Noise draw order: all thresholding draws by symbol index, then the combined
// mass draw, then the fresh-half draws by symbol index.
inline ProbVector sampling_twice_dp(const SplitSample& s, const PrivacyParams& priv,
                                    double tau, NoiseSource& rng) {
  const std::size_t d = s.x.size();
  if (d == 0 || s.x_prime.size() != d)
    throw Error(errc::dimension_mismatch, "split halves must share a nonzero length");
  const double scale = 1.0 / priv.epsilon;
  const double floor = 1.0 / priv.epsilon_clamped();
  const double threshold = dp_threshold(tau, priv);

  std::vector<double> noisy(d);
  std::vector<bool> low(d);
  double low_prime_total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    noisy[i] = s.x.counts[i] + rng.laplace(scale);
    low[i] = noisy[i] <= threshold;
    if (low[i]) low_prime_total += s.x_prime.counts[i];
  }
  double combined = std::max(low_prime_total + rng.laplace(scale), floor);

  std::vector<double> trunc(d);
  double low_trunc_total = 0.0;
  double high_trunc_total = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (low[i]) {
      trunc[i] = std::max(noisy[i], floor);
      low_trunc_total += trunc[i];
    } else {
      double noisy_prime = s.x_prime.counts[i] + rng.laplace(scale);
      trunc[i] = (1.0 - s.alpha) * (std::max(noisy[i], floor) + std::max(noisy_prime, floor));
      high_trunc_total += trunc[i];
    }
  }
  double norm = combined + high_trunc_total;

  std::vector<double> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (low[i]) {
      assert(low_trunc_total > 0.0);
      out[i] = combined / norm * trunc[i] / low_trunc_total;
    } else {
      out[i] = trunc[i] / norm;
    }
  }
  return normalize(std::move(out));
}

// Default threshold: tau = 4 ln d.
inline ProbVector sampling_twice_dp(const SplitSample& s, const PrivacyParams& priv,
                                    NoiseSource& rng) {
  return sampling_twice_dp(s, priv, 4.0 * std::log(static_cast<double>(s.x.size())), rng);
}

}  // namespace dpkl
