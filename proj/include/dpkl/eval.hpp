#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "dpkl/data_io.hpp"
#include "dpkl/estimators.hpp"
#include "dpkl/sampling.hpp"
#include "dpkl/types.hpp"

namespace dpkl {

enum class LossKind { kKl, kNll };

inline const char* loss_name(LossKind loss) {
  return loss == LossKind::kKl ? "KL" : "NLL";
}

// sum_{i: p_i > 0} p_i * ln(p_i / q_i), in nats. +inf when the estimate puts
// zero mass on a supported symbol; terms with p_i = 0 contribute nothing.
inline double kl_divergence(const ProbVector& p, const ProbVector& q) {
  if (p.size() != q.size())
    throw Error(errc::dimension_mismatch, "KL needs equal dimensions");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    sum += p[i] * std::log(p[i] / q[i]);
  }
  return sum;
}

// -sum_i (h_i / ||h||_1) * ln(q_i): the holdout negative log likelihood of an
// estimate, in nats.
inline double nll(const ProbVector& estimate, const Histogram& holdout) {
  if (estimate.size() != holdout.size())
    throw Error(errc::dimension_mismatch, "NLL needs equal dimensions");
  double total = holdout.total();
  if (total <= 0.0) throw Error(errc::empty_holdout, "holdout has no samples");
  double sum = 0.0;
  for (std::size_t i = 0; i < holdout.size(); ++i) {
    if (holdout.counts[i] <= 0.0) continue;
    if (estimate[i] <= 0.0) return std::numeric_limits<double>::infinity();
    sum -= holdout.counts[i] / total * std::log(estimate[i]);
  }
  return sum;
}

// Per-trial losses for one benchmark cell, plus their mean and population
// std. An infinite trial loss propagates: mean and std become +inf rather
// than masking an estimator that assigned zero mass.
struct TrialStats {
  std::vector<double> values;
  double mean = 0.0;
  double std_dev = 0.0;
  std::size_t trials = 0;
  LossKind loss_kind = LossKind::kKl;

  static TrialStats from_values(std::vector<double> values, LossKind loss) {
    TrialStats s;
    s.loss_kind = loss;
    s.trials = values.size();
    s.values = std::move(values);
    bool finite = true;
    double sum = 0.0;
    for (double v : s.values) {
      if (!std::isfinite(v)) finite = false;
      sum += v;
    }
    if (!finite || s.values.empty()) {
      s.mean = std::numeric_limits<double>::infinity();
      s.std_dev = std::numeric_limits<double>::infinity();
      return s;
    }
    s.mean = sum / static_cast<double>(s.trials);
    double sq = 0.0;
    for (double v : s.values) sq += (v - s.mean) * (v - s.mean);
    s.std_dev = std::sqrt(sq / static_cast<double>(s.trials));
    return s;
  }
};

namespace detail {

// Splits integer counts per symbol with Binomial(count, ratio); the
// complement goes to the second half. For counts that are themselves i.i.d.
// samples this is an exact two-way data split.
inline std::pair<Histogram, Histogram> thin_histogram(const Histogram& h, double ratio,
                                                      NoiseSource& rng) {
  Histogram a, b;
  a.counts.resize(h.size());
  b.counts.resize(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    double kept = rng.binomial(std::llround(h.counts[i]), ratio);
    a.counts[i] = kept;
    b.counts[i] = h.counts[i] - kept;
  }
  return {std::move(a), std::move(b)};
}

inline ProbVector run_estimator(EstimatorKind kind, const ProbVector& p, double n,
                                const EstimatorConfig& cfg, const PrivacyParams& priv,
                                NoiseSource& rng) {
  switch (kind) {
    case EstimatorKind::kSamplingTwice: {
      SplitSample s = split_sample(p, n, cfg.alpha, rng);
      return sampling_twice(s, cfg.tau);
    }
    case EstimatorKind::kSamplingTwiceDp: {
      SplitSample s = split_sample(p, n, cfg.alpha, rng);
      return sampling_twice_dp(s, priv, cfg.tau, rng);
    }
    case EstimatorKind::kAddConstant:
      return add_constant(sample_poisson_histogram(p, n, rng), cfg.add_constant);
    case EstimatorKind::kAddConstantDp:
      return add_constant_dp(sample_poisson_histogram(p, n, rng), priv, rng);
    case EstimatorKind::kGoodTuring:
      return good_turing(sample_poisson_histogram(p, n, rng), cfg);
  }
  throw Error(errc::incompatible_loss, "unknown estimator");
}

// Estimate from an already-sampled dataset (the empirical/NLL path). The
// sampling-twice estimators split the dataset into their two halves by
// thinning with ratio alpha.
inline ProbVector run_estimator_on_counts(EstimatorKind kind, const Histogram& data,
                                          const EstimatorConfig& cfg, const PrivacyParams& priv,
                                          NoiseSource& rng) {
  switch (kind) {
    case EstimatorKind::kSamplingTwice:
    case EstimatorKind::kSamplingTwiceDp: {
      auto [x, x_prime] = thin_histogram(data, cfg.alpha, rng);
      SplitSample s{std::move(x), std::move(x_prime), cfg.alpha, data.total()};
      return kind == EstimatorKind::kSamplingTwice
                 ? sampling_twice(s, cfg.tau)
                 : sampling_twice_dp(s, priv, cfg.tau, rng);
    }
    case EstimatorKind::kAddConstant:
      return add_constant(data, cfg.add_constant);
    case EstimatorKind::kAddConstantDp:
      return add_constant_dp(data, priv, rng);
    case EstimatorKind::kGoodTuring:
      return good_turing(data, cfg);
  }
  throw Error(errc::incompatible_loss, "unknown estimator");
}

}  // namespace detail

// Runs `trials` independent (sample, estimate, score) rounds for one
// benchmark cell. Trial k draws from a NoiseSource derived purely from
// (master_seed, k), so results do not depend on execution order.
//
// KL loss needs a synthetic source (known ground truth); the estimator sees a
// fresh Poissonized dataset of expected size n per trial. NLL loss needs an
// empirical source: each trial splits the ingested counts into two halves by
// per-token binomial thinning with ratio 1/2, thins both halves further to
// expected size n when n is smaller than a half, feeds the first half to the
// estimator, and scores NLL against the second.
inline TrialStats run_trials(const DataSource& source, EstimatorKind kind,
                             const EstimatorConfig& cfg, const PrivacyParams& priv, double n,
                             std::size_t trials, std::uint64_t master_seed, LossKind loss,
                             NoiseMode mode = NoiseMode::kRandom) {
  if (trials == 0) throw Error(errc::condition_violated, "trials >= 1 required");
  if ((kind == EstimatorKind::kSamplingTwice || kind == EstimatorKind::kSamplingTwiceDp) &&
      (cfg.alpha <= 0.0 || cfg.alpha >= 1.0))
    throw Error(errc::condition_violated, "split ratio alpha must lie strictly inside (0,1)");
  if (loss == LossKind::kKl && source.kind != DataSource::Kind::kSynthetic)
    throw Error(errc::incompatible_loss, "KL loss needs a synthetic source with known ground truth");
  if (loss == LossKind::kNll && source.kind != DataSource::Kind::kEmpirical)
    throw Error(errc::incompatible_loss, "NLL loss needs an empirical source with a holdout split");

  std::vector<double> values(trials);
  for (std::size_t k = 0; k < trials; ++k) {
    NoiseSource rng = NoiseSource::for_trial(master_seed, k, mode);
    if (loss == LossKind::kKl) {
      ProbVector estimate = detail::run_estimator(kind, source.p, n, cfg, priv, rng);
      values[k] = kl_divergence(source.p, estimate);
    } else {
      auto [train, holdout] = detail::thin_histogram(source.counts, 0.5, rng);
      if (train.total() <= 0.0 || holdout.total() <= 0.0)
        throw Error(errc::empty_holdout, "empirical split produced an empty half");
      if (n > 0.0) {
        if (n < train.total())
          train = detail::thin_histogram(train, n / train.total(), rng).first;
        if (n < holdout.total())
          holdout = detail::thin_histogram(holdout, n / holdout.total(), rng).first;
      }
      if (train.total() <= 0.0 || holdout.total() <= 0.0)
        throw Error(errc::empty_holdout, "empirical split produced an empty half");
      ProbVector estimate = detail::run_estimator_on_counts(kind, train, cfg, priv, rng);
      values[k] = nll(estimate, holdout);
    }
  }
  return TrialStats::from_values(std::move(values), loss);
}

}  // namespace dpkl
