#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "dpkl/types.hpp"

namespace dpkl {

// Per-instance and minimax bound values for one (p, n, eps) configuration.
// All values are reported with the hidden Omega/O constants suppressed
// (constant 1); they are ratio diagnostics, never certified bounds.
struct BoundReport {
  double nondp_minimax = 0.0;
  double dp_minimax = 0.0;
  double nondp_instance_lower = 0.0;
  double dp_instance_lower = 0.0;
  double t_used = 1.0;
  std::size_t small_set_size = 0;
  double small_set_mass = 0.0;
};

// The pieces an instance-lower calculator contributes to a BoundReport.
struct InstanceLowerResult {
  double value = 0.0;
  double t_used = 1.0;
  std::size_t small_set_size = 0;
  double small_set_mass = 0.0;
};

// ln(1 + d/n): the add-constant minimax KL rate.
inline double minimax_nondp_upper(std::size_t d, double n) {
  return std::log1p(static_cast<double>(d) / n);
}

// ln(1 + d/(n*min{eps,1})): the DP minimax KL rate.
inline double minimax_dp(std::size_t d, double n, const PrivacyParams& priv) {
  return std::log1p(static_cast<double>(d) / (n * priv.epsilon_clamped()));
}

namespace detail {

// p*ln(1 + a/p) with the 0*ln(1 + ./0) = 0 convention.
inline double mass_log_term(double p, double a) {
  if (p <= 0.0) return 0.0;
  return p * std::log1p(a / p);
}

}  // namespace detail

// Non-DP per-instance lower bound under the additive neighborhood, reported
// with constant 1. The small-symbol set is the maximizing choice
// L' = {i : p_i <= t/n}: the expression grows with every added small symbol,
// so no search is needed.
inline InstanceLowerResult instance_lower_nondp(const ProbVector& p, double n, double t = 1.0) {
  if (t < 1.0) throw Error(errc::condition_violated, "requires t >= 1");
  if (n < 4.0) throw Error(errc::condition_violated, "requires n >= 4");
  if (p.size() < 2) throw Error(errc::condition_violated, "requires d >= 2");

  InstanceLowerResult r;
  r.t_used = t;
  double stat_term = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= t / n) {
      ++r.small_set_size;
      r.small_set_mass += p[i];
    }
    stat_term += std::min(p[i], 1.0 / n);
  }
  r.value = std::log1p(static_cast<double>(r.small_set_size)) / n +
            detail::mass_log_term(r.small_set_mass, static_cast<double>(r.small_set_size) / n) +
            stat_term;
  return r;
}

// DP per-instance lower bound under the privacy-calibrated neighborhood
// (small-symbol scale t/(n*eps)), reported with constant 1.
inline InstanceLowerResult instance_lower_dp(const ProbVector& p, double n,
                                             const PrivacyParams& priv, double t = 1.0) {
  if (t < 1.0) throw Error(errc::condition_violated, "requires t >= 1");
  if (n * priv.epsilon < 1.0) throw Error(errc::condition_violated, "requires n*eps >= 1");
  if (p.size() < 2) throw Error(errc::condition_violated, "requires d >= 2");
  if (priv.delta > priv.epsilon) throw Error(errc::condition_violated, "requires delta <= eps");

  const double ne = n * priv.epsilon;
  InstanceLowerResult r;
  r.t_used = t;
  double privacy_term = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= t / ne) {
      ++r.small_set_size;
      r.small_set_mass += p[i];
    }
    if (p[i] > 0.0) privacy_term += std::min(p[i], 1.0 / (p[i] * ne * ne));
  }
  r.value = privacy_term + std::log1p(static_cast<double>(r.small_set_size)) / ne +
            detail::mass_log_term(r.small_set_mass, static_cast<double>(r.small_set_size) / ne);
  return r;
}

// KL(Poi(m) || Poi(k)) = m - k + k*ln(k/m).
inline double poisson_kl(double m, double k) {
  return m - k + k * std::log(k / m);
}

// Chernoff-style tail bounds for x + z with x ~ Poi(a), z ~ Lap(0, b):
//   Pr[x + z <= c] <= (4/3) exp((-a/3 + c/2) / max{b,1})
//   Pr[x + z >= c] <= (4/3) exp(((a - c)/2) / max{b,1})
// Returned as (lower_tail_bound, upper_tail_bound). The lower-tail form holds
// for all parameters; the upper-tail form linearizes the Poisson MGF exponent
// and is a genuine bound only in the small-mean regime (a of order max{b,1}
// or less), which is where the thresholding analysis applies it.
inline std::pair<double, double> poisson_laplace_tail_upper(double a, double b, double c) {
  double denom = std::max(b, 1.0);
  double lower = (4.0 / 3.0) * std::exp((-a / 3.0 + c / 2.0) / denom);
  double upper = (4.0 / 3.0) * std::exp(((a - c) / 2.0) / denom);
  return {lower, upper};
}

inline double optimality_ratio(double empirical_kl, double lower) {
  if (lower == 0.0) throw Error(errc::divide_by_zero, "lower bound is zero");
  return empirical_kl / lower;
}

// Default neighborhood scales. The nominal non-DP choice min{1, 2 ln ln d}
// never exceeds the t >= 1 domain floor, so it collapses to 1.
inline double default_t_nondp(std::size_t d) {
  double nominal = (d > 2) ? std::min(1.0, 2.0 * std::log(std::log(static_cast<double>(d)))) : 1.0;
  return std::max(1.0, nominal);
}

inline double default_t_dp(std::size_t d) {
  return 24.0 * std::log(static_cast<double>(d));
}

}  // namespace dpkl
