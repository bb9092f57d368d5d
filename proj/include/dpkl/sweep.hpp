#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpkl/bounds.hpp"
#include "dpkl/data_io.hpp"
#include "dpkl/eval.hpp"

namespace dpkl {

// How to build the distribution under test for a given dimension d.
struct DistSpec {
  enum class Kind { kPowerLaw, kUniform, kConcentrated, kFile };

  Kind kind = Kind::kPowerLaw;
  double beta = 1.0;
  std::vector<double> masses;  // concentrated
  std::string path;            // file

  DataSource make(std::size_t d) const {
    switch (kind) {
      case Kind::kPowerLaw:
        return DataSource::synthetic(power_law(d, beta), "powerlaw");
      case Kind::kUniform:
        return DataSource::synthetic(uniform(d), "uniform");
      case Kind::kConcentrated:
        return DataSource::synthetic(concentrated(d, masses), "concentrated");
      case Kind::kFile:
        return load_token_histogram(path);
    }
    throw Error(errc::parse_error, "unknown distribution kind");
  }
};

// One benchmark sweep: the cross product of (n, d, eps, estimator) cells.
struct SweepSpec {
  DistSpec dist;
  std::vector<double> n_values;
  std::vector<std::size_t> d_values;
  std::vector<double> eps_values;
  std::vector<EstimatorKind> estimators;
  std::size_t trials = 5;
  std::uint64_t seed = 0;
  LossKind loss = LossKind::kKl;
  std::optional<double> alpha_override;
  std::optional<double> tau_mult_override;  // threshold as a multiple of ln d
  std::optional<double> c_override;
};

inline std::uint64_t derive_cell_seed(std::uint64_t master, std::uint64_t cell_index) {
  return detail::mix64(master ^ detail::mix64(cell_index));
}

// Per-cell hyperparameters. The split ratio defaults to 0.5 (0.9 for the DP
// sampling-twice estimator) and the threshold to 0 for the non-DP
// sampling-twice and min{1/eps, 1} * ln d for the DP one, the tuned values
// used throughout the benchmark sweeps. Overrides win when present.
inline EstimatorConfig resolve_config(EstimatorKind kind, std::size_t d, double eps,
                                      const std::optional<double>& alpha,
                                      const std::optional<double>& tau_mult,
                                      const std::optional<double>& c) {
  EstimatorConfig cfg;
  cfg.alpha = alpha ? *alpha : (kind == EstimatorKind::kSamplingTwiceDp ? 0.9 : 0.5);
  double log_d = std::log(static_cast<double>(d));
  if (tau_mult) {
    cfg.tau = *tau_mult * log_d;
  } else if (kind == EstimatorKind::kSamplingTwiceDp) {
    cfg.tau = std::min(1.0 / eps, 1.0) * log_d;
  } else {
    cfg.tau = 0.0;
  }
  cfg.add_constant = c ? *c : 1.0;
  return cfg;
}

// Runs every cell of the sweep in deterministic cross-product order (n-major,
// then d, eps, estimator). Each cell's trials draw from a seed derived from
// (spec.seed, cell index), so the output is byte-reproducible.
inline std::vector<ResultRow> run_benchmark(const SweepSpec& spec) {
  if (spec.n_values.empty() || spec.eps_values.empty() || spec.estimators.empty())
    throw Error(errc::empty_input, "sweep needs at least one n, eps, and estimator");
  std::vector<std::size_t> d_values = spec.d_values;
  if (spec.dist.kind == DistSpec::Kind::kFile) {
    d_values = {spec.dist.make(0).dimension()};
  } else if (d_values.empty()) {
    throw Error(errc::empty_input, "sweep needs at least one d");
  }

  std::vector<ResultRow> rows;
  rows.reserve(spec.n_values.size() * d_values.size() * spec.eps_values.size() *
               spec.estimators.size());
  std::uint64_t cell_index = 0;
  for (double n : spec.n_values) {
    for (std::size_t d : d_values) {
      DataSource source = spec.dist.make(d);
      for (double eps : spec.eps_values) {
        PrivacyParams priv{eps, 0.0};
        for (EstimatorKind kind : spec.estimators) {
          EstimatorConfig cfg = resolve_config(kind, source.dimension(), eps,
                                               spec.alpha_override, spec.tau_mult_override,
                                               spec.c_override);
          std::uint64_t cell_seed = derive_cell_seed(spec.seed, cell_index++);
          TrialStats stats =
              run_trials(source, kind, cfg, priv, n, spec.trials, cell_seed, spec.loss);
          ResultRow row;
          row.n = n;
          row.d = source.dimension();
          row.eps = eps;
          row.estimator = estimator_name(kind);
          row.loss_kind = loss_name(spec.loss);
          row.mean = stats.mean;
          row.std_dev = stats.std_dev;
          row.trials = stats.trials;
          row.seed = spec.seed;
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

struct GridRow {
  double alpha = 0.0;
  double tau_mult = 0.0;
  double mean = 0.0;
  double std_dev = 0.0;
};

// The hyperparameter grids searched in the experiments.
inline const std::vector<double>& default_alpha_grid() {
  static const std::vector<double> grid{0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99};
  return grid;
}

inline const std::vector<double>& default_tau_mult_grid() {
  static const std::vector<double> grid{0.0, 0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0};
  return grid;
}

// Evaluates one (n, d, eps) cell for a single sampling-twice estimator over
// every (alpha, tau_mult) grid point, with common random numbers across grid
// points. Rows come back sorted by mean loss ascending (stable, so ties keep
// grid order).
inline std::vector<GridRow> run_gridsearch(const SweepSpec& spec,
                                           const std::vector<double>& alpha_grid,
                                           const std::vector<double>& tau_mult_grid) {
  if (spec.estimators.size() != 1 ||
      (spec.estimators[0] != EstimatorKind::kSamplingTwice &&
       spec.estimators[0] != EstimatorKind::kSamplingTwiceDp))
    throw Error(errc::condition_violated,
                "gridsearch needs exactly one of the sampling-twice estimators");
  if (spec.n_values.size() != 1 || spec.eps_values.size() != 1 ||
      (spec.dist.kind != DistSpec::Kind::kFile && spec.d_values.size() != 1))
    throw Error(errc::condition_violated, "gridsearch needs a single (n, d, eps) cell");

  EstimatorKind kind = spec.estimators[0];
  std::size_t d = spec.dist.kind == DistSpec::Kind::kFile ? 0 : spec.d_values[0];
  DataSource source = spec.dist.make(d);
  double n = spec.n_values[0];
  double eps = spec.eps_values[0];
  PrivacyParams priv{eps, 0.0};
  std::uint64_t cell_seed = derive_cell_seed(spec.seed, 0);

  std::vector<GridRow> rows;
  rows.reserve(alpha_grid.size() * tau_mult_grid.size());
  for (double alpha : alpha_grid) {
    for (double tau_mult : tau_mult_grid) {
      EstimatorConfig cfg = resolve_config(kind, source.dimension(), eps, alpha, tau_mult,
                                           spec.c_override);
      TrialStats stats = run_trials(source, kind, cfg, priv, n, spec.trials, cell_seed, spec.loss);
      rows.push_back(GridRow{alpha, tau_mult, stats.mean, stats.std_dev});
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const GridRow& a, const GridRow& b) { return a.mean < b.mean; });
  return rows;
}

inline std::string gridsearch_csv_string(const std::vector<GridRow>& rows) {
  std::ostringstream out;
  out << "alpha,tau_mult,mean,std\n";
  for (const GridRow& r : rows) {
    out << format_double(r.alpha) << ',' << format_double(r.tau_mult) << ','
        << format_double(r.mean) << ',' << format_double(r.std_dev) << '\n';
  }
  return out.str();
}

inline void write_gridsearch_csv(const std::vector<GridRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(errc::io_error, "cannot open " + path + " for writing");
  out << gridsearch_csv_string(rows);
  if (!out) throw Error(errc::io_error, "failed writing " + path);
}

// Assembles the full diagnostic report for one (p, n, eps) configuration.
// When eps is present, t_used and the small-set fields describe the
// privacy-calibrated selection {i : p_i <= t/(n*eps)}; otherwise the non-DP
// selection {i : p_i <= t/n}.
inline BoundReport compute_bound_report(const ProbVector& p, double n,
                                        const std::optional<PrivacyParams>& priv,
                                        std::optional<double> t_override) {
  BoundReport report;
  report.nondp_minimax = minimax_nondp_upper(p.size(), n);
  double t_nondp = t_override ? *t_override : default_t_nondp(p.size());
  InstanceLowerResult nondp = instance_lower_nondp(p, n, t_nondp);
  report.nondp_instance_lower = nondp.value;
  report.t_used = nondp.t_used;
  report.small_set_size = nondp.small_set_size;
  report.small_set_mass = nondp.small_set_mass;
  if (priv) {
    report.dp_minimax = minimax_dp(p.size(), n, *priv);
    double t_dp = t_override ? *t_override : default_t_dp(p.size());
    InstanceLowerResult dp = instance_lower_dp(p, n, *priv, t_dp);
    report.dp_instance_lower = dp.value;
    report.t_used = dp.t_used;
    report.small_set_size = dp.small_set_size;
    report.small_set_mass = dp.small_set_mass;
  }
  return report;
}

}  // namespace dpkl
