// Command-line front end for the dpkl library: single-shot estimation,
// benchmark sweeps over (n, d, eps), bound reports, and hyperparameter grid
// search. Every path is deterministic given --seed.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpkl/dpkl.hpp"

namespace {

struct DistOptions {
  std::string dist = "powerlaw";
  double beta = 1.0;
  std::vector<double> masses;
  std::string path;
};

void add_dist_options(CLI::App* cmd, DistOptions* opts) {
  cmd->add_option("--dist", opts->dist, "Distribution family")
      ->check(CLI::IsMember({"powerlaw", "uniform", "concentrated", "file"}))
      ->capture_default_str();
  cmd->add_option("--beta", opts->beta, "Power-law exponent")->capture_default_str();
  cmd->add_option("--masses", opts->masses, "Leading masses for --dist concentrated")
      ->delimiter(',');
  cmd->add_option("--path", opts->path, "Token-histogram file for --dist file");
}

dpkl::DistSpec make_dist_spec(const DistOptions& opts) {
  dpkl::DistSpec spec;
  if (opts.dist == "powerlaw") {
    spec.kind = dpkl::DistSpec::Kind::kPowerLaw;
    spec.beta = opts.beta;
  } else if (opts.dist == "uniform") {
    spec.kind = dpkl::DistSpec::Kind::kUniform;
  } else if (opts.dist == "concentrated") {
    spec.kind = dpkl::DistSpec::Kind::kConcentrated;
    spec.masses = opts.masses;
  } else {
    spec.kind = dpkl::DistSpec::Kind::kFile;
    spec.path = opts.path;
  }
  return spec;
}

dpkl::Histogram to_histogram(const std::vector<double>& counts) {
  for (double c : counts)
    if (c < 0.0) throw dpkl::Error(dpkl::errc::negative_entry, "counts must be nonnegative");
  return dpkl::Histogram(counts);
}

std::optional<dpkl::EstimatorKind> parse_estimator(const std::string& name) {
  using dpkl::EstimatorKind;
  if (name == "addconst") return EstimatorKind::kAddConstant;
  if (name == "addconst_dp") return EstimatorKind::kAddConstantDp;
  if (name == "gt") return EstimatorKind::kGoodTuring;
  if (name == "st") return EstimatorKind::kSamplingTwice;
  if (name == "st_dp") return EstimatorKind::kSamplingTwiceDp;
  return std::nullopt;
}

void print_estimate(const dpkl::ProbVector& estimate, const std::string& out_path) {
  std::string text;
  for (std::size_t i = 0; i < estimate.size(); ++i)
    text += std::to_string(i) + "," + dpkl::format_double(estimate[i]) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw dpkl::Error(dpkl::errc::io_error, "cannot open " + out_path);
    out << text;
  }
}

int arg_error(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete distribution estimation under KL loss, with and without "
               "differential privacy"};
  app.require_subcommand(1);

  // --- estimate ---
  auto* estimate_cmd = app.add_subcommand("estimate", "Run one estimator on given counts");
  std::string est_name;
  std::vector<double> counts, x_half, xprime_half;
  double est_c = 1.0, est_gt_exp = 1.0 / 3.0;
  std::optional<double> est_eps, est_alpha, est_tau_mult;
  std::uint64_t est_seed = 0;
  bool est_zero_noise = false;
  std::string est_out;
  estimate_cmd->add_option("--est", est_name, "addconst|addconst_dp|gt|st|st_dp")->required();
  estimate_cmd->add_option("--counts", counts, "Histogram counts")->delimiter(',');
  estimate_cmd->add_option("--x", x_half, "First half counts (st, st_dp)")->delimiter(',');
  estimate_cmd->add_option("--xprime", xprime_half, "Second half counts (st, st_dp)")
      ->delimiter(',');
  estimate_cmd->add_option("--c", est_c, "Add-constant value")->capture_default_str();
  estimate_cmd->add_option("--eps", est_eps, "Privacy budget (DP estimators)");
  estimate_cmd->add_option("--alpha", est_alpha, "Split ratio (st, st_dp); default 0.5");
  estimate_cmd->add_option("--tau-mult", est_tau_mult,
                           "Threshold as a multiple of ln d; defaults: st 0, st_dp 4");
  estimate_cmd->add_option("--gt-exp", est_gt_exp, "Good-Turing cutoff exponent")
      ->capture_default_str();
  estimate_cmd->add_option("--seed", est_seed, "Noise seed")->capture_default_str();
  estimate_cmd->add_flag("--zero-noise", est_zero_noise, "Deterministic zero-noise mode");
  estimate_cmd->add_option("--out", est_out, "Write result to file instead of stdout");

  // --- benchmark ---
  auto* bench_cmd = app.add_subcommand("benchmark", "Monte-Carlo sweep over (n, d, eps)");
  DistOptions bench_dist;
  add_dist_options(bench_cmd, &bench_dist);
  std::vector<double> bench_n, bench_eps{1.0};
  std::vector<std::size_t> bench_d;
  std::vector<std::string> bench_estimators{"addconst", "addconst_dp", "gt", "st", "st_dp"};
  std::size_t bench_trials = 5;
  std::uint64_t bench_seed = 0;
  std::string bench_loss = "kl", bench_out;
  std::optional<double> bench_alpha, bench_tau_mult, bench_c;
  bench_cmd->add_option("--n", bench_n, "Sample sizes")->delimiter(',')->required();
  bench_cmd->add_option("--d", bench_d, "Dimensions")->delimiter(',');
  bench_cmd->add_option("--eps", bench_eps, "Privacy budgets")->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--estimators", bench_estimators, "Estimator short names")
      ->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--trials", bench_trials, "Trials per cell")->capture_default_str();
  bench_cmd->add_option("--seed", bench_seed, "Master seed")->capture_default_str();
  bench_cmd->add_option("--loss", bench_loss, "kl|nll")
      ->check(CLI::IsMember({"kl", "nll"}))->capture_default_str();
  bench_cmd->add_option("--alpha", bench_alpha, "Split-ratio override");
  bench_cmd->add_option("--tau-mult", bench_tau_mult, "Threshold override, multiple of ln d");
  bench_cmd->add_option("--c", bench_c, "Add-constant override");
  bench_cmd->add_option("--out", bench_out, "Results CSV path")->required();

  // --- bounds ---
  auto* bounds_cmd = app.add_subcommand("bounds", "Minimax and per-instance bound report");
  DistOptions bounds_dist;
  add_dist_options(bounds_cmd, &bounds_dist);
  std::size_t bounds_d = 0;
  double bounds_n = 0.0;
  std::optional<double> bounds_eps, bounds_t;
  bounds_cmd->add_option("--d", bounds_d, "Dimension");
  bounds_cmd->add_option("--n", bounds_n, "Sample size")->required();
  bounds_cmd->add_option("--eps", bounds_eps, "Privacy budget (adds DP bounds)");
  bounds_cmd->add_option("--t", bounds_t, "Neighborhood scale override (t >= 1)");

  // --- gridsearch ---
  auto* grid_cmd = app.add_subcommand("gridsearch",
                                      "Hyperparameter grid search for st or st_dp");
  DistOptions grid_dist;
  add_dist_options(grid_cmd, &grid_dist);
  std::string grid_est = "st", grid_loss = "kl", grid_out;
  std::vector<double> grid_n, grid_eps{1.0};
  std::vector<std::size_t> grid_d;
  std::size_t grid_trials = 5;
  std::uint64_t grid_seed = 0;
  std::vector<double> grid_alpha_grid, grid_tau_grid;
  std::optional<double> grid_c;
  grid_cmd->add_option("--est", grid_est, "st|st_dp")
      ->check(CLI::IsMember({"st", "st_dp"}))->capture_default_str();
  grid_cmd->add_option("--n", grid_n, "Sample size (single value)")->delimiter(',')->required();
  grid_cmd->add_option("--d", grid_d, "Dimension (single value)")->delimiter(',');
  grid_cmd->add_option("--eps", grid_eps, "Privacy budget (single value)")->delimiter(',')
      ->capture_default_str();
  grid_cmd->add_option("--trials", grid_trials, "Trials per grid point")->capture_default_str();
  grid_cmd->add_option("--seed", grid_seed, "Master seed")->capture_default_str();
  grid_cmd->add_option("--loss", grid_loss, "kl|nll")
      ->check(CLI::IsMember({"kl", "nll"}))->capture_default_str();
  grid_cmd->add_option("--alpha-grid", grid_alpha_grid, "Split-ratio grid override")
      ->delimiter(',');
  grid_cmd->add_option("--tau-grid", grid_tau_grid, "Threshold-multiplier grid override")
      ->delimiter(',');
  grid_cmd->add_option("--c", grid_c, "Add-constant override");
  grid_cmd->add_option("--out", grid_out, "Grid CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (estimate_cmd->parsed()) {
      auto kind = parse_estimator(est_name);
      if (!kind) return arg_error("unknown estimator '" + est_name + "'");
      bool is_split = *kind == dpkl::EstimatorKind::kSamplingTwice ||
                      *kind == dpkl::EstimatorKind::kSamplingTwiceDp;
      if (is_split && (x_half.empty() || xprime_half.empty()))
        return arg_error("--x and --xprime are required for " + est_name);
      if (!is_split && counts.empty())
        return arg_error("--counts is required for " + est_name);
      if (dpkl::estimator_is_private(*kind) && !est_eps)
        return arg_error("--eps is required for " + est_name);

      dpkl::NoiseSource rng(est_seed, est_zero_noise ? dpkl::NoiseMode::kZeroNoise
                                                     : dpkl::NoiseMode::kRandom);
      dpkl::PrivacyParams priv{est_eps.value_or(1.0), 0.0};
      dpkl::ProbVector result;
      switch (*kind) {
        case dpkl::EstimatorKind::kAddConstant:
          result = dpkl::add_constant(to_histogram(counts), est_c);
          break;
        case dpkl::EstimatorKind::kAddConstantDp:
          result = dpkl::add_constant_dp(to_histogram(counts), priv, rng);
          break;
        case dpkl::EstimatorKind::kGoodTuring: {
          dpkl::EstimatorConfig cfg;
          cfg.gt_cutoff_exponent = est_gt_exp;
          result = dpkl::good_turing(to_histogram(counts), cfg);
          break;
        }
        case dpkl::EstimatorKind::kSamplingTwice:
        case dpkl::EstimatorKind::kSamplingTwiceDp: {
          if (x_half.size() != xprime_half.size())
            return arg_error("--x and --xprime must have equal length");
          double alpha = est_alpha.value_or(0.5);
          dpkl::SplitSample s{to_histogram(x_half), to_histogram(xprime_half), alpha,
                              dpkl::Histogram(x_half).total() + dpkl::Histogram(xprime_half).total()};
          double log_d = std::log(static_cast<double>(s.x.size()));
          if (*kind == dpkl::EstimatorKind::kSamplingTwice) {
            double tau = est_tau_mult ? *est_tau_mult * log_d : 0.0;
            result = dpkl::sampling_twice(s, tau);
          } else {
            double tau = est_tau_mult ? *est_tau_mult * log_d : 4.0 * log_d;
            result = dpkl::sampling_twice_dp(s, priv, tau, rng);
          }
          break;
        }
      }
      print_estimate(result, est_out);
      return 0;
    }

    if (bench_cmd->parsed()) {
      dpkl::SweepSpec spec;
      spec.dist = make_dist_spec(bench_dist);
      if (spec.dist.kind == dpkl::DistSpec::Kind::kFile && bench_dist.path.empty())
        return arg_error("--dist file requires --path");
      if (spec.dist.kind != dpkl::DistSpec::Kind::kFile && bench_d.empty())
        return arg_error("--d is required for synthetic distributions");
      spec.n_values = bench_n;
      spec.d_values = bench_d;
      spec.eps_values = bench_eps;
      for (const std::string& name : bench_estimators) {
        auto kind = parse_estimator(name);
        if (!kind) return arg_error("unknown estimator '" + name + "'");
        spec.estimators.push_back(*kind);
      }
      spec.trials = bench_trials;
      spec.seed = bench_seed;
      spec.loss = bench_loss == "kl" ? dpkl::LossKind::kKl : dpkl::LossKind::kNll;
      if (spec.loss == dpkl::LossKind::kKl && spec.dist.kind == dpkl::DistSpec::Kind::kFile)
        return arg_error("--loss kl needs a synthetic distribution; use --loss nll for files");
      if (spec.loss == dpkl::LossKind::kNll && spec.dist.kind != dpkl::DistSpec::Kind::kFile)
        return arg_error("--loss nll needs --dist file");
      spec.alpha_override = bench_alpha;
      spec.tau_mult_override = bench_tau_mult;
      spec.c_override = bench_c;
      dpkl::write_results_csv(dpkl::run_benchmark(spec), bench_out);
      return 0;
    }

    if (bounds_cmd->parsed()) {
      dpkl::DistSpec dist = make_dist_spec(bounds_dist);
      if (dist.kind != dpkl::DistSpec::Kind::kFile && bounds_d == 0)
        return arg_error("--d is required for synthetic distributions");
      dpkl::DataSource source = dist.make(bounds_d);
      dpkl::ProbVector p = source.kind == dpkl::DataSource::Kind::kSynthetic
                               ? source.p
                               : dpkl::normalize(source.counts.counts);
      std::optional<dpkl::PrivacyParams> priv;
      if (bounds_eps) priv = dpkl::PrivacyParams{*bounds_eps, 0.0};
      dpkl::BoundReport report = dpkl::compute_bound_report(p, bounds_n, priv, bounds_t);
      std::cout << "nondp_minimax=" << dpkl::format_double(report.nondp_minimax) << "\n";
      if (priv) std::cout << "dp_minimax=" << dpkl::format_double(report.dp_minimax) << "\n";
      std::cout << "nondp_instance_lower=" << dpkl::format_double(report.nondp_instance_lower)
                << "\n";
      if (priv)
        std::cout << "dp_instance_lower=" << dpkl::format_double(report.dp_instance_lower)
                  << "\n";
      std::cout << "t_used=" << dpkl::format_double(report.t_used) << "\n"
                << "small_set_size=" << report.small_set_size << "\n"
                << "small_set_mass=" << dpkl::format_double(report.small_set_mass) << "\n";
      return 0;
    }

    if (grid_cmd->parsed()) {
      dpkl::SweepSpec spec;
      spec.dist = make_dist_spec(grid_dist);
      if (spec.dist.kind == dpkl::DistSpec::Kind::kFile && grid_dist.path.empty())
        return arg_error("--dist file requires --path");
      if (spec.dist.kind != dpkl::DistSpec::Kind::kFile && grid_d.empty())
        return arg_error("--d is required for synthetic distributions");
      spec.n_values = grid_n;
      spec.d_values = grid_d;
      spec.eps_values = grid_eps;
      spec.estimators = {*parse_estimator(grid_est)};
      spec.trials = grid_trials;
      spec.seed = grid_seed;
      spec.loss = grid_loss == "kl" ? dpkl::LossKind::kKl : dpkl::LossKind::kNll;
      if (spec.loss == dpkl::LossKind::kKl && spec.dist.kind == dpkl::DistSpec::Kind::kFile)
        return arg_error("--loss kl needs a synthetic distribution; use --loss nll for files");
      if (spec.loss == dpkl::LossKind::kNll && spec.dist.kind != dpkl::DistSpec::Kind::kFile)
        return arg_error("--loss nll needs --dist file");
      spec.c_override = grid_c;
      const auto& alpha_grid =
          grid_alpha_grid.empty() ? dpkl::default_alpha_grid() : grid_alpha_grid;
      const auto& tau_grid =
          grid_tau_grid.empty() ? dpkl::default_tau_mult_grid() : grid_tau_grid;
      dpkl::write_gridsearch_csv(dpkl::run_gridsearch(spec, alpha_grid, tau_grid), grid_out);
      return 0;
    }
  } catch (const dpkl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
