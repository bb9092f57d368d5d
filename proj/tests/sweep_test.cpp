#include "dpkl/sweep.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace dpkl {
namespace {

TEST(ResolveConfig, PerContextDefaults) {
  double log_d = std::log(100.0);

  EstimatorConfig st = resolve_config(EstimatorKind::kSamplingTwice, 100, 1.0, {}, {}, {});
  EXPECT_DOUBLE_EQ(st.alpha, 0.5);
  EXPECT_DOUBLE_EQ(st.tau, 0.0);
  EXPECT_DOUBLE_EQ(st.add_constant, 1.0);

  EstimatorConfig dp = resolve_config(EstimatorKind::kSamplingTwiceDp, 100, 0.5, {}, {}, {});
  EXPECT_DOUBLE_EQ(dp.alpha, 0.9);
  EXPECT_DOUBLE_EQ(dp.tau, log_d);  // min{1/eps, 1} = 1 at eps = 0.5

  EstimatorConfig dp_loose = resolve_config(EstimatorKind::kSamplingTwiceDp, 100, 4.0, {}, {}, {});
  EXPECT_DOUBLE_EQ(dp_loose.tau, 0.25 * log_d);

  EstimatorConfig overridden =
      resolve_config(EstimatorKind::kSamplingTwiceDp, 100, 1.0, 0.75, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(overridden.alpha, 0.75);
  EXPECT_DOUBLE_EQ(overridden.tau, 2.0 * log_d);
  EXPECT_DOUBLE_EQ(overridden.add_constant, 0.5);
}

TEST(RunBenchmark, RowOrderAndDeterminism) {
  SweepSpec spec;
  spec.dist.kind = DistSpec::Kind::kPowerLaw;
  spec.dist.beta = 2.0;
  spec.n_values = {1000.0};
  spec.d_values = {10000};
  spec.eps_values = {1.0};
  spec.estimators = {EstimatorKind::kAddConstant, EstimatorKind::kAddConstantDp,
                     EstimatorKind::kGoodTuring, EstimatorKind::kSamplingTwice,
                     EstimatorKind::kSamplingTwiceDp};
  spec.trials = 5;
  spec.seed = 42;

  std::vector<ResultRow> rows = run_benchmark(spec);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0].estimator, "addconst");
  EXPECT_EQ(rows[4].estimator, "st_dp");
  for (const ResultRow& r : rows) {
    EXPECT_EQ(r.n, 1000.0);
    EXPECT_EQ(r.d, 10000u);
    EXPECT_EQ(r.trials, 5u);
    EXPECT_TRUE(std::isfinite(r.mean)) << r.estimator;
  }

  std::vector<ResultRow> again = run_benchmark(spec);
  EXPECT_EQ(results_csv_string(rows), results_csv_string(again));
}

// KL error shrinks with the sample size for every estimator (within trial
// noise) on a heavy-tailed instance.
TEST(RunBenchmark, ErrorDecreasesWithN) {
  SweepSpec spec;
  spec.dist.kind = DistSpec::Kind::kPowerLaw;
  spec.dist.beta = 1.0;
  spec.n_values = {500.0, 5000.0, 50000.0, 100000.0};
  spec.d_values = {50000};
  spec.eps_values = {1.0};
  spec.estimators = {EstimatorKind::kAddConstant, EstimatorKind::kAddConstantDp,
                     EstimatorKind::kGoodTuring, EstimatorKind::kSamplingTwice,
                     EstimatorKind::kSamplingTwiceDp};
  spec.trials = 5;
  spec.seed = 7;

  std::vector<ResultRow> rows = run_benchmark(spec);
  ASSERT_EQ(rows.size(), spec.n_values.size() * spec.estimators.size());
  for (std::size_t e = 0; e < spec.estimators.size(); ++e) {
    for (std::size_t j = 1; j < spec.n_values.size(); ++j) {
      const ResultRow& prev = rows[(j - 1) * spec.estimators.size() + e];
      const ResultRow& cur = rows[j * spec.estimators.size() + e];
      double band = 3.0 * (prev.std_dev + cur.std_dev) / std::sqrt(double(spec.trials));
      EXPECT_LT(cur.mean, prev.mean + band)
          << cur.estimator << " n=" << cur.n << " vs n=" << prev.n;
    }
  }
}

TEST(RunGridsearch, DefaultGridsAndConsistency) {
  SweepSpec spec;
  spec.dist.kind = DistSpec::Kind::kPowerLaw;
  spec.dist.beta = 2.0;
  spec.n_values = {200.0};
  spec.d_values = {50};
  spec.eps_values = {1.0};
  spec.estimators = {EstimatorKind::kSamplingTwice};
  spec.trials = 2;
  spec.seed = 5;

  std::vector<GridRow> rows =
      run_gridsearch(spec, default_alpha_grid(), default_tau_mult_grid());
  EXPECT_EQ(rows.size(), 56u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i - 1].mean, rows[i].mean);

  // A one-point grid reproduces the benchmark cell with the same overrides.
  std::vector<GridRow> single = run_gridsearch(spec, {0.5}, {0.0});
  ASSERT_EQ(single.size(), 1u);
  SweepSpec bench = spec;
  bench.alpha_override = 0.5;
  bench.tau_mult_override = 0.0;
  std::vector<ResultRow> bench_rows = run_benchmark(bench);
  ASSERT_EQ(bench_rows.size(), 1u);
  EXPECT_DOUBLE_EQ(single[0].mean, bench_rows[0].mean);
  EXPECT_DOUBLE_EQ(single[0].std_dev, bench_rows[0].std_dev);
}

TEST(RunGridsearch, RejectsBadSpecs) {
  SweepSpec spec;
  spec.dist.kind = DistSpec::Kind::kUniform;
  spec.n_values = {100.0};
  spec.d_values = {10};
  spec.eps_values = {1.0};
  spec.estimators = {EstimatorKind::kAddConstant};
  EXPECT_THROW(run_gridsearch(spec, {0.5}, {0.0}), Error);

  spec.estimators = {EstimatorKind::kSamplingTwice};
  spec.n_values = {100.0, 200.0};
  EXPECT_THROW(run_gridsearch(spec, {0.5}, {0.0}), Error);
}

TEST(BoundReportAssembly, Conventions) {
  ProbVector p = concentrated(10, {1.0 / 3.0, 2.0 / 3.0});
  BoundReport nondp = compute_bound_report(p, 10.0, {}, 1.0);
  EXPECT_NEAR(nondp.nondp_instance_lower, 0.4197, 1e-4);
  EXPECT_EQ(nondp.small_set_size, 8u);
  EXPECT_DOUBLE_EQ(nondp.dp_minimax, 0.0);

  BoundReport dp = compute_bound_report(uniform(100), 100.0, PrivacyParams{1.0, 0.0}, 1.0);
  EXPECT_NEAR(dp.dp_minimax, std::log(2.0), 1e-12);
  EXPECT_NEAR(dp.nondp_minimax, std::log(2.0), 1e-12);
}

}  // namespace
}  // namespace dpkl
