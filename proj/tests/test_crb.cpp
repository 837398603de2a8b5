#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ghzfisher/ghzfisher.hpp"
#include "oracles.hpp"

using namespace ghzfisher;

TEST(Crb, ExactOnIdentityChart) {
  const auto f = qfim_pure(2, 4, PhaseVector::Zero(4), PhaseChart::transformed(build_orthogonal_d4()));
  const Eigen::Vector3d alpha(0.5, 0.0, 0.0);
  EXPECT_NEAR(std::sqrt(exact_crb(f, alpha, 1)), 0.5, 1e-12);
}

TEST(Crb, HeisenbergAverage) {
  for (int d : {4, 6, 8, 10}) {
    for (int n : {2, 4, 6, 8}) {
      const auto f = pushforward_fisher(qfim_closed_form_original(n, d), build_mc(d));
      WeightVector e1 = WeightVector::Zero(d - 1);
      e1(0) = 1.0;
      EXPECT_NEAR(std::sqrt(exact_crb(f, e1)), 1.0 / n, 1e-10);
    }
  }
}

TEST(Crb, SingularMatrixRefused) {
  const auto f0 = qfim_closed_form_original(2, 4);
  try {
    exact_crb(f0, WeightVector::Constant(4, 0.25));
    FAIL() << "expected SingularMatrixError";
  } catch (const SingularMatrixError& e) {
    EXPECT_NE(std::string(e.what()).find("reparametriz"), std::string::npos);
  }
}

TEST(Crb, WeakBoundClassicalAverage) {
  const auto f0 = cfim(2, 4, PhaseVector::Zero(4), PhaseChart::original(4));
  const auto alpha = WeightVector::Constant(4, 0.25);
  EXPECT_NEAR(alpha.dot(f0.entries() * alpha), 0.25, 1e-15);
  EXPECT_NEAR(weak_crb(f0, alpha, 1), 0.25, 1e-15);
  EXPECT_NEAR(std::sqrt(weak_crb(f0, alpha, 1)), 0.5, 1e-15);
  EXPECT_NEAR(exact_crb_for_phase_weights(f0, build_mc(4), alpha, 1), 0.25, 1e-12);
  EXPECT_NEAR(exact_crb_for_phase_weights(f0, build_orthogonal_d4(), alpha, 1), 0.25, 1e-12);
}

TEST(Crb, WeakBoundIdentity) {
  std::mt19937_64 rng(2);
  for (int dim = 1; dim <= 6; ++dim) {
    const Eigen::VectorXd alpha = oracle::random_vector(rng, dim).normalized();
    EXPECT_NEAR(weak_crb(Eigen::MatrixXd::Identity(dim, dim), alpha, 7), 1.0 / 7.0, 1e-15);
  }
}

TEST(Crb, WeakBoundNullDirection) {
  const auto f0 = cfim(2, 4, PhaseVector::Zero(4), PhaseChart::original(4));
  EXPECT_THROW(weak_crb(f0, alternating_vector(4) / 4.0, 1), NullDirectionError);
  EXPECT_THROW(exact_crb_for_phase_weights(f0, build_mc(4), alternating_vector(4) / 4.0), NullDirectionError);
}

TEST(Crb, InputValidation) {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_THROW(exact_crb(id, Eigen::VectorXd::Zero(3)), ValidationError);
  EXPECT_THROW(exact_crb(id, Eigen::VectorXd::Ones(2)), DimensionError);
  EXPECT_THROW(weak_crb(id, Eigen::VectorXd::Ones(3), 0), ValidationError);
}

TEST(Crb, BoundReportRecordsUnavailability) {
  const auto f0 = cfim(2, 4, PhaseVector::Zero(4), PhaseChart::original(4));
  const auto report = bound_report(f0, WeightVector::Constant(4, 0.25), 10);
  EXPECT_FALSE(report.exact_bound.has_value());
  ASSERT_TRUE(report.weak_bound.has_value());
  EXPECT_NEAR(*report.weak_bound, 0.025, 1e-15);
  EXPECT_FALSE(report.exact_unavailable_reason.empty());
  EXPECT_EQ(report.chart, "original");
  EXPECT_FALSE(report.equality_gap().has_value());

  const auto reduced = pushforward_fisher(f0, build_mc(4));
  const auto ok = bound_report(reduced, Eigen::Vector3d(1, 0, 0), 1);
  ASSERT_TRUE(ok.equality_gap().has_value());
  EXPECT_NEAR(*ok.equality_gap(), 0.0, 1e-15);
  EXPECT_GE(*ok.equality_gap(), -1e-12);
}

TEST(Crb, ShotScaling) {
  const auto f = pushforward_fisher(qfim_closed_form_original(4, 6), build_mc(6));
  const Eigen::VectorXd alpha = Eigen::VectorXd::LinSpaced(5, 1.0, 2.0);
  const double one = exact_crb(f, alpha, 1);
  const double weak_one = weak_crb(f, alpha, 1);
  for (std::int64_t shots : {1, 10, 100}) {
    EXPECT_NEAR(exact_crb(f, alpha, shots) * static_cast<double>(shots), one, 1e-14 * one);
    EXPECT_NEAR(weak_crb(f, alpha, shots) * static_cast<double>(shots), weak_one, 1e-14 * weak_one);
  }
}

TEST(Crb, WeakVsExactEigenvectorCase) {
  const Eigen::Matrix3d s = Eigen::Vector3d(1, 0.5, 0.5).asDiagonal();
  const auto r = weak_vs_exact_check(s, Eigen::Vector3d(1, 0, 0));
  EXPECT_NEAR(r.weak, 1.0, 1e-15);
  EXPECT_NEAR(r.exact, 1.0, 1e-15);
  EXPECT_TRUE(r.eigenvector);
  EXPECT_TRUE(r.holds);
}

TEST(Crb, WeakVsExactRandomized) {
  std::mt19937_64 rng(20240917);
  for (int trial = 0; trial < 1000; ++trial) {
    const int dim = 2 + trial % 7;
    const Eigen::MatrixXd s = oracle::random_spd(rng, dim);
    const Eigen::VectorXd alpha = oracle::random_vector(rng, dim);
    const auto r = weak_vs_exact_check(s, alpha);
    EXPECT_GE(r.gap, -1e-12);
    EXPECT_TRUE(r.holds);
    EXPECT_TRUE(r.diagonal_holds);
    // independent route: direct quadratic forms
    const double weak = std::pow(alpha.squaredNorm(), 2) / alpha.dot(s * alpha);
    const double exact = alpha.dot(s.ldlt().solve(alpha));
    EXPECT_NEAR(r.weak, weak, 1e-9 * weak);
    EXPECT_NEAR(r.exact, exact, 1e-9 * exact);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
    const Eigen::VectorXd v = eig.eigenvectors().col(trial % dim);
    const auto eq = weak_vs_exact_check(s, v);
    EXPECT_TRUE(eq.eigenvector);
    EXPECT_LE(std::abs(eq.gap), 1e-10);
  }
}

TEST(Crb, WeakVsExactRejectsNonPd) {
  Eigen::Matrix2d s;
  s << 1, 2, 2, 1;
  EXPECT_THROW(weak_vs_exact_check(s, Eigen::Vector2d(1, 0)), SingularMatrixError);
}

TEST(Crb, HeisenbergSweep) {
  const auto rows = heisenberg_sweep({2, 4, 6}, {4, 6, 8});
  ASSERT_EQ(rows.size(), 9u);
  for (const auto& row : rows) {
    EXPECT_NEAR(row.qcrb, 1.0 / row.photons, 1e-10);
    EXPECT_NEAR(row.ccrb, 1.0 / row.photons, 1e-10);
    EXPECT_NEAR(row.ratio, 1.0, 1e-10);
  }
  EXPECT_EQ(rows.front().photons, 2);
  EXPECT_EQ(rows.front().nodes, 4);
  EXPECT_NEAR(rows.front().qcrb, 0.5, 1e-12);
  EXPECT_THROW(heisenberg_sweep({3}, {4}), ValidationError);
  EXPECT_THROW(heisenberg_sweep({2}, {5}), ValidationError);
}

TEST(Crb, ExactVarianceScalesAsInverseNSquared) {
  for (int d : {4, 6, 8}) {
    const auto f2 = pushforward_fisher(qfim_closed_form_original(2, d), build_mc(d));
    WeightVector e1 = WeightVector::Zero(d - 1);
    e1(0) = 1.0;
    const double base = exact_crb(f2, e1);
    for (int n : {4, 6, 8}) {
      const auto fn = pushforward_fisher(qfim_closed_form_original(n, d), build_mc(d));
      EXPECT_NEAR(exact_crb(fn, e1) / base, 4.0 / (n * n), 1e-12);
    }
  }
}
