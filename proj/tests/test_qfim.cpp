#include <random>

#include <gtest/gtest.h>

#include "ghzfisher/ghzfisher.hpp"
#include "oracles.hpp"

using namespace ghzfisher;

namespace {

Eigen::MatrixXd eq9_matrix() {
  Eigen::MatrixXd f(4, 4);
  f << 0.75, 0.25, -0.25, 0.25,
       0.25, 0.75, 0.25, -0.25,
       -0.25, 0.25, 0.75, 0.25,
       0.25, -0.25, 0.25, 0.75;
  return f;
}

} // namespace

TEST(Qfim, TwoPhotonsFourNodes) {
  const auto f = qfim_pure(2, 4, PhaseVector::Zero(4), PhaseChart::original(4));
  EXPECT_EQ(f.kind(), FisherKind::quantum);
  EXPECT_LE((f.entries() - eq9_matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Qfim, FourPhotonsSixNodes) {
  std::mt19937_64 rng(1);
  const auto f = qfim_pure(4, 6, oracle::random_vector(rng, 6, -2.0, 2.0), PhaseChart::original(6));
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) {
      const int gap = std::min((r - c + 6) % 6, (c - r + 6) % 6);
      const double expected = gap == 0 ? 20.0 / 9.0 : gap == 1 ? 8.0 / 9.0 : -4.0 / 9.0;
      EXPECT_NEAR(f(r, c), expected, 1e-12);
    }
  }
}

TEST(Qfim, OrthogonalChartIsIdentity) {
  const auto chart = PhaseChart::transformed(build_orthogonal_d4());
  const auto f = qfim_pure(2, 4, PhaseVector::Zero(4), chart);
  EXPECT_EQ(chart.labels(), (std::vector<std::string>{"phia", "phib", "phic"}));
  EXPECT_LE((f.entries() - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Qfim, OrthogonalChartIsPhaseIndependent) {
  // The published trigonometric element formulas for this chart do not survive a
  // numerical check away from phi_b = phi_c = 0; the computed matrix stays I_3.
  std::mt19937_64 rng(2);
  const auto chart = PhaseChart::transformed(build_orthogonal_d4());
  for (int trial = 0; trial < 5; ++trial) {
    const PhaseVector phi = oracle::random_vector(rng, 4, -1.0, 1.0);
    const auto f = qfim_pure(2, 4, phi, chart);
    const auto fd = oracle::qfim_finite_difference(2, 4, phi, chart.jacobian(), 1e-6);
    EXPECT_LE((f.entries() - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((f.entries() - fd).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Qfim, ClosedFormEntries) {
  EXPECT_LE((qfim_closed_form_original(2, 4).entries() - eq9_matrix()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_DOUBLE_EQ(qfim_closed_form_original(6, 8)(3, 3), 63.0 / 16.0);
  EXPECT_THROW(qfim_closed_form_original(3, 8), ValidationError);
  EXPECT_THROW(qfim_closed_form_original(2, 2), ValidationError);
}

TEST(Qfim, ClosedFormMatchesAnalytic) {
  std::mt19937_64 rng(9);
  for (int n : {2, 4, 6}) {
    for (int d : {3, 4, 5, 6, 8, 10}) {
      const auto cf = qfim_closed_form_original(n, d);
      for (const PhaseVector& phi : {PhaseVector(PhaseVector::Zero(d)), PhaseVector(oracle::random_vector(rng, d, -3, 3))}) {
        const auto f = qfim_pure(n, d, phi, PhaseChart::original(d));
        EXPECT_LE((f.entries() - cf.entries()).cwiseAbs().maxCoeff(), 1e-10) << "N=" << n << " d=" << d;
      }
    }
  }
}

TEST(Qfim, RankAndNullspace) {
  const auto report = rank_and_nullspace(qfim_closed_form_original(2, 4));
  EXPECT_EQ(report.rank, 3);
  ASSERT_EQ(report.null_basis.size(), 1u);
  const Eigen::VectorXd expected = alternating_vector(4) / 2.0;
  const double align = std::abs(report.null_basis[0].dot(expected));
  EXPECT_NEAR(align, 1.0, 1e-12);

  const auto identity = rank_and_nullspace(Eigen::MatrixXd::Identity(3, 3));
  EXPECT_EQ(identity.rank, 3);
  EXPECT_TRUE(identity.null_basis.empty());

  const auto six = rank_and_nullspace(qfim_closed_form_original(4, 6));
  EXPECT_EQ(six.rank, 5);
  ASSERT_EQ(six.null_basis.size(), 1u);
  EXPECT_NEAR(std::abs(six.null_basis[0].dot(alternating_vector(6).normalized())), 1.0, 1e-12);

  const auto zero = rank_and_nullspace(Eigen::MatrixXd::Zero(3, 3));
  EXPECT_EQ(zero.rank, 0);
  EXPECT_EQ(zero.dimension(), 3);
}

TEST(Qfim, OddNodeCountIsNonsingular) {
  for (int d : {3, 5, 7}) EXPECT_EQ(rank_and_nullspace(qfim_closed_form_original(2, d)).rank, d);
}

TEST(Qfim, SingularityForEvenD) {
  for (int n : {2, 4, 6}) {
    for (int d : {4, 6, 8, 10}) {
      const auto f = qfim_pure(n, d, PhaseVector::Zero(d), PhaseChart::original(d));
      EXPECT_LE((f.entries() * alternating_vector(d)).norm(), 1e-10);
      const auto report = rank_and_nullspace(f);
      EXPECT_LT(report.singular_values.minCoeff(), 1e-10 * report.singular_values.maxCoeff());
      EXPECT_EQ(report.rank, d - 1);
    }
  }
}

TEST(Qfim, FiniteDifferenceOracleAgreement) {
  std::mt19937_64 rng(21);
  const auto original = PhaseChart::original(4);
  EXPECT_LE((qfim_pure(2, 4, PhaseVector::Zero(4), original).entries() -
             oracle::qfim_finite_difference(2, 4, PhaseVector::Zero(4), original.jacobian(), 1e-6))
                .cwiseAbs()
                .maxCoeff(),
            1e-6);
  const PhaseVector phi = oracle::random_vector(rng, 4, -0.3, 0.3);
  EXPECT_LE((qfim_pure(2, 4, phi, original).entries() -
             oracle::qfim_finite_difference(2, 4, phi, original.jacobian(), 1e-6))
                .cwiseAbs()
                .maxCoeff(),
            1e-6);
  EXPECT_LE((qfim_closed_form_original(4, 8).entries() -
             oracle::qfim_finite_difference(4, 8, PhaseVector::Zero(8), Eigen::MatrixXd::Identity(8, 8), 1e-6))
                .cwiseAbs()
                .maxCoeff(),
            1e-6);
}

TEST(Qfim, ChartCovariance) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 4 + 2 * (trial % 3);
    const PhaseVector phi = oracle::random_vector(rng, d, -1, 1);
    const auto mc = build_mc(d);
    const auto direct = qfim_pure(2, d, phi, PhaseChart::transformed(mc, false));
    const auto pushed = pushforward_fisher(qfim_pure(2, d, phi, PhaseChart::original(d)), mc, false);
    EXPECT_LE((direct.entries() - pushed.entries()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Qfim, PsdAndSymmetric) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 3 + trial % 7;
    const auto f = qfim_pure(2 * (1 + trial % 4), d, oracle::random_vector(rng, d, -5, 5), PhaseChart::original(d));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(f.entries());
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-9);
    EXPECT_LE((f.entries() - f.entries().transpose()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Qfim, FisherMatrixRejectsBadInput) {
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(3, 3);
  asym(0, 1) = 1.0;
  EXPECT_THROW(FisherMatrix(asym, FisherKind::quantum, PhaseChart::original(3), {}), ValidationError);
  EXPECT_THROW(FisherMatrix(-Eigen::MatrixXd::Identity(3, 3), FisherKind::quantum, PhaseChart::original(3), {}),
               ValidationError);
  EXPECT_THROW(FisherMatrix(Eigen::MatrixXd::Identity(2, 2), FisherKind::quantum, PhaseChart::original(3), {}),
               DimensionError);
  EXPECT_THROW(qfim_pure(2, 4, PhaseVector::Zero(5), PhaseChart::original(4)), DimensionError);
}
