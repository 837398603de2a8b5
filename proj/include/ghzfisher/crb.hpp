#pragma once

// Cramer-Rao bounds for linear combinations alpha^T x of chart coordinates.
//
//   exact: Var(alpha^T x) >= alpha^T F^{-1} alpha / shots
//   weak:  Var(alpha^T x) >= (alpha^T alpha)^2 / (shots * alpha^T F alpha)
//
// The weak form never inverts F, so it also applies to singular matrices, and
// it never exceeds the exact form.

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ghzfisher/chart.hpp"
#include "ghzfisher/errors.hpp"
#include "ghzfisher/fisher_matrix.hpp"
#include "ghzfisher/measurement.hpp"
#include "ghzfisher/qfim.hpp"
#include "ghzfisher/reparam.hpp"

namespace ghzfisher {

/// Coefficients alpha of a linear combination; any nonzero scale is accepted.
using WeightVector = Eigen::VectorXd;

/// Smallest eigenvalue must exceed this fraction of the largest before inverting.
inline constexpr double invertibility_tol = 1e-9;

/// Inverse of a symmetric positive-definite matrix; refuses singular input.
inline Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& s) {
  detail::require_dim(s.rows() == s.cols() && s.rows() > 0, "expected a nonempty square matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
  const double largest = eig.eigenvalues().maxCoeff();
  const double smallest = eig.eigenvalues().minCoeff();
  if (!(largest > 0.0) || smallest <= invertibility_tol * largest) {
    char ratio[32];
    std::snprintf(ratio, sizeof ratio, "%.3g", largest > 0.0 ? smallest / largest : 0.0);
    throw SingularMatrixError(
        std::string("Fisher matrix is singular (smallest/largest eigenvalue ") + ratio +
        "); remove the irrelevant direction by reparametrizing before taking the exact bound");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) throw SingularMatrixError("Cholesky factorization failed");
  return llt.solve(Eigen::MatrixXd::Identity(s.rows(), s.cols()));
}

namespace detail {

inline void check_bound_inputs(const Eigen::MatrixXd& f, const WeightVector& alpha, std::int64_t shots) {
  require_dim(alpha.size() == f.rows(), "weight vector length must equal the Fisher matrix dimension");
  require(alpha.norm() > 0.0, "weight vector must be nonzero");
  require(shots >= 1, "shot count must be positive");
}

} // namespace detail

inline double exact_crb(const Eigen::MatrixXd& f, const WeightVector& alpha, std::int64_t shots = 1) {
  detail::check_bound_inputs(f, alpha, shots);
  const Eigen::MatrixXd inv = spd_inverse(f);
  return alpha.dot(inv * alpha) / static_cast<double>(shots);
}

inline double exact_crb(const FisherMatrix& f, const WeightVector& alpha, std::int64_t shots = 1) {
  return exact_crb(f.entries(), alpha, shots);
}

inline double weak_crb(const Eigen::MatrixXd& f, const WeightVector& alpha, std::int64_t shots = 1) {
  detail::check_bound_inputs(f, alpha, shots);
  const double info = alpha.dot(f * alpha);
  const double scale = std::max(1.0, f.cwiseAbs().maxCoeff()) * alpha.squaredNorm();
  if (info <= 1e-12 * scale)
    throw NullDirectionError("weight vector lies in the null space of the Fisher matrix (alpha^T F alpha = " +
                             std::to_string(info) + ")");
  const double a2 = alpha.squaredNorm();
  return a2 * a2 / (static_cast<double>(shots) * info);
}

inline double weak_crb(const FisherMatrix& f, const WeightVector& alpha, std::int64_t shots = 1) {
  return weak_crb(f.entries(), alpha, shots);
}

struct BoundReport {
  WeightVector weight;
  std::int64_t shots = 1;
  std::optional<double> exact_bound;
  std::optional<double> weak_bound;
  std::string exact_unavailable_reason;
  std::string weak_unavailable_reason;
  FisherKind kind = FisherKind::quantum;
  std::string chart;
  int photons = 0;
  int nodes = 0;

  std::optional<double> equality_gap() const {
    if (exact_bound && weak_bound) return *exact_bound - *weak_bound;
    return std::nullopt;
  }
};

/// Both bounds where they exist; failures are recorded rather than thrown.
inline BoundReport bound_report(const FisherMatrix& f, const WeightVector& alpha, std::int64_t shots = 1) {
  detail::check_bound_inputs(f.entries(), alpha, shots);
  BoundReport report;
  report.weight = alpha;
  report.shots = shots;
  report.kind = f.kind();
  report.chart = f.chart().name();
  report.photons = f.meta().photons;
  report.nodes = f.meta().nodes;
  try {
    report.exact_bound = exact_crb(f, alpha, shots);
  } catch (const SingularMatrixError& e) {
    report.exact_unavailable_reason = e.what();
  }
  try {
    report.weak_bound = weak_crb(f, alpha, shots);
  } catch (const NullDirectionError& e) {
    report.weak_unavailable_reason = e.what();
  }
  return report;
}

/// Expresses Var(alpha^T phi) in the reduced chart of `reparam` and returns the exact bound.
/// Throws NullDirectionError when alpha^T phi depends on the irrelevant coordinate.
inline double exact_crb_for_phase_weights(const FisherMatrix& f_phi, const Reparametrization& reparam,
                                          const WeightVector& alpha_phi, std::int64_t shots = 1) {
  detail::require(f_phi.chart().is_original(), "expected a Fisher matrix in the original chart");
  detail::check_bound_inputs(f_phi.entries(), alpha_phi, shots);
  const Eigen::VectorXd alpha_theta = reparam.inverse.transpose() * alpha_phi;
  if (std::abs(alpha_theta(0)) > 1e-12 * alpha_phi.norm())
    throw NullDirectionError("the combination depends on the irrelevant coordinate " + reparam.labels[0] +
                             " and has no finite Cramer-Rao bound");
  const auto reduced = pushforward_fisher(f_phi, reparam, true);
  Eigen::VectorXd kept(reduced.dimension());
  for (std::size_t k = 0; k < reparam.kept_indices.size(); ++k)
    kept(static_cast<Eigen::Index>(k)) = alpha_theta(reparam.kept_indices[k]);
  return exact_crb(reduced, kept, shots);
}

struct InequalityReport {
  double weak = 0.0;
  double exact = 0.0;
  double gap = 0.0;
  bool holds = false;
  bool eigenvector = false;
  double eigen_residual = 0.0;
  double inverse_of_s11 = 0.0;
  double s_inverse_11 = 0.0;
  bool diagonal_holds = false;
};

/// (alpha^T alpha)^2 / (alpha^T S alpha) <= alpha^T S^{-1} alpha for positive-definite S.
/// Equality iff S alpha is proportional to alpha.
inline InequalityReport weak_vs_exact_check(const Eigen::MatrixXd& s, const WeightVector& alpha) {
  detail::check_bound_inputs(s, alpha, 1);
  const Eigen::MatrixXd inv = spd_inverse(s);

  // beta = S^{1/2} alpha, gamma = S^{-1/2} alpha; Cauchy-Schwarz on (beta, gamma).
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  const Eigen::VectorXd root = eig.eigenvalues().cwiseSqrt();
  const Eigen::VectorXd coords = eig.eigenvectors().transpose() * alpha;
  const Eigen::VectorXd beta = eig.eigenvectors() * root.cwiseProduct(coords);
  const Eigen::VectorXd gamma = eig.eigenvectors() * root.cwiseInverse().cwiseProduct(coords);

  InequalityReport r;
  const double beta_gamma = beta.dot(gamma);
  r.weak = beta_gamma * beta_gamma / beta.squaredNorm();
  r.exact = gamma.squaredNorm();
  r.gap = r.exact - r.weak;
  r.holds = r.gap >= -1e-12 * std::max(1.0, r.exact);
  const double lambda = alpha.dot(s * alpha) / alpha.squaredNorm();
  r.eigen_residual = (s * alpha - lambda * alpha).norm() / alpha.norm();
  r.eigenvector = r.eigen_residual <= 1e-9;
  r.inverse_of_s11 = 1.0 / s(0, 0);
  r.s_inverse_11 = inv(0, 0);
  r.diagonal_holds = r.inverse_of_s11 <= r.s_inverse_11 * (1.0 + 1e-12);
  return r;
}

struct SweepRow {
  int photons = 0;
  int nodes = 0;
  double qcrb = 0.0;
  double ccrb = 0.0;
  double ratio = 0.0;
};

/// Standard-deviation bounds on the average phase in the reduced M_c chart.
inline std::vector<SweepRow> heisenberg_sweep(const std::vector<int>& photon_list, const std::vector<int>& node_list) {
  detail::require(!photon_list.empty() && !node_list.empty(), "sweep grid must be nonempty");
  for (int n : photon_list) validate_photon_count(n);
  for (int d : node_list) {
    detail::require(d >= 4 && d % 2 == 0, "sweep needs even d >= 4, got " + std::to_string(d));
  }
  std::vector<SweepRow> rows;
  for (int n : photon_list) {
    for (int d : node_list) {
      const auto mc = build_mc(d);
      const PhaseVector zero = PhaseVector::Zero(d);
      const auto original = PhaseChart::original(d);
      const auto fq = pushforward_fisher(qfim_pure(n, d, zero, original), mc);
      const auto fc = pushforward_fisher(cfim(n, d, zero, original), mc);
      WeightVector avg = WeightVector::Zero(d - 1);
      avg(fq.chart().index_of(theta_label(1))) = 1.0;
      SweepRow row{n, d, std::sqrt(exact_crb(fq, avg)), std::sqrt(exact_crb(fc, avg)), 0.0};
      row.ratio = row.ccrb / row.qcrb;
      rows.push_back(row);
    }
  }
  return rows;
}

} // namespace ghzfisher
