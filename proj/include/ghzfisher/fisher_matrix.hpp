#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ghzfisher/chart.hpp"
#include "ghzfisher/errors.hpp"
#include "ghzfisher/ghz_state.hpp"

namespace ghzfisher {

enum class FisherKind { quantum, classical };

inline const char* to_string(FisherKind kind) {
  return kind == FisherKind::quantum ? "quantum" : "classical";
}

struct FisherMeta {
  int photons = 0;
  int nodes = 0;
  PhaseVector phases;
};

/// Real symmetric positive-semidefinite information matrix in a given chart.
class FisherMatrix {
public:
  static constexpr double symmetry_tol = 1e-10;
  static constexpr double psd_tol = 1e-9;

  FisherMatrix(Eigen::MatrixXd entries, FisherKind kind, PhaseChart chart, FisherMeta meta)
      : entries_(std::move(entries)), kind_(kind), chart_(std::move(chart)), meta_(std::move(meta)) {
    detail::require_dim(entries_.rows() == entries_.cols(), "Fisher matrix must be square");
    detail::require_dim(entries_.rows() == chart_.dimension(),
                        "Fisher matrix dimension must equal the chart's parameter count");
    if (entries_.size() == 0) return;
    const double asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
    detail::require(asym <= symmetry_tol, "Fisher matrix is not symmetric");
    const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(entries_, Eigen::EigenvaluesOnly)
                               .eigenvalues()
                               .minCoeff();
    detail::require(min_eig >= -psd_tol, "Fisher matrix is not positive semidefinite");
  }

  const Eigen::MatrixXd& entries() const { return entries_; }
  double operator()(Eigen::Index r, Eigen::Index c) const { return entries_(r, c); }
  double at(const std::string& row, const std::string& col) const {
    return entries_(chart_.index_of(row), chart_.index_of(col));
  }
  Eigen::Index dimension() const { return entries_.rows(); }
  FisherKind kind() const { return kind_; }
  const PhaseChart& chart() const { return chart_; }
  const FisherMeta& meta() const { return meta_; }

private:
  Eigen::MatrixXd entries_;
  FisherKind kind_;
  PhaseChart chart_;
  FisherMeta meta_;
};

struct RankReport {
  int rank = 0;
  std::vector<Eigen::VectorXd> null_basis;
  double tolerance = 0.0;
  Eigen::VectorXd singular_values;

  int dimension() const { return rank + static_cast<int>(null_basis.size()); }
  bool singular() const { return !null_basis.empty(); }
};

/// Numerical rank: singular values above `relative_tol` times the largest count.
inline RankReport rank_and_nullspace(const Eigen::MatrixXd& m, double relative_tol = 1e-9) {
  detail::require_dim(m.rows() == m.cols(), "rank test expects a square matrix");
  RankReport report;
  report.tolerance = relative_tol;
  const auto n = m.rows();
  if (n == 0) return report;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  report.singular_values = svd.singularValues();
  const double largest = report.singular_values(0);
  int rank = 0;
  if (largest > 0.0)
    for (Eigen::Index k = 0; k < n; ++k)
      if (report.singular_values(k) > relative_tol * largest) ++rank;
  report.rank = rank;
  for (Eigen::Index k = rank; k < n; ++k) report.null_basis.push_back(svd.matrixV().col(k));
  return report;
}

inline RankReport rank_and_nullspace(const FisherMatrix& f, double relative_tol = 1e-9) {
  return rank_and_nullspace(f.entries(), relative_tol);
}

/// Alternating vector (1, -1, 1, -1, ...) of length d.
inline Eigen::VectorXd alternating_vector(int nodes) {
  Eigen::VectorXd v(nodes);
  for (int j = 0; j < nodes; ++j) v(j) = (j % 2 == 0) ? 1.0 : -1.0;
  return v;
}

} // namespace ghzfisher
