#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ghzfisher/chart.hpp"
#include "ghzfisher/errors.hpp"
#include "ghzfisher/fisher_matrix.hpp"

namespace ghzfisher {

/// Coordinate name for theta_k in the general chart.
inline std::string theta_label(int k) { return "theta" + std::to_string(k); }

/// Chart whose first coordinate is the alternating (irrelevant) combination,
/// second the average phase, and the rest theta_i = (phi_{i-1} - phi_{i+1}) / d.
inline Reparametrization build_mc(int nodes) {
  detail::require(nodes >= 4, "M_c needs d >= 4, got " + std::to_string(nodes));
  detail::require(nodes % 2 == 0, "M_c needs even d, got " + std::to_string(nodes));
  const double inv_d = 1.0 / nodes;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nodes, nodes);
  for (int i = 0; i < nodes; ++i) {
    m(0, i) = ((i + 1) % 2 == 0 ? 1.0 : -1.0) * inv_d;
    m(1, i) = inv_d;
  }
  for (int row = 2; row < nodes; ++row) {
    m(row, row - 2) = inv_d;
    m(row, row) = -inv_d;
  }
  std::vector<std::string> labels;
  for (int k = 0; k < nodes; ++k) labels.push_back(theta_label(k));
  return {"mc", std::move(m), std::move(labels)};
}

/// Orthogonal d = 4 chart (phi0, phi_a, phi_b, phi_c); inverse is the transpose.
inline Reparametrization build_orthogonal_d4() {
  Eigen::MatrixXd m(4, 4);
  m << 1, -1, 1, -1,
       1, 1, 1, 1,
       1, 1, -1, -1,
       1, -1, -1, 1;
  m *= 0.5;
  Eigen::MatrixXd inverse = m.transpose();
  return {"d4-orthogonal", std::move(m), {"phi0", "phia", "phib", "phic"}, std::move(inverse)};
}

struct InverseDiscrepancy {
  Eigen::MatrixXd closed_form;
  Eigen::MatrixXd numerical;
  Eigen::VectorXd column_discrepancy;
  double max_discrepancy = 0.0;
};

/// Evaluates the published element formulas for the inverse of M_c literally
/// (1-based i, j; H(x) = 1 for x >= 0) and compares against the numerical inverse.
inline InverseDiscrepancy closed_form_inverse_check(int nodes) {
  const auto mc = build_mc(nodes);
  auto kron = [](double a, double b) { return a == b ? 1.0 : 0.0; };
  auto heaviside = [](int x) { return x >= 0 ? 1.0 : 0.0; };
  auto sign_pow = [](int k) { return k % 2 == 0 ? 1.0 : -1.0; };

  Eigen::MatrixXd cf(nodes, nodes);
  const double d = nodes;
  for (int i = 1; i <= nodes; ++i) {
    cf(i - 1, 0) = sign_pow(i);
    cf(i - 1, 1) = 1.0;
    for (int j = 3; j <= nodes; ++j) {
      const double shift = (j - 2 + kron(sign_pow(i), 1.0)) / d;
      cf(i - 1, j - 1) = d * kron(sign_pow(i), sign_pow(j)) *
                         (heaviside(j - i) * (1.0 - shift) - heaviside(i - j) * shift);
    }
  }
  InverseDiscrepancy report{cf, mc.inverse, {}, 0.0};
  report.column_discrepancy = (cf - mc.inverse).cwiseAbs().colwise().maxCoeff().transpose();
  report.max_discrepancy = report.column_discrepancy.maxCoeff();
  return report;
}

/// F_theta = J^T F_phi J with J = M^{-1}; optionally removes the irrelevant coordinate.
inline FisherMatrix pushforward_fisher(const FisherMatrix& f, const Reparametrization& reparam,
                                       bool drop_irrelevant = true) {
  detail::require(f.chart().is_original(), "pushforward expects a matrix in the original phase chart");
  detail::require_dim(f.dimension() == reparam.dimension(), "Fisher matrix and reparametrization disagree on d");
  PhaseChart chart = PhaseChart::transformed(reparam, drop_irrelevant);
  const Eigen::MatrixXd& j = chart.jacobian();
  Eigen::MatrixXd entries = j.transpose() * f.entries() * j;
  entries = 0.5 * (entries + entries.transpose()).eval();
  return {std::move(entries), f.kind(), std::move(chart), f.meta()};
}

/// Inverse of a full (undropped) pushforward: F_phi = M^T F_theta M.
inline FisherMatrix pullback_fisher(const FisherMatrix& f) {
  const auto& reparam = f.chart().reparametrization();
  detail::require(reparam.has_value() && !f.chart().drops_irrelevant(),
                  "pullback needs a matrix in a full transformed chart");
  Eigen::MatrixXd entries = reparam->forward.transpose() * f.entries() * reparam->forward;
  entries = 0.5 * (entries + entries.transpose()).eval();
  return {std::move(entries), f.kind(), PhaseChart::original(reparam->dimension()), f.meta()};
}

/// Chart by name: "original", "mc", "d4-orthogonal"; a "-full" suffix keeps the irrelevant coordinate.
inline PhaseChart chart_from_name(const std::string& name, int nodes) {
  if (name == "original") return PhaseChart::original(nodes);
  std::string base = name;
  bool drop = true;
  const std::string suffix = "-full";
  if (base.size() > suffix.size() && base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
    base.resize(base.size() - suffix.size());
    drop = false;
  }
  if (base == "mc") return PhaseChart::transformed(build_mc(nodes), drop);
  if (base == "d4-orthogonal") {
    detail::require(nodes == 4, "the d4-orthogonal chart needs d = 4");
    return PhaseChart::transformed(build_orthogonal_d4(), drop);
  }
  throw ValidationError("unknown chart '" + name + "' (expected original, mc or d4-orthogonal)");
}

} // namespace ghzfisher
