#pragma once

// Quantum Fisher information of the pure output state
//   F_mn = 4 Re( <d_m psi|d_n psi> - <d_m psi|psi><psi|d_n psi> )
// with derivatives taken along the chart's coordinate directions.

#include <vector>

#include <Eigen/Dense>

#include "ghzfisher/chart.hpp"
#include "ghzfisher/fisher_matrix.hpp"
#include "ghzfisher/ghz_state.hpp"

namespace ghzfisher {

/// QFIM from a normalized state and its derivatives along each chart coordinate.
inline Eigen::MatrixXd pure_state_qfim(const SparseKetState& psi, const std::vector<SparseKetState>& derivatives) {
  detail::require(psi.is_normalized(1e-12), "QFIM requires a normalized state");
  const auto k = static_cast<Eigen::Index>(derivatives.size());
  std::vector<Complex> overlap(derivatives.size());
  for (Eigen::Index m = 0; m < k; ++m) overlap[m] = inner_product(derivatives[m], psi);
  Eigen::MatrixXd f(k, k);
  for (Eigen::Index m = 0; m < k; ++m) {
    for (Eigen::Index n = m; n < k; ++n) {
      const Complex g = inner_product(derivatives[m], derivatives[n]) - overlap[m] * std::conj(overlap[n]);
      f(m, n) = f(n, m) = 4.0 * g.real();
    }
  }
  return f;
}

inline FisherMatrix qfim_pure(int photons, int nodes, const PhaseVector& phases, const PhaseChart& chart) {
  validate_photon_count(photons);
  validate_node_count(nodes);
  validate_phases(phases, nodes);
  detail::require_dim(chart.nodes() == nodes, "chart node count must equal d");

  const auto psi = output_state(photons, nodes, phases);
  std::vector<SparseKetState> derivatives;
  for (Eigen::Index c = 0; c < chart.jacobian().cols(); ++c)
    derivatives.push_back(directional_state_derivative(photons, nodes, phases, chart.jacobian().col(c)));
  return {pure_state_qfim(psi, derivatives), FisherKind::quantum, chart, {photons, nodes, phases}};
}

/// Element formulas for the QFIM in the original phases. Phase independent.
inline FisherMatrix qfim_closed_form_original(int photons, int nodes) {
  validate_photon_count(photons);
  validate_node_count(nodes);
  const double scale = static_cast<double>(photons) * photons / (static_cast<double>(nodes) * nodes);
  Eigen::MatrixXd f = Eigen::MatrixXd::Constant(nodes, nodes, -scale);
  for (int j = 0; j < nodes; ++j) {
    f(j, j) = scale * (nodes - 1);
    const int next = (j + 1) % nodes;
    f(j, next) = f(next, j) = scale * (nodes / 2.0 - 1.0);
  }
  return {f, FisherKind::quantum, PhaseChart::original(nodes), {photons, nodes, PhaseVector::Zero(nodes)}};
}

} // namespace ghzfisher
