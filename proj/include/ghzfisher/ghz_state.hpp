#pragma once

// Distributed N-photon polarization GHZ states over a ring of d nodes.
//
// Pair j (1-based) joins node j with node j+1, where node d+1 wraps to node 1.
// Each pair contributes an |H...H> and a |V...V> ket with N/2 photons per node,
// giving 2d mutually orthogonal basis kets. Only the V-ket of a pair picks up
// the phase (N/2)(phi_j + phi_{j+1}).

#include <cmath>
#include <complex>
#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "ghzfisher/errors.hpp"

namespace ghzfisher {

using Complex = std::complex<double>;

/// Real phases phi_1..phi_d in radians, stored 0-based. No wrapping is applied.
using PhaseVector = Eigen::VectorXd;

enum class Polarization { H, V };

inline const char* to_string(Polarization p) { return p == Polarization::H ? "H" : "V"; }

/// Basis ket of one node pair. `pair` is 1-based.
struct KetLabel {
  int pair = 1;
  Polarization polarization = Polarization::H;

  int first_node() const { return pair; }
  int second_node(int node_count) const { return pair % node_count + 1; }

  auto operator<=>(const KetLabel&) const = default;
};

inline void validate_photon_count(int photons) {
  detail::require(photons >= 2, "photon count N must be >= 2, got " + std::to_string(photons));
  detail::require(photons % 2 == 0, "photon count N must be even, got " + std::to_string(photons));
}

inline void validate_node_count(int nodes) {
  detail::require(nodes >= 3, "node count d must be >= 3, got " + std::to_string(nodes));
}

inline void validate_phases(const PhaseVector& phases, int nodes) {
  detail::require_dim(phases.size() == nodes,
                      "phase vector has " + std::to_string(phases.size()) + " entries, expected d = " +
                          std::to_string(nodes));
}

/// phi_j + phi_{j+1} for 1-based pair j.
inline double pair_sum(const PhaseVector& phases, int pair) {
  const auto d = static_cast<int>(phases.size());
  return phases(pair - 1) + phases(pair % d);
}

/// d x d incidence matrix B with (B * phi)_j = phi_j + phi_{j+1}.
inline Eigen::MatrixXd pair_incidence(int nodes) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(nodes, nodes);
  for (int j = 0; j < nodes; ++j) {
    b(j, j) += 1.0;
    b(j, (j + 1) % nodes) += 1.0;
  }
  return b;
}

/// Superposition over KetLabel basis kets. Derivative states are not normalized.
class SparseKetState {
public:
  using Terms = std::map<KetLabel, Complex>;

  SparseKetState(int photons, int nodes, Terms terms = {})
      : photons_(photons), nodes_(nodes), terms_(std::move(terms)) {
    validate_photon_count(photons_);
    validate_node_count(nodes_);
    for (const auto& [label, amp] : terms_) {
      (void)amp;
      detail::require(label.pair >= 1 && label.pair <= nodes_,
                      "ket pair index " + std::to_string(label.pair) + " outside 1..d");
    }
  }

  int photons() const { return photons_; }
  int nodes() const { return nodes_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  Complex amplitude(const KetLabel& label) const {
    const auto it = terms_.find(label);
    return it == terms_.end() ? Complex{} : it->second;
  }

  void set(const KetLabel& label, Complex amp) { terms_[label] = amp; }

  double norm_squared() const {
    double sum = 0.0;
    for (const auto& [label, amp] : terms_) sum += std::norm(amp);
    return sum;
  }

  bool is_normalized(double tol = 1e-12) const { return std::abs(norm_squared() - 1.0) <= tol; }

  bool is_zero(double tol = 0.0) const {
    for (const auto& [label, amp] : terms_)
      if (std::abs(amp) > tol) return false;
    return true;
  }

  bool operator==(const SparseKetState&) const = default;

private:
  int photons_;
  int nodes_;
  Terms terms_;
};

inline void require_same_shape(const SparseKetState& a, const SparseKetState& b) {
  detail::require_dim(a.photons() == b.photons() && a.nodes() == b.nodes(),
                      "states disagree on (N, d)");
}

/// Equal-weight superposition of all 2d pair kets with zero phase.
inline SparseKetState build_input_state(int photons, int nodes) {
  validate_photon_count(photons);
  validate_node_count(nodes);
  const double amp = 1.0 / std::sqrt(2.0 * nodes);
  SparseKetState::Terms terms;
  for (int j = 1; j <= nodes; ++j) {
    terms[{j, Polarization::H}] = amp;
    terms[{j, Polarization::V}] = amp;
  }
  return {photons, nodes, std::move(terms)};
}

inline SparseKetState apply_phases(const SparseKetState& state, const PhaseVector& phases) {
  validate_phases(phases, state.nodes());
  const double half_n = state.photons() / 2.0;
  auto terms = state.terms();
  for (auto& [label, amp] : terms) {
    if (label.polarization == Polarization::V)
      amp *= std::polar(1.0, half_n * pair_sum(phases, label.pair));
  }
  return {state.photons(), state.nodes(), std::move(terms)};
}

inline SparseKetState output_state(int photons, int nodes, const PhaseVector& phases) {
  return apply_phases(build_input_state(photons, nodes), phases);
}

/// sum_i v_i d|psi(phi)>/dphi_i, evaluated analytically. H-kets are phase free and drop out.
inline SparseKetState directional_state_derivative(int photons, int nodes, const PhaseVector& phases,
                                                   const Eigen::VectorXd& direction) {
  validate_photon_count(photons);
  validate_node_count(nodes);
  validate_phases(phases, nodes);
  detail::require_dim(direction.size() == nodes, "direction vector length must equal d");
  detail::require(direction.norm() > 0.0, "direction vector must be nonzero");

  const double half_n = photons / 2.0;
  const double amp = 1.0 / std::sqrt(2.0 * nodes);
  SparseKetState::Terms terms;
  for (int j = 1; j <= nodes; ++j) {
    const double rate = half_n * pair_sum(direction, j);
    terms[{j, Polarization::V}] =
        Complex(0.0, rate) * amp * std::polar(1.0, half_n * pair_sum(phases, j));
  }
  return {photons, nodes, std::move(terms)};
}

/// <a|b>; labels missing from either state contribute nothing.
inline Complex inner_product(const SparseKetState& a, const SparseKetState& b) {
  require_same_shape(a, b);
  Complex sum{};
  for (const auto& [label, amp] : a.terms()) {
    const auto it = b.terms().find(label);
    if (it != b.terms().end()) sum += std::conj(amp) * it->second;
  }
  return sum;
}

/// Relabels node j as node j+1 (mod d).
inline SparseKetState cyclic_shift(const SparseKetState& state) {
  SparseKetState::Terms terms;
  for (const auto& [label, amp] : state.terms())
    terms[{label.pair % state.nodes() + 1, label.polarization}] = amp;
  return {state.photons(), state.nodes(), std::move(terms)};
}

} // namespace ghzfisher
