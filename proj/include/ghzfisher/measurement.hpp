#pragma once

// Per-node projective measurement in the (|H> +- |V>)/sqrt(2) basis.
//
// Pair j yields four coincidence patterns. With y_j = (N/2)(phi_j + phi_{j+1}):
//   P(++) = P(--) = (1 + cos y_j) / (4d),   P(+-) = P(-+) = (1 - cos y_j) / (4d).

#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ghzfisher/chart.hpp"
#include "ghzfisher/fisher_matrix.hpp"
#include "ghzfisher/ghz_state.hpp"

namespace ghzfisher {

enum class SignPattern { plus_plus, minus_minus, plus_minus, minus_plus };

inline constexpr std::array<SignPattern, 4> all_sign_patterns{
    SignPattern::plus_plus, SignPattern::minus_minus, SignPattern::plus_minus, SignPattern::minus_plus};

inline const char* to_string(SignPattern p) {
  switch (p) {
    case SignPattern::plus_plus: return "++";
    case SignPattern::minus_minus: return "--";
    case SignPattern::plus_minus: return "+-";
    case SignPattern::minus_plus: return "-+";
  }
  return "?";
}

/// ++ and -- outcomes have probability (1 + cos)/(4d).
inline bool is_parity_even(SignPattern p) {
  return p == SignPattern::plus_plus || p == SignPattern::minus_minus;
}

struct OutcomeLabel {
  int pair = 1;
  SignPattern pattern = SignPattern::plus_plus;

  auto operator<=>(const OutcomeLabel&) const = default;
};

inline std::size_t outcome_count(int nodes) { return 4 * static_cast<std::size_t>(nodes); }

inline std::size_t outcome_index(const OutcomeLabel& label) {
  return 4 * static_cast<std::size_t>(label.pair - 1) + static_cast<std::size_t>(label.pattern);
}

inline OutcomeLabel outcome_label(std::size_t index) {
  return {static_cast<int>(index / 4) + 1, all_sign_patterns[index % 4]};
}

/// Categorical distribution over the 4d outcomes, ordered pair-major as in all_sign_patterns.
class OutcomeDistribution {
public:
  OutcomeDistribution(FisherMeta meta, std::vector<double> probabilities)
      : meta_(std::move(meta)), probabilities_(std::move(probabilities)) {
    detail::require_dim(probabilities_.size() == outcome_count(meta_.nodes), "distribution needs 4d outcomes");
  }

  const FisherMeta& meta() const { return meta_; }
  int photons() const { return meta_.photons; }
  int nodes() const { return meta_.nodes; }
  std::size_t size() const { return probabilities_.size(); }
  const std::vector<double>& probabilities() const { return probabilities_; }
  double operator[](std::size_t index) const { return probabilities_[index]; }
  double probability(const OutcomeLabel& label) const { return probabilities_.at(outcome_index(label)); }

  double total() const {
    double sum = 0.0;
    for (double p : probabilities_) sum += p;
    return sum;
  }

private:
  FisherMeta meta_;
  std::vector<double> probabilities_;
};

inline OutcomeDistribution outcome_distribution(int photons, int nodes, const PhaseVector& phases) {
  validate_photon_count(photons);
  validate_node_count(nodes);
  validate_phases(phases, nodes);
  const double half_n = photons / 2.0;
  const double norm = 4.0 * nodes;
  std::vector<double> probs(outcome_count(nodes));
  for (int j = 1; j <= nodes; ++j) {
    const double c = std::cos(half_n * pair_sum(phases, j));
    for (auto pattern : all_sign_patterns)
      probs[outcome_index({j, pattern})] = (is_parity_even(pattern) ? 1.0 + c : 1.0 - c) / norm;
  }
  return {{photons, nodes, phases}, std::move(probs)};
}

/// Classical Fisher information of the projective measurement.
///
/// Summing the four outcomes of pair j gives the kernel
/// (N^2 / 4d) (dx_j/dtheta_m)(dx_j/dtheta_n), since 1/(1+c) + 1/(1-c) = 2/sin^2.
/// The kernel is the removable-singularity limit at outcomes with P = 0, so the
/// matrix does not depend on the phases.
inline FisherMatrix cfim(int photons, int nodes, const PhaseVector& phases, const PhaseChart& chart) {
  validate_photon_count(photons);
  validate_node_count(nodes);
  validate_phases(phases, nodes);
  detail::require_dim(chart.nodes() == nodes, "chart node count must equal d");
  const Eigen::MatrixXd pair_rates = pair_incidence(nodes) * chart.jacobian();
  const double scale = static_cast<double>(photons) * photons / (4.0 * nodes);
  Eigen::MatrixXd f = scale * pair_rates.transpose() * pair_rates;
  return {std::move(f), FisherKind::classical, chart, {photons, nodes, phases}};
}

} // namespace ghzfisher
