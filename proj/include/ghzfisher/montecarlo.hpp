#pragma once

// Simulated projective-measurement experiments and maximum-likelihood
// estimation of the reduced M_c coordinates theta_1..theta_{d-1}.
//
// theta_0 is pinned to zero: the outcome distribution does not depend on it.
// With y_j = (N/2)(phi_j + phi_{j+1}) and per-pair weights a_j (even parity)
// and b_j (odd parity), the mean log-likelihood is
//   sum_j a_j log(2 cos^2(y_j/2) / 4d) + b_j log(2 sin^2(y_j/2) / 4d),
// which is concave in y on each sign branch, and y is linear in theta.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "ghzfisher/chart.hpp"
#include "ghzfisher/crb.hpp"
#include "ghzfisher/errors.hpp"
#include "ghzfisher/ghz_state.hpp"
#include "ghzfisher/measurement.hpp"
#include "ghzfisher/reparam.hpp"

namespace ghzfisher {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent stream seed for replicate `index` of an experiment seeded with `seed`.
inline std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed + 0x9E3779B97F4A7C15ULL * index);
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform_unit(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

struct CountTable {
  std::vector<std::uint64_t> counts;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  FisherMeta meta;

  std::uint64_t count(const OutcomeLabel& label) const { return counts.at(outcome_index(label)); }

  bool operator==(const CountTable& other) const {
    return counts == other.counts && shots == other.shots && seed == other.seed &&
           meta.photons == other.meta.photons && meta.nodes == other.meta.nodes &&
           meta.phases == other.meta.phases;
  }
};

/// Multinomial draw by inverse-CDF sampling of each shot.
inline CountTable sample_counts(const OutcomeDistribution& dist, std::uint64_t shots, std::uint64_t seed) {
  detail::require(shots >= 1, "shot count must be >= 1");
  std::vector<double> cumulative(dist.size());
  double running = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    running += dist[k];
    cumulative[k] = running;
    if (dist[k] > 0.0) last_nonzero = k;
  }
  CountTable table{std::vector<std::uint64_t>(dist.size(), 0), shots, seed, dist.meta()};
  std::mt19937_64 engine(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = uniform_unit(engine) * running;
    auto k = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    ++table.counts[std::min(k, last_nonzero)];
  }
  return table;
}

struct EstimationResult {
  Eigen::VectorXd theta;  ///< theta_1..theta_{d-1}
  double log_likelihood = 0.0;  ///< mean per shot at the optimum
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;
};

struct EstimatorOptions {
  double gradient_tol = 1e-10;
  int max_iterations = 500;
};

namespace detail {

class PairLikelihood {
public:
  PairLikelihood(int photons, int nodes, std::span<const double> weights)
      : nodes_(nodes), even_(nodes), odd_(nodes) {
    require_dim(weights.size() == outcome_count(nodes), "weights need one entry per outcome");
    const auto mc = build_mc(nodes);
    const PhaseChart reduced = PhaseChart::transformed(mc, true);
    rates_ = (photons / 2.0) * pair_incidence(nodes) * reduced.jacobian();
    double total = 0.0;
    for (double w : weights) {
      require(w >= 0.0 && std::isfinite(w), "outcome weights must be finite and nonnegative");
      total += w;
    }
    require(total > 0.0, "no counts to estimate from");
    for (int j = 0; j < nodes; ++j) {
      const std::size_t base = 4 * static_cast<std::size_t>(j);
      even_(j) = (weights[base] + weights[base + 1]) / total;
      odd_(j) = (weights[base + 2] + weights[base + 3]) / total;
    }
    log_norm_ = std::log(2.0 / (4.0 * nodes));
  }

  Eigen::VectorXd pair_phases(const Eigen::VectorXd& theta) const { return rates_ * theta; }
  const Eigen::MatrixXd& rates() const { return rates_; }
  double even(int j) const { return even_(j); }
  double odd(int j) const { return odd_(j); }
  int nodes() const { return nodes_; }

  double value(const Eigen::VectorXd& theta) const {
    const Eigen::VectorXd y = pair_phases(theta);
    double ll = 0.0;
    for (int j = 0; j < nodes_; ++j) {
      const double half = 0.5 * y(j);
      if (even_(j) > 0.0) ll += even_(j) * (log_norm_ + 2.0 * std::log(std::abs(std::cos(half))));
      if (odd_(j) > 0.0) ll += odd_(j) * (log_norm_ + 2.0 * std::log(std::abs(std::sin(half))));
    }
    return ll;
  }

  void derivatives(const Eigen::VectorXd& theta, Eigen::VectorXd& gradient, Eigen::MatrixXd& hessian) const {
    const Eigen::VectorXd y = pair_phases(theta);
    Eigen::VectorXd dy(nodes_), d2y(nodes_);
    for (int j = 0; j < nodes_; ++j) {
      const double half = 0.5 * y(j);
      const double c = std::cos(half), s = std::sin(half);
      dy(j) = 0.0;
      d2y(j) = 0.0;
      if (even_(j) > 0.0) {
        dy(j) -= even_(j) * s / c;
        d2y(j) -= even_(j) / (2.0 * c * c);
      }
      if (odd_(j) > 0.0) {
        dy(j) += odd_(j) * c / s;
        d2y(j) -= odd_(j) / (2.0 * s * s);
      }
    }
    gradient = rates_.transpose() * dy;
    hessian = rates_.transpose() * d2y.asDiagonal() * rates_;
  }

private:
  int nodes_;
  Eigen::MatrixXd rates_;
  Eigen::VectorXd even_;
  Eigen::VectorXd odd_;
  double log_norm_ = 0.0;
};

} // namespace detail

/// Maximum-likelihood estimate from (possibly fractional) outcome weights.
///
/// The search is restricted to |theta - guess|_inf <= half_width and to the sign
/// branch of each pair phase y_j taken from the guess (y_j = 0 selects y_j >= 0).
/// Pairs with odd-parity weight cannot cross y_j = 0, where their likelihood vanishes.
inline EstimationResult mle_estimate_weights(int photons, int nodes, std::span<const double> weights,
                                             const Eigen::VectorXd& guess, double half_width,
                                             const EstimatorOptions& options = {}) {
  validate_photon_count(photons);
  detail::require_dim(guess.size() == nodes - 1, "initial guess must have d - 1 entries (theta_1..theta_{d-1})");
  detail::require(half_width > 0.0, "box half-width must be positive");
  const detail::PairLikelihood model(photons, nodes, weights);

  const Eigen::VectorXd guess_y = model.pair_phases(guess);
  for (int j = 0; j < nodes; ++j)
    detail::require(std::abs(guess_y(j)) < std::numbers::pi,
                    "initial guess lies outside the identifiable region |phi_j + phi_{j+1}| < 2 pi / N");
  Eigen::VectorXd branch(nodes);
  for (int j = 0; j < nodes; ++j) branch(j) = guess_y(j) < 0.0 ? -1.0 : 1.0;

  auto feasible = [&](const Eigen::VectorXd& theta) {
    if ((theta - guess).cwiseAbs().maxCoeff() > half_width) return false;
    const Eigen::VectorXd y = model.pair_phases(theta);
    for (int j = 0; j < nodes; ++j) {
      if (!(std::abs(y(j)) < std::numbers::pi)) return false;
      if (model.odd(j) > 0.0 && !(branch(j) * y(j) > 0.0)) return false;
    }
    return true;
  };

  // Per-pair moment estimate, projected onto the reachable pair-phase subspace.
  Eigen::VectorXd y0(nodes);
  for (int j = 0; j < nodes; ++j) {
    const double total = model.even(j) + model.odd(j);
    y0(j) = total > 0.0
                ? branch(j) * std::acos(std::clamp((model.even(j) - model.odd(j)) / total, -1.0, 1.0))
                : guess_y(j);
  }
  Eigen::VectorXd theta = model.rates().colPivHouseholderQr().solve(y0);
  theta = theta.array().max(guess.array() - half_width).min(guess.array() + half_width).matrix();
  if (!feasible(theta)) {
    if (!feasible(guess)) throw ConvergenceError("no feasible starting point for the likelihood search");
    theta = guess;
  }

  EstimationResult result;
  double value = model.value(theta);
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    model.derivatives(theta, gradient, hessian);
    result.iterations = iter;
    result.gradient_norm = gradient.norm();
    if (result.gradient_norm <= options.gradient_tol) {
      result.converged = true;
      break;
    }
    if (iter == options.max_iterations) break;

    Eigen::VectorXd step;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(-hessian);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive() && ldlt.rcond() > 1e-14) {
      step = ldlt.solve(gradient);
    } else {
      step = gradient;
    }
    double t = 1.0;
    bool moved = false;
    for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
      const Eigen::VectorXd candidate = theta + t * step;
      if (!feasible(candidate)) continue;
      const double candidate_value = model.value(candidate);
      if (candidate_value >= value - 1e-15 * std::abs(value)) {
        theta = candidate;
        value = candidate_value;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (!result.converged)
    throw ConvergenceError("likelihood maximization stopped after " + std::to_string(result.iterations) +
                           " iterations with gradient norm " + std::to_string(result.gradient_norm) +
                           " (maximizer may lie outside the search box)");
  result.theta = theta;
  result.log_likelihood = value;
  return result;
}

inline EstimationResult mle_estimate(const CountTable& counts, const Eigen::VectorXd& guess, double half_width,
                                     const EstimatorOptions& options = {}) {
  std::vector<double> weights(counts.counts.begin(), counts.counts.end());
  return mle_estimate_weights(counts.meta.photons, counts.meta.nodes, weights, guess, half_width, options);
}

/// Estimate from exact expected counts; recovers the true reduced coordinates.
inline EstimationResult mle_estimate_expected(const OutcomeDistribution& dist, const Eigen::VectorXd& guess,
                                              double half_width, const EstimatorOptions& options = {}) {
  return mle_estimate_weights(dist.photons(), dist.nodes(), dist.probabilities(), guess, half_width, options);
}

/// theta_1..theta_{d-1} of the M_c chart for the given phases.
inline Eigen::VectorXd reduced_coordinates(const PhaseVector& phases) {
  const auto mc = build_mc(static_cast<int>(phases.size()));
  return mc.apply(phases).tail(phases.size() - 1);
}

struct SaturationConfig {
  int photons = 2;
  int nodes = 4;
  PhaseVector phases;
  std::uint64_t shots = 100000;
  int replicates = 200;
  std::uint64_t seed = 1;
  double half_width = 0.5;
  unsigned threads = 1;
};

struct SaturationReport {
  SaturationConfig config;
  Eigen::VectorXd true_theta;
  std::vector<Eigen::VectorXd> estimates;
  std::vector<std::uint64_t> seeds;
  double mean_theta1 = 0.0;
  double variance_theta1 = 0.0;
  double bias_theta1 = 0.0;
  double bias_standard_error = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

/// Repeated sample-and-estimate cycles compared against the classical bound on theta_1.
/// Replicate r always uses replicate_seed(seed, r), so the result does not depend on `threads`.
inline SaturationReport crb_saturation_experiment(const SaturationConfig& config) {
  validate_photon_count(config.photons);
  detail::require(config.nodes >= 4 && config.nodes % 2 == 0, "saturation experiment needs even d >= 4");
  validate_phases(config.phases, config.nodes);
  detail::require(config.replicates >= 50, "saturation experiment needs at least 50 replicates");
  detail::require(config.shots >= 1, "shot count must be >= 1");
  for (int j = 1; j <= config.nodes; ++j)
    detail::require(std::abs(pair_sum(config.phases, j)) < 2.0 * std::numbers::pi / config.photons,
                    "true pair sums must satisfy |phi_j + phi_{j+1}| < 2 pi / N");

  SaturationReport report;
  report.config = config;
  report.true_theta = reduced_coordinates(config.phases);
  const auto dist = outcome_distribution(config.photons, config.nodes, config.phases);

  const auto replicates = static_cast<std::size_t>(config.replicates);
  report.estimates.resize(replicates);
  report.seeds.resize(replicates);
  std::vector<std::exception_ptr> failures(replicates);
  auto run_one = [&](std::size_t r) {
    try {
      report.seeds[r] = replicate_seed(config.seed, r);
      const auto counts = sample_counts(dist, config.shots, report.seeds[r]);
      report.estimates[r] = mle_estimate(counts, report.true_theta, config.half_width).theta;
    } catch (...) {
      failures[r] = std::current_exception();
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(config.threads, config.replicates));
  if (workers == 1) {
    for (std::size_t r = 0; r < replicates; ++r) run_one(r);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t r = w; r < replicates; r += workers) run_one(r);
      });
  }
  for (const auto& failure : failures)
    if (failure) std::rethrow_exception(failure);

  double sum = 0.0;
  for (const auto& est : report.estimates) sum += est(0);
  report.mean_theta1 = sum / static_cast<double>(replicates);
  double sq = 0.0;
  for (const auto& est : report.estimates) sq += (est(0) - report.mean_theta1) * (est(0) - report.mean_theta1);
  report.variance_theta1 = sq / static_cast<double>(replicates - 1);
  report.bias_theta1 = report.mean_theta1 - report.true_theta(0);
  report.bias_standard_error = std::sqrt(report.variance_theta1 / static_cast<double>(replicates));

  const auto fc = pushforward_fisher(
      cfim(config.photons, config.nodes, config.phases, PhaseChart::original(config.nodes)), build_mc(config.nodes));
  WeightVector e1 = WeightVector::Zero(config.nodes - 1);
  e1(0) = 1.0;
  report.bound = exact_crb(fc, e1, static_cast<std::int64_t>(config.shots));
  report.ratio = report.variance_theta1 / report.bound;
  return report;
}

} // namespace ghzfisher
