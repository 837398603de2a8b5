#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ghzfisher/errors.hpp"

namespace ghzfisher {

/// Linear change of variables theta = forward * phi.
///
/// Row 0 of `forward` is always the irrelevant (alternating) combination and
/// row 1 the average-phase coordinate. Columns of `inverse` are the phase-space
/// directions d(phi)/d(theta_k) and are addressed by label, never by position.
struct Reparametrization {
  std::string name;
  Eigen::MatrixXd forward;
  Eigen::MatrixXd inverse;
  std::vector<std::string> labels;
  std::vector<int> kept_indices;

  Reparametrization(std::string chart_name, Eigen::MatrixXd forward_matrix,
                    std::vector<std::string> coordinate_labels,
                    std::optional<Eigen::MatrixXd> known_inverse = std::nullopt)
      : name(std::move(chart_name)), forward(std::move(forward_matrix)),
        labels(std::move(coordinate_labels)) {
    const auto d = forward.rows();
    detail::require_dim(forward.cols() == d, "reparametrization matrix must be square");
    detail::require_dim(static_cast<Eigen::Index>(labels.size()) == d,
                        "reparametrization needs one label per coordinate");
    detail::require(d >= 2, "reparametrization needs at least two coordinates");
    if (known_inverse) {
      inverse = std::move(*known_inverse);
    } else {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(forward);
      if (!lu.isInvertible()) throw SingularMatrixError("reparametrization matrix is not invertible");
      inverse = lu.inverse();
    }
    const double residual = (forward * inverse - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
    if (residual > 1e-10) throw SingularMatrixError("reparametrization inverse residual too large");
    for (int k = 1; k < d; ++k) kept_indices.push_back(k);
  }

  int dimension() const { return static_cast<int>(forward.rows()); }

  int index_of(const std::string& label) const {
    for (std::size_t k = 0; k < labels.size(); ++k)
      if (labels[k] == label) return static_cast<int>(k);
    throw ValidationError("unknown coordinate label '" + label + "' in chart " + name);
  }

  /// d(phi)/d(theta_label) as a length-d vector.
  Eigen::VectorXd direction(const std::string& label) const { return inverse.col(index_of(label)); }

  Eigen::VectorXd apply(const Eigen::VectorXd& phases) const {
    detail::require_dim(phases.size() == dimension(), "phase vector length must equal d");
    return forward * phases;
  }
};

/// Coordinates in which a Fisher matrix is expressed.
class PhaseChart {
public:
  static PhaseChart original(int nodes) {
    detail::require(nodes >= 1, "chart needs at least one node");
    PhaseChart chart;
    chart.nodes_ = nodes;
    for (int j = 1; j <= nodes; ++j) chart.labels_.push_back("phi" + std::to_string(j));
    chart.jacobian_ = Eigen::MatrixXd::Identity(nodes, nodes);
    return chart;
  }

  static PhaseChart transformed(Reparametrization reparam, bool drop_irrelevant = true) {
    PhaseChart chart;
    chart.nodes_ = reparam.dimension();
    chart.drop_irrelevant_ = drop_irrelevant;
    std::vector<int> columns;
    if (drop_irrelevant) {
      columns = reparam.kept_indices;
    } else {
      for (int k = 0; k < reparam.dimension(); ++k) columns.push_back(k);
    }
    chart.jacobian_.resize(chart.nodes_, static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
      chart.jacobian_.col(static_cast<Eigen::Index>(c)) = reparam.inverse.col(columns[c]);
      chart.labels_.push_back(reparam.labels[columns[c]]);
    }
    chart.reparam_ = std::move(reparam);
    return chart;
  }

  bool is_original() const { return !reparam_.has_value(); }
  bool drops_irrelevant() const { return drop_irrelevant_; }
  int nodes() const { return nodes_; }
  int dimension() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::optional<Reparametrization>& reparametrization() const { return reparam_; }

  /// d x k matrix whose columns are d(phi)/d(coordinate).
  const Eigen::MatrixXd& jacobian() const { return jacobian_; }

  std::string name() const {
    if (!reparam_) return "original";
    return drop_irrelevant_ ? reparam_->name : reparam_->name + "-full";
  }

  int index_of(const std::string& label) const {
    for (std::size_t k = 0; k < labels_.size(); ++k)
      if (labels_[k] == label) return static_cast<int>(k);
    throw ValidationError("unknown coordinate label '" + label + "' in chart " + name());
  }

private:
  PhaseChart() = default;

  int nodes_ = 0;
  bool drop_irrelevant_ = false;
  std::vector<std::string> labels_;
  Eigen::MatrixXd jacobian_;
  std::optional<Reparametrization> reparam_;
};

} // namespace ghzfisher
