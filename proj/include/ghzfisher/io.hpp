#pragma once

// JSON and CSV emission. CSV numbers carry 17 significant digits; JSON numbers
// use the shortest representation that parses back to the same double.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ghzfisher/chart.hpp"
#include "ghzfisher/crb.hpp"
#include "ghzfisher/fisher_matrix.hpp"
#include "ghzfisher/ghz_state.hpp"
#include "ghzfisher/measurement.hpp"
#include "ghzfisher/montecarlo.hpp"
#include "ghzfisher/reparam.hpp"

namespace ghzfisher::io {

using Json = nlohmann::json;

inline std::string format_number(double value, int digits = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

inline Json to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

inline Json to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

inline Eigen::VectorXd vector_from_json(const Json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = j[k].get<double>();
  return v;
}

inline Eigen::MatrixXd matrix_from_json(const Json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    detail::require_dim(static_cast<Eigen::Index>(j[r].size()) == cols, "ragged matrix in JSON");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

// --- states ---------------------------------------------------------------

inline Json to_json(const SparseKetState& state) {
  Json terms = Json::array();
  for (const auto& [label, amp] : state.terms()) {
    terms.push_back({{"pair", {label.first_node(), label.second_node(state.nodes())}},
                     {"pol", to_string(label.polarization)},
                     {"re", amp.real()},
                     {"im", amp.imag()}});
  }
  return {{"N", state.photons()}, {"d", state.nodes()}, {"terms", std::move(terms)}};
}

inline SparseKetState state_from_json(const Json& j) {
  const int photons = j.at("N").get<int>();
  const int nodes = j.at("d").get<int>();
  SparseKetState state(photons, nodes);
  for (const auto& term : j.at("terms")) {
    const int first = term.at("pair").at(0).get<int>();
    const int second = term.at("pair").at(1).get<int>();
    detail::require(first >= 1 && first <= nodes && second == first % nodes + 1,
                    "state term pair must be (j, j+1 mod d)");
    const auto pol = term.at("pol").get<std::string>();
    detail::require(pol == "H" || pol == "V", "polarization must be \"H\" or \"V\"");
    state.set({first, pol == "H" ? Polarization::H : Polarization::V},
              {term.at("re").get<double>(), term.at("im").get<double>()});
  }
  return state;
}

// --- Fisher matrices --------------------------------------------------------

inline Json to_json(const FisherMatrix& f) {
  return {{"kind", to_string(f.kind())},
          {"chart", f.chart().name()},
          {"labels", f.chart().labels()},
          {"N", f.meta().photons},
          {"d", f.meta().nodes},
          {"phases", to_json(f.meta().phases)},
          {"entries", to_json(f.entries())}};
}

inline FisherMatrix fisher_from_json(const Json& j) {
  const auto kind_name = j.at("kind").get<std::string>();
  detail::require(kind_name == "quantum" || kind_name == "classical", "kind must be quantum or classical");
  const int nodes = j.at("d").get<int>();
  auto chart = chart_from_name(j.at("chart").get<std::string>(), nodes);
  detail::require(j.at("labels").get<std::vector<std::string>>() == chart.labels(),
                  "matrix labels do not match the named chart");
  return {matrix_from_json(j.at("entries")),
          kind_name == "quantum" ? FisherKind::quantum : FisherKind::classical,
          std::move(chart),
          {j.at("N").get<int>(), nodes, vector_from_json(j.at("phases"))}};
}

/// Row-major, comma separated, no header.
inline std::string matrix_to_csv(const Eigen::MatrixXd& m) {
  std::ostringstream out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << format_number(m(r, c));
    out << '\n';
  }
  return out.str();
}

inline std::string to_csv(const FisherMatrix& f) { return matrix_to_csv(f.entries()); }

inline Json to_json(const RankReport& r) {
  Json basis = Json::array();
  for (const auto& v : r.null_basis) basis.push_back(to_json(v));
  return {{"rank", r.rank},
          {"dimension", r.dimension()},
          {"tolerance", r.tolerance},
          {"singular_values", to_json(r.singular_values)},
          {"null_basis", std::move(basis)}};
}

// --- reparametrizations -----------------------------------------------------

inline Json to_json(const Reparametrization& r) {
  return {{"name", r.name},
          {"d", r.dimension()},
          {"labels", r.labels},
          {"forward", to_json(r.forward)},
          {"inverse", to_json(r.inverse)}};
}

// --- distributions ----------------------------------------------------------

inline std::string pair_name(int pair, int nodes) {
  return std::to_string(pair) + "-" + std::to_string(pair % nodes + 1);
}

inline std::string to_csv(const OutcomeDistribution& dist) {
  std::ostringstream out;
  out << "pair,pattern,probability\n";
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const auto label = outcome_label(k);
    out << pair_name(label.pair, dist.nodes()) << ',' << to_string(label.pattern) << ','
        << format_number(dist[k]) << '\n';
  }
  return out.str();
}

inline Json to_json(const OutcomeDistribution& dist) {
  Json outcomes = Json::array();
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const auto label = outcome_label(k);
    outcomes.push_back({{"pair", pair_name(label.pair, dist.nodes())},
                        {"pattern", to_string(label.pattern)},
                        {"probability", dist[k]}});
  }
  return {{"N", dist.photons()},
          {"d", dist.nodes()},
          {"phases", to_json(dist.meta().phases)},
          {"outcomes", std::move(outcomes)}};
}

inline Json to_json(const CountTable& table) {
  Json outcomes = Json::array();
  for (std::size_t k = 0; k < table.counts.size(); ++k) {
    const auto label = outcome_label(k);
    outcomes.push_back({{"pair", pair_name(label.pair, table.meta.nodes)},
                        {"pattern", to_string(label.pattern)},
                        {"count", table.counts[k]}});
  }
  return {{"N", table.meta.photons}, {"d", table.meta.nodes}, {"shots", table.shots},
          {"seed", table.seed},      {"outcomes", std::move(outcomes)}};
}

// --- bounds -----------------------------------------------------------------

inline Json optional_number(const std::optional<double>& value) {
  return value ? Json(*value) : Json(nullptr);
}

inline Json to_json(const BoundReport& r) {
  Json out{{"weight", to_json(r.weight)},
           {"shots", r.shots},
           {"kind", to_string(r.kind)},
           {"chart", r.chart},
           {"N", r.photons},
           {"d", r.nodes},
           {"exact_bound", optional_number(r.exact_bound)},
           {"weak_bound", optional_number(r.weak_bound)},
           {"equality_gap", optional_number(r.equality_gap())}};
  if (!r.exact_bound) out["exact_unavailable"] = r.exact_unavailable_reason;
  if (!r.weak_bound) out["weak_unavailable"] = r.weak_unavailable_reason;
  return out;
}

inline std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "N,d,qcrb,ccrb,ratio\n";
  for (const auto& row : rows)
    out << row.photons << ',' << row.nodes << ',' << format_number(row.qcrb) << ',' << format_number(row.ccrb) << ','
        << format_number(row.ratio) << '\n';
  return out.str();
}

inline Json sweep_to_json(const std::vector<SweepRow>& rows) {
  Json out = Json::array();
  for (const auto& row : rows)
    out.push_back({{"N", row.photons}, {"d", row.nodes}, {"qcrb", row.qcrb}, {"ccrb", row.ccrb}, {"ratio", row.ratio}});
  return out;
}

// --- saturation experiments -------------------------------------------------

inline Json to_json(const SaturationReport& r) {
  Json replicates = Json::array();
  for (std::size_t k = 0; k < r.estimates.size(); ++k)
    replicates.push_back({{"index", k}, {"seed", r.seeds[k]}, {"theta", to_json(r.estimates[k])}});
  return {{"config",
           {{"N", r.config.photons},
            {"d", r.config.nodes},
            {"phases", to_json(r.config.phases)},
            {"shots", r.config.shots},
            {"replicates", r.config.replicates},
            {"seed", r.config.seed},
            {"half_width", r.config.half_width}}},
          {"true_theta", to_json(r.true_theta)},
          {"mean_theta1", r.mean_theta1},
          {"variance_theta1", r.variance_theta1},
          {"bias_theta1", r.bias_theta1},
          {"bias_standard_error", r.bias_standard_error},
          {"bound", r.bound},
          {"ratio", r.ratio},
          {"estimates", std::move(replicates)}};
}

inline std::string saturation_summary_csv(const SaturationReport& r) {
  std::ostringstream out;
  out << "N,d,shots,replicates,seed,true_theta1,mean_theta1,variance_theta1,bound,ratio\n";
  out << r.config.photons << ',' << r.config.nodes << ',' << r.config.shots << ',' << r.config.replicates << ','
      << r.config.seed << ',' << format_number(r.true_theta(0)) << ',' << format_number(r.mean_theta1) << ','
      << format_number(r.variance_theta1) << ',' << format_number(r.bound) << ',' << format_number(r.ratio) << '\n';
  return out.str();
}

} // namespace ghzfisher::io
