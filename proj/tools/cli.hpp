#pragma once

// Command-line front end: state, qfim, cfim, transform, bounds, sweep, simulate.
//
// Exit status: 0 success, 2 invalid configuration, 3 singular matrix inversion,
// 4 estimator non-convergence, 1 anything else.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ghzfisher/ghzfisher.hpp"

namespace ghzfisher::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_invalid = 2;
inline constexpr int exit_singular = 3;
inline constexpr int exit_no_convergence = 4;

inline constexpr const char* output_dir_env = "GHZFISHER_OUTPUT_DIR";

struct RunConfig {
  std::string command;
  std::vector<int> photons{2};
  std::vector<int> nodes{4};
  std::string phases = "uniform:0";
  std::string chart = "original";
  bool keep_irrelevant = false;
  std::string kind = "classical";
  std::string alpha = "avg";
  std::int64_t shots = 1;
  int replicates = 200;
  std::uint64_t seed = 1;
  double half_width = 0.5;
  unsigned threads = 1;
  bool require_exact = false;
  std::string output;
  std::string format = "json";
};

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

inline double parse_double(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ValidationError("not a number: '" + text + "'");
  return value;
}

inline std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> values;
  for (const auto& part : split(text, ',')) {
    const double v = parse_double(part);
    if (v != static_cast<int>(v)) throw ValidationError(what + " must be integers, got '" + part + "'");
    values.push_back(static_cast<int>(v));
  }
  if (values.empty()) throw ValidationError(what + " is empty");
  return values;
}

/// "uniform:<value>" or an explicit comma separated list of d phases.
inline PhaseVector parse_phases(const std::string& text, int nodes) {
  const std::string prefix = "uniform:";
  if (text.rfind(prefix, 0) == 0) return PhaseVector::Constant(nodes, parse_double(text.substr(prefix.size())));
  const auto parts = split(text, ',');
  if (static_cast<int>(parts.size()) != nodes)
    throw ValidationError("--phases lists " + std::to_string(parts.size()) + " values, expected d = " +
                          std::to_string(nodes));
  PhaseVector phases(nodes);
  for (int j = 0; j < nodes; ++j) phases(j) = parse_double(parts[static_cast<std::size_t>(j)]);
  return phases;
}

inline int single(const std::vector<int>& values, const char* flag) {
  if (values.size() != 1) throw ValidationError(std::string(flag) + " takes a single value for this command");
  return values.front();
}

inline PhaseChart make_chart(const RunConfig& cfg, int nodes) {
  const std::string name = cfg.chart == "original" || !cfg.keep_irrelevant ? cfg.chart : cfg.chart + "-full";
  return chart_from_name(name, nodes);
}

/// Weights for the average phase expressed in the chart's coordinates, or an explicit list.
inline WeightVector make_alpha(const RunConfig& cfg, const PhaseChart& chart) {
  if (cfg.alpha == "avg") {
    const Eigen::VectorXd average = Eigen::VectorXd::Constant(chart.nodes(), 1.0 / chart.nodes());
    return chart.jacobian().transpose() * average;
  }
  const auto parts = split(cfg.alpha, ',');
  if (static_cast<int>(parts.size()) != chart.dimension())
    throw ValidationError("--alpha needs " + std::to_string(chart.dimension()) + " entries for chart " + chart.name());
  WeightVector alpha(chart.dimension());
  for (int k = 0; k < chart.dimension(); ++k) alpha(k) = parse_double(parts[static_cast<std::size_t>(k)]);
  return alpha;
}

inline std::string human(double value) { return io::format_number(value, 6); }

inline void print_matrix(std::ostream& out, const FisherMatrix& f) {
  std::size_t width = 8;
  for (const auto& label : f.chart().labels()) width = std::max(width, label.size() + 1);
  out << std::setw(static_cast<int>(width)) << "";
  for (const auto& label : f.chart().labels()) out << std::setw(14) << label;
  out << '\n';
  for (Eigen::Index r = 0; r < f.dimension(); ++r) {
    out << std::setw(static_cast<int>(width)) << f.chart().labels()[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < f.dimension(); ++c) out << std::setw(14) << human(f(r, c));
    out << '\n';
  }
}

struct Artifact {
  std::string json;
  std::string csv;
};

inline void emit(const RunConfig& cfg, const Artifact& artifact, std::ostream& out) {
  const bool csv = cfg.format == "csv";
  const std::string& body = csv ? artifact.csv : artifact.json;
  std::string path = cfg.output;
  if (path.empty()) {
    if (const char* dir = std::getenv(output_dir_env); dir != nullptr && *dir != '\0')
      path = std::string(dir) + "/" + cfg.command + (csv ? ".csv" : ".json");
  }
  if (path.empty() || path == "-") {
    out << body;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file " + path);
  file << body;
  out << "wrote " << path << '\n';
}

inline std::string dump(const io::Json& j) { return j.dump(2) + "\n"; }

inline void validate(const RunConfig& cfg) {
  static const std::vector<std::string> commands{"state", "qfim", "cfim", "transform", "bounds", "sweep", "simulate"};
  if (std::find(commands.begin(), commands.end(), cfg.command) == commands.end())
    throw ValidationError("unknown command '" + cfg.command + "'");
  if (cfg.format != "json" && cfg.format != "csv") throw ValidationError("--format must be json or csv");
  if (cfg.kind != "quantum" && cfg.kind != "classical") throw ValidationError("--kind must be quantum or classical");
  for (int n : cfg.photons) validate_photon_count(n);
  for (int d : cfg.nodes) {
    validate_node_count(d);
    if ((cfg.command == "transform" || cfg.command == "sweep" || cfg.command == "simulate") && d % 2 != 0)
      throw ValidationError("command " + cfg.command + " needs even d, got " + std::to_string(d));
  }
  if (cfg.command != "sweep") {
    single(cfg.photons, "--N");
    single(cfg.nodes, "--d");
  }
  if (cfg.shots < 1) throw ValidationError("--shots must be >= 1");
}

inline int execute(const RunConfig& cfg, std::ostream& out) {
  validate(cfg);
  const int n = cfg.photons.front();
  const int d = cfg.nodes.front();

  if (cfg.command == "state") {
    const auto state = output_state(n, d, parse_phases(cfg.phases, d));
    std::ostringstream csv;
    csv << "pair,pol,re,im\n";
    for (const auto& [label, amp] : state.terms())
      csv << io::pair_name(label.pair, d) << ',' << to_string(label.polarization) << ','
          << io::format_number(amp.real()) << ',' << io::format_number(amp.imag()) << '\n';
    out << "output state N=" << n << " d=" << d << ": " << state.size() << " terms, norm^2 "
        << human(state.norm_squared()) << '\n';
    emit(cfg, {dump(io::to_json(state)), csv.str()}, out);
    return exit_ok;
  }

  if (cfg.command == "qfim" || cfg.command == "cfim") {
    const auto phases = parse_phases(cfg.phases, d);
    const auto chart = make_chart(cfg, d);
    const auto f = cfg.command == "qfim" ? qfim_pure(n, d, phases, chart) : cfim(n, d, phases, chart);
    const auto rank = rank_and_nullspace(f);
    out << to_string(f.kind()) << " Fisher matrix, N=" << n << " d=" << d << ", chart " << chart.name() << '\n';
    print_matrix(out, f);
    out << "rank " << rank.rank << " of " << f.dimension() << (rank.singular() ? " (singular)" : " (nonsingular)")
        << '\n';
    auto j = io::to_json(f);
    j["rank"] = io::to_json(rank);
    emit(cfg, {dump(j), io::to_csv(f)}, out);
    return exit_ok;
  }

  if (cfg.command == "transform") {
    const auto reparam = cfg.chart == "d4-orthogonal" ? build_orthogonal_d4()
                         : cfg.chart == "mc"          ? build_mc(d)
                                                      : throw ValidationError("transform needs --chart mc or d4-orthogonal");
    detail::require(reparam.dimension() == d, "the d4-orthogonal chart needs d = 4");
    auto j = io::to_json(reparam);
    out << "reparametrization " << reparam.name << ", d=" << d << '\n';
    if (reparam.name == "mc") {
      const auto check = closed_form_inverse_check(d);
      out << "closed-form inverse vs numerical inverse: max |difference| " << human(check.max_discrepancy) << '\n';
      j["closed_form_inverse"] = io::to_json(check.closed_form);
      j["closed_form_column_discrepancy"] = io::to_json(check.column_discrepancy);
    }
    std::ostringstream csv;
    csv << "matrix,row,values\n";
    for (Eigen::Index r = 0; r < d; ++r) {
      csv << "forward," << r;
      for (Eigen::Index c = 0; c < d; ++c) csv << ',' << io::format_number(reparam.forward(r, c));
      csv << '\n';
    }
    for (Eigen::Index r = 0; r < d; ++r) {
      csv << "inverse," << r;
      for (Eigen::Index c = 0; c < d; ++c) csv << ',' << io::format_number(reparam.inverse(r, c));
      csv << '\n';
    }
    emit(cfg, {dump(j), csv.str()}, out);
    return exit_ok;
  }

  if (cfg.command == "bounds") {
    const auto phases = parse_phases(cfg.phases, d);
    const auto chart = make_chart(cfg, d);
    const auto f = cfg.kind == "quantum" ? qfim_pure(n, d, phases, chart) : cfim(n, d, phases, chart);
    const auto alpha = make_alpha(cfg, chart);
    const auto report = bound_report(f, alpha, cfg.shots);
    out << cfg.kind << " bounds, N=" << n << " d=" << d << ", chart " << chart.name() << ", shots " << cfg.shots
        << '\n';
    if (report.weak_bound)
      out << "weak bound:  Var >= " << human(*report.weak_bound) << "  (std >= " << human(std::sqrt(*report.weak_bound))
          << ")\n";
    else
      out << "weak bound:  unavailable, weight vector lies in the null space\n";
    if (report.exact_bound)
      out << "exact bound: Var >= " << human(*report.exact_bound)
          << "  (std >= " << human(std::sqrt(*report.exact_bound)) << ")\n";
    else
      out << "exact bound: unavailable without reparametrization (Fisher matrix is singular)\n";
    std::ostringstream csv;
    csv << "kind,chart,N,d,shots,exact_bound,weak_bound\n"
        << cfg.kind << ',' << chart.name() << ',' << n << ',' << d << ',' << cfg.shots << ','
        << (report.exact_bound ? io::format_number(*report.exact_bound) : "") << ','
        << (report.weak_bound ? io::format_number(*report.weak_bound) : "") << '\n';
    emit(cfg, {dump(io::to_json(report)), csv.str()}, out);
    if (!report.exact_bound && cfg.require_exact) throw SingularMatrixError(report.exact_unavailable_reason);
    return exit_ok;
  }

  if (cfg.command == "sweep") {
    const auto rows = heisenberg_sweep(cfg.photons, cfg.nodes);
    out << std::setw(4) << "N" << std::setw(4) << "d" << std::setw(14) << "qcrb" << std::setw(14) << "ccrb"
        << std::setw(10) << "ratio" << '\n';
    for (const auto& row : rows)
      out << std::setw(4) << row.photons << std::setw(4) << row.nodes << std::setw(14) << human(row.qcrb)
          << std::setw(14) << human(row.ccrb) << std::setw(10) << human(row.ratio) << '\n';
    emit(cfg, {dump(io::sweep_to_json(rows)), io::sweep_to_csv(rows)}, out);
    return exit_ok;
  }

  // simulate
  SaturationConfig sc;
  sc.photons = n;
  sc.nodes = d;
  sc.phases = parse_phases(cfg.phases, d);
  sc.shots = static_cast<std::uint64_t>(cfg.shots);
  sc.replicates = cfg.replicates;
  sc.seed = cfg.seed;
  sc.half_width = cfg.half_width;
  sc.threads = cfg.threads;
  const auto report = crb_saturation_experiment(sc);
  out << "saturation experiment N=" << n << " d=" << d << ", shots " << sc.shots << ", replicates " << sc.replicates
      << ", seed " << sc.seed << '\n'
      << "Var(theta1) " << human(report.variance_theta1) << ", bound " << human(report.bound) << ", ratio "
      << human(report.ratio) << '\n'
      << "bias " << human(report.bias_theta1) << " +- " << human(report.bias_standard_error) << '\n';
  emit(cfg, {dump(io::to_json(report)), io::saturation_summary_csv(report)}, out);
  return exit_ok;
}

/// Runs a configuration and maps errors to exit codes.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    return execute(cfg, out);
  } catch (const ValidationError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return exit_invalid;
  } catch (const DimensionError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return exit_invalid;
  } catch (const NullDirectionError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return exit_invalid;
  } catch (const SingularMatrixError& e) {
    err << "singular matrix: " << e.what() << '\n';
    return exit_singular;
  } catch (const ConvergenceError& e) {
    err << "estimation failed: " << e.what() << '\n';
    return exit_no_convergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_failure;
  }
}

/// Applies keys from a JSON config file to options not given on the command line.
inline void apply_config_file(const std::string& path, RunConfig& cfg, const CLI::App& sub) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config file " + path + " is not valid JSON: " + e.what());
  }
  auto given = [&](const std::string& flag) {
    const auto* opt = sub.get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  auto as_list = [](const nlohmann::json& v) {
    if (v.is_array()) {
      std::string joined;
      for (const auto& x : v) joined += (joined.empty() ? "" : ",") + (x.is_string() ? x.get<std::string>() : x.dump());
      return joined;
    }
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "N") { if (!given("--N")) cfg.photons = parse_int_list(as_list(value), "N"); }
      else if (key == "d") { if (!given("--d")) cfg.nodes = parse_int_list(as_list(value), "d"); }
      else if (key == "phases") { if (!given("--phases")) cfg.phases = value.is_array() ? as_list(value) : value.get<std::string>(); }
      else if (key == "chart") { if (!given("--chart")) cfg.chart = value.get<std::string>(); }
      else if (key == "keep_irrelevant") { if (!given("--keep-irrelevant")) cfg.keep_irrelevant = value.get<bool>(); }
      else if (key == "kind") { if (!given("--kind")) cfg.kind = value.get<std::string>(); }
      else if (key == "alpha") { if (!given("--alpha")) cfg.alpha = as_list(value); }
      else if (key == "shots") { if (!given("--shots")) cfg.shots = value.get<std::int64_t>(); }
      else if (key == "replicates") { if (!given("--replicates")) cfg.replicates = value.get<int>(); }
      else if (key == "seed") { if (!given("--seed")) cfg.seed = value.get<std::uint64_t>(); }
      else if (key == "half_width") { if (!given("--half-width")) cfg.half_width = value.get<double>(); }
      else if (key == "threads") { if (!given("--threads")) cfg.threads = value.get<unsigned>(); }
      else if (key == "require_exact") { if (!given("--require-exact")) cfg.require_exact = value.get<bool>(); }
      else if (key == "output") { if (!given("--output")) cfg.output = value.get<std::string>(); }
      else if (key == "format") { if (!given("--format")) cfg.format = value.get<std::string>(); }
      else throw ValidationError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config file " + path + ": " + e.what());
  }
}

/// Full command-line entry point; `args` excludes the program name.
inline int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fisher information and Cramer-Rao bounds for distributed GHZ phase sensing", "ghzfisher"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string photons_text = "2", nodes_text = "4", config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--N", photons_text, "photon count (comma list for sweep)");
    sub->add_option("--d", nodes_text, "node count (comma list for sweep)");
    sub->add_option("--config", config_path, "JSON config file; flags take precedence");
    sub->add_option("--output,-o", cfg.output, "output path ('-' for stdout)");
    sub->add_option("--format", cfg.format, "json or csv");
  };
  auto add_phases = [&](CLI::App* sub) {
    sub->add_option("--phases", cfg.phases, "uniform:<value> or comma separated list");
  };
  auto add_chart = [&](CLI::App* sub) {
    sub->add_option("--chart", cfg.chart, "original, d4-orthogonal or mc");
    sub->add_flag("--keep-irrelevant", cfg.keep_irrelevant, "keep the irrelevant coordinate in transformed charts");
  };

  auto* state = app.add_subcommand("state", "output state amplitudes");
  add_common(state);
  add_phases(state);
  auto* qfim_cmd = app.add_subcommand("qfim", "quantum Fisher information matrix");
  add_common(qfim_cmd);
  add_phases(qfim_cmd);
  add_chart(qfim_cmd);
  auto* cfim_cmd = app.add_subcommand("cfim", "classical Fisher information of the projective measurement");
  add_common(cfim_cmd);
  add_phases(cfim_cmd);
  add_chart(cfim_cmd);
  auto* transform = app.add_subcommand("transform", "reparametrization matrices");
  add_common(transform);
  transform->add_option("--chart", cfg.chart, "mc or d4-orthogonal");
  auto* bounds = app.add_subcommand("bounds", "exact and weak Cramer-Rao bounds");
  add_common(bounds);
  add_phases(bounds);
  add_chart(bounds);
  bounds->add_option("--kind", cfg.kind, "quantum or classical");
  bounds->add_option("--alpha", cfg.alpha, "avg or comma separated weights in chart coordinates");
  bounds->add_option("--shots", cfg.shots, "number of repetitions");
  bounds->add_flag("--require-exact", cfg.require_exact, "fail with status 3 when the exact bound is unavailable");
  auto* sweep = app.add_subcommand("sweep", "Heisenberg scaling table");
  add_common(sweep);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo saturation experiment");
  add_common(simulate);
  add_phases(simulate);
  simulate->add_option("--shots", cfg.shots, "shots per replicate");
  simulate->add_option("--replicates", cfg.replicates, "number of replicates");
  simulate->add_option("--seed", cfg.seed, "experiment seed");
  simulate->add_option("--half-width", cfg.half_width, "search box half-width around the initial guess");
  simulate->add_option("--threads", cfg.threads, "worker threads");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return exit_invalid;
  }

  const CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  try {
    cfg.photons = parse_int_list(photons_text, "N");
    cfg.nodes = parse_int_list(nodes_text, "d");
    if (!config_path.empty()) apply_config_file(config_path, cfg, *sub);
  } catch (const ValidationError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return exit_invalid;
  }
  return run(cfg, out, err);
}

} // namespace ghzfisher::cli
