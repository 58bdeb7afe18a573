#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lucorr/lucorr.hpp"

namespace lucorr::cli {

inline constexpr int exit_not_excluded = 0;
inline constexpr int exit_input_error = 2;
inline constexpr int exit_entangled = 10;

/// Parsed "--param k=v" pairs.
class Params {
 public:
  explicit Params(const std::vector<std::string>& raw) {
    for (const auto& kv : raw) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) fail(ErrorKind::parse, "parameter '" + kv + "' is not of the form k=v");
      values_[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string text(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) fail(ErrorKind::parse, "missing parameter '" + key + "'");
    return it->second;
  }

  std::size_t size(const std::string& key) const {
    const auto s = text(key);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || v < 0) fail(ErrorKind::parse, "parameter '" + key + "' must be a non-negative integer");
    return static_cast<std::size_t>(v);
  }

  double real(const std::string& key) const {
    const auto s = text(key);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) fail(ErrorKind::parse, "parameter '" + key + "' must be a number");
    return v;
  }

 private:
  std::map<std::string, std::string> values_;
};

struct Request {
  std::optional<std::string> state_file;
  std::optional<std::string> graph_file;
  std::optional<std::string> weights_file;
  std::optional<std::string> family;
  std::vector<std::string> params;
  std::optional<std::size_t> subset_cap;
  std::string format = "table";
  std::uint64_t seed = 1;
  double tol = default_exceed_tolerance;
  // tomo-sim only
  std::string order = "support-first";
  std::optional<std::string> subset;
};

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::parse, "cannot read '" + path + "'");
  return in;
}

inline Graph graph_from_request(const Request& req, const Params& params) {
  if (req.graph_file) {
    auto in = open_input(*req.graph_file);
    return parse_graph(in);
  }
  if (!params.has("shape")) fail(ErrorKind::parse, "graph input needs --graph FILE or --param shape=star|path|ring|complete");
  const auto shape = params.text("shape");
  const auto n = params.size("n");
  if (n < 1 || n > max_parties) fail(ErrorKind::out_of_range, "graph size n must lie in 1..64");
  if (shape == "star") return Graph::star(n);
  if (shape == "path") return Graph::path(n);
  if (shape == "ring") return Graph::ring(n);
  if (shape == "complete") return Graph::complete(n);
  if (shape == "empty") return Graph(n);
  fail(ErrorKind::parse, "unknown graph shape '" + shape + "'");
}

inline std::vector<double> weights_from_request(const Request& req) {
  if (!req.weights_file) fail(ErrorKind::parse, "this family needs --weights FILE");
  auto in = open_input(*req.weights_file);
  return parse_weights(in);
}

inline WernerClassState werner_from_request(const Request& req, const Params& params) {
  const auto n = params.size("n");
  const double delta = params.real("delta");
  if (delta < 0.0 || delta > 1.0) fail(ErrorKind::out_of_range, "delta must lie in [0, 1]");
  WernerClassState w = WernerClassState::uniform(n, delta);
  if (req.weights_file) {
    w.lower = weights_from_request(req);
  }
  w.check();
  return w;
}

inline double probability_param(const Params& params, const std::string& key) {
  const double p = params.real(key);
  if (p < 0.0 || p > 1.0) fail(ErrorKind::out_of_range, "parameter '" + key + "' must lie in [0, 1]");
  return p;
}

inline std::size_t qubit_count_param(const Params& params, std::size_t lo, std::size_t hi) {
  const auto n = params.size("n");
  if (n < lo || n > hi)
    fail(ErrorKind::out_of_range, "n must lie in " + std::to_string(lo) + ".." + std::to_string(hi));
  return n;
}

/// Report plus family-specific extra json objects (thresholds, ...).
struct FamilyResult {
  InvariantReport report;
  std::vector<nlohmann::json> extras;
};

/// Builds the report from a per-subset strength function and optional
/// all-subset table (used for the sum rule when the sweep is complete).
template <class StrengthOf>
InvariantReport structured_report(std::size_t n, const std::optional<std::size_t>& cap, double tol, double purity,
                                  StrengthOf&& strength_of) {
  InvariantReport report;
  report.dims = Dims(n, 2);
  report.purity = purity;
  const auto subsets = sweep_subsets(n, cap);
  double total = 0.0;
  for (auto s : subsets) {
    const double value = strength_of(s);
    total += value;
    report.records.push_back(make_record(s, value, 1.0, tol));
  }
  if (!cap || *cap >= n) report.sum_residual = std::abs(total - (std::ldexp(purity, static_cast<int>(n)) - 1.0));
  return report;
}

inline FamilyResult run_family(const Request& req) {
  const Params params(req.params);
  const std::string& name = *req.family;
  FamilyResult out;
  auto cap_for = [&](std::size_t n) { return req.subset_cap ? req.subset_cap : default_subset_cap(n); };

  if (name == "ghz") {
    const auto n = qubit_count_param(params, 2, 62);
    out.report = structured_report(n, cap_for(n), req.tol, 1.0, [&](PartySet s) { return ghz_strength(n, s); });
  } else if (name == "w" || name == "dicke") {
    const auto n = qubit_count_param(params, name == "w" ? 2 : 1, 62);
    const std::size_t m = name == "w" ? 1 : params.size("m");
    if (m > n) fail(ErrorKind::out_of_range, "m must lie in 0..n");
    std::map<std::size_t, double> by_size;
    out.report = structured_report(n, cap_for(n), req.tol, 1.0, [&](PartySet s) {
      auto it = by_size.find(s.size());
      if (it == by_size.end()) it = by_size.emplace(s.size(), dicke_strength(n, m, s.size())).first;
      return it->second;
    });
    if (m == 1 && n >= 2)
      out.extras.push_back({{"record", "w_threshold"}, {"min_detecting_subset_size", w_detection_threshold(n)}});
  } else if (name == "noisy-ghz" || name == "werner") {
    GhzDiagonalWeights w;
    if (name == "noisy-ghz") {
      const auto n = qubit_count_param(params, 2, graph_enumeration_ceiling);
      w = noisy_ghz_weights(n, probability_param(params, "p"));
      const auto th = noisy_ghz_thresholds(n);
      out.extras.push_back({{"record", "thresholds"}, {"criterion", th.criterion}, {"nppt", th.nppt}});
    } else {
      const auto werner = werner_from_request(req, params);
      if (werner.n > graph_enumeration_ceiling) fail(ErrorKind::out_of_range, "n must lie in 2..26");
      w = werner_class(werner);
      std::size_t npt_cuts = 0;
      const std::size_t n = werner.n;
      // cuts A not containing party 1 cover every bipartition once
      for (std::uint64_t mask = 2; mask < (std::uint64_t{1} << n); mask += 2)
        if (!werner_ppt(werner, PartySet(mask))) ++npt_cuts;
      out.extras.push_back({{"record", "werner"},
                            {"delta", werner.delta},
                            {"L_P_closed_form", werner_strength(werner)},
                            {"nppt_cuts", npt_cuts},
                            {"delta_c_m1", m_ppt_bound(1)}});
    }
    const std::size_t n = w.n;
    const auto cap = cap_for(n);
    double purity = 0.0;
    for (double p : w.p) purity += p * p;
    const Graph star = Graph::star(n);
    std::vector<double> all;
    if (!cap) all = graph_diagonal_strengths(star, w.p);
    out.report = structured_report(n, cap, req.tol, purity, [&](PartySet s) {
      if (s == PartySet::full(n)) return ghz_diagonal_strength(w, s);
      return all.empty() ? graph_diagonal_strength(star, w.p, s) : all[s.mask()];
    });
  } else if (name == "graph" || name == "graph-diag") {
    const Graph g = graph_from_request(req, params);
    const std::size_t n = g.size();
    const auto cap = cap_for(n);
    if (name == "graph") {
      std::vector<std::uint32_t> all;
      if (!cap && n <= graph_enumeration_ceiling) all = graph_strengths(g);
      out.report = structured_report(n, cap, req.tol, 1.0, [&](PartySet s) {
        return static_cast<double>(all.empty() ? graph_strength(g, s) : all[s.mask()]);
      });
    } else {
      const auto p = weights_from_request(req);
      check_graph_weights(p, n);
      double purity = 0.0;
      for (double v : p) purity += v * v;
      std::vector<double> all;
      if (!cap) all = graph_diagonal_strengths(g, p);
      out.report = structured_report(n, cap, req.tol, purity, [&](PartySet s) {
        return all.empty() ? graph_diagonal_strength(g, p, s) : all[s.mask()];
      });
    }
  } else {
    fail(ErrorKind::parse, "unknown family '" + name + "' (ghz, w, dicke, noisy-ghz, werner, graph, graph-diag)");
  }
  return out;
}

/// Dense density matrix for any input source (state file, graph file, family).
inline DensityMatrix dense_state_from_request(const Request& req) {
  if (req.state_file) {
    auto in = open_input(*req.state_file);
    return parse_state(in);
  }
  const Params params(req.params);
  const std::string name = req.family ? *req.family : (req.graph_file ? "graph" : "");
  if (name == "ghz") return ghz_state(qubit_count_param(params, 2, 10));
  if (name == "w") return dicke_state(qubit_count_param(params, 2, dicke_dense_ceiling), 1);
  if (name == "dicke") {
    const auto n = qubit_count_param(params, 1, dicke_dense_ceiling);
    const auto m = params.size("m");
    return dicke_state(n, m);
  }
  if (name == "noisy-ghz") return noisy_ghz(qubit_count_param(params, 2, 10), probability_param(params, "p"));
  if (name == "werner") {
    const auto w = werner_from_request(req, params);
    if (w.n > 10) fail(ErrorKind::resource_cap, "dense Werner state beyond 10 qubits");
    return ghz_diagonal_state(werner_class(w));
  }
  if (name == "graph") {
    const auto g = graph_from_request(req, params);
    if (g.size() > 10) fail(ErrorKind::resource_cap, "dense graph state beyond 10 qubits");
    return graph_state(g);
  }
  if (name == "graph-diag") {
    const auto g = graph_from_request(req, params);
    const auto p = weights_from_request(req);
    return graph_diagonal_state(g, p);
  }
  fail(ErrorKind::parse, "exactly one input source is required: --state, --graph or --family");
}

inline void write_extras(std::ostream& out, const std::vector<nlohmann::json>& extras, ReportFormat format) {
  for (const auto& e : extras) {
    if (format == ReportFormat::json_lines) {
      out << e.dump() << '\n';
    } else if (format == ReportFormat::csv) {
      out << '#' << e.dump() << '\n';
    } else {
      const auto kind = e.at("record").get<std::string>();
      out << kind << ':';
      for (auto it = e.begin(); it != e.end(); ++it)
        if (it.key() != "record") out << ' ' << it.key() << '=' << it.value().dump();
      out << '\n';
    }
  }
}

inline PartySet parse_subset(const std::string& text, std::size_t n) {
  std::vector<std::size_t> members;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    std::size_t used = 0;
    long long a = 0;
    try {
      a = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || a < 1 || a > static_cast<long long>(n))
      fail(ErrorKind::parse, "subset member '" + item + "' is not a party in 1.." + std::to_string(n));
    members.push_back(static_cast<std::size_t>(a - 1));
  }
  const auto s = PartySet::of(members);
  if (s.empty()) fail(ErrorKind::parse, "subset must be nonempty");
  return s;
}

inline int run_analyze(const Request& req, std::ostream& out) {
  const auto format = parse_report_format(req.format);
  const int sources = (req.state_file ? 1 : 0) + (req.family ? 1 : 0) + ((req.graph_file && !req.family) ? 1 : 0);
  if (sources != 1) fail(ErrorKind::parse, "exactly one input source is required: --state, --graph or --family");
  FamilyResult result;
  if (req.state_file) {
    const auto rho = dense_state_from_request(req);
    SweepOptions options;
    options.max_subset_size = req.subset_cap ? req.subset_cap : default_subset_cap(rho.parties());
    options.exceed_tolerance = req.tol;
    result.report = entanglement_verdict(rho, options);
  } else {
    Request family_req = req;
    if (!family_req.family) family_req.family = "graph";
    result = run_family(family_req);
  }
  write_report(out, result.report, format);
  write_extras(out, result.extras, format);
  return result.report.entangled() ? exit_entangled : exit_not_excluded;
}

/// Multi-index label: Pauli letters for all-qubit systems, else numbers.
inline std::string index_label(const MultiIndex& idx) {
  const bool qubits = std::all_of(idx.dims().begin(), idx.dims().end(), [](std::size_t d) { return d == 2; });
  std::string out;
  if (qubits) {
    static const char names[4] = {'I', 'X', 'Y', 'Z'};
    for (auto i : idx.indices()) out += names[i];
    return out;
  }
  out = "(";
  for (std::size_t a = 0; a < idx.size(); ++a) out += (a ? "," : "") + std::to_string(idx[a]);
  return out + ")";
}

/// Order in which the coefficients with support S are "measured".
/// support-first: largest |c| first (ties keep lexicographic order), the
/// best-case schedule. random: uniform shuffle from the seed.
inline std::vector<std::pair<MultiIndex, double>> measurement_schedule(const DensityMatrix& rho, PartySet s,
                                                                       const std::string& order, std::uint64_t seed) {
  std::vector<std::pair<MultiIndex, double>> schedule;
  for_each_index_with_support(s, rho.dims(), [&](const MultiIndex& idx) { schedule.emplace_back(idx, coefficient(rho, idx)); });
  if (order == "support-first") {
    std::stable_sort(schedule.begin(), schedule.end(),
                     [](const auto& a, const auto& b) { return std::abs(a.second) > std::abs(b.second) + 1e-12; });
  } else if (order == "random") {
    Rng rng(seed);
    std::shuffle(schedule.begin(), schedule.end(), rng);
  } else {
    fail(ErrorKind::parse, "unknown order '" + order + "' (random, support-first)");
  }
  return schedule;
}

inline int run_tomo_sim(const Request& req, std::ostream& out) {
  const auto format = parse_report_format(req.format);
  const auto rho = dense_state_from_request(req);
  require_valid(rho);
  const PartySet s = req.subset ? parse_subset(*req.subset, rho.parties()) : PartySet::full(rho.parties());
  const auto schedule = measurement_schedule(rho, s, req.order, req.seed);
  StreamingLowerBound stream(s, rho.dims(), req.tol);

  if (format == ReportFormat::csv) out << "step,index,value,running\n";
  if (format == ReportFormat::table)
    out << "streaming lower bound on L_S for S = " << s.label() << " (bound " << stream.bound() << ", " << schedule.size()
        << " settings, order " << req.order << ")\n";
  for (const auto& [idx, value] : schedule) {
    const double running = stream.push(idx, value);
    const bool fired = stream.detection_step() == stream.steps();
    if (format == ReportFormat::json_lines) {
      out << nlohmann::json{{"record", "step"}, {"step", stream.steps()}, {"index", idx.indices()},
                            {"value", value},   {"running", running},   {"detected", fired}}
                 .dump()
          << '\n';
    } else if (format == ReportFormat::csv) {
      out << std::setprecision(17) << stream.steps() << ',' << index_label(idx) << ',' << value << ',' << running << '\n';
    } else {
      out << std::setw(6) << stream.steps() << "  " << std::setw(10) << index_label(idx) << "  " << std::setw(14)
          << std::setprecision(8) << value << "  " << std::setw(14) << running << (fired ? "  <- detected" : "") << '\n';
    }
  }
  const auto detection = stream.detection_step();
  nlohmann::json summary{{"record", "tomo_summary"},
                         {"subset", detail::one_based(s)},
                         {"steps", stream.steps()},
                         {"final", stream.value()},
                         {"bound", stream.bound()}};
  summary["detection_step"] = detection ? nlohmann::json(*detection) : nlohmann::json(nullptr);
  if (format == ReportFormat::json_lines) {
    out << summary.dump() << '\n';
  } else if (format == ReportFormat::csv) {
    out << '#' << summary.dump() << '\n';
  } else {
    out << "final L_S = " << std::setprecision(12) << stream.value() << "; ";
    if (detection)
      out << "detected at step " << *detection << " of " << stream.steps() << '\n';
    else
      out << "no detection after " << stream.steps() << " steps\n";
  }
  return detection ? exit_entangled : exit_not_excluded;
}

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local-unitary correlation strengths and the product-state bound test"};
  app.require_subcommand(1);
  Request req;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--state", req.state_file, "state file (JSON: dims, matrix)");
    sub->add_option("--graph", req.graph_file, "graph file: n, then one 'a b' edge per line");
    sub->add_option("--weights", req.weights_file, "weights file: whitespace-separated reals");
    sub->add_option("--param", req.params, "family parameter k=v (repeatable)");
    sub->add_option("--format", req.format, "table, json-lines or csv");
    sub->add_option("--seed", req.seed, "random seed");
    sub->add_option("--tol", req.tol, "slack for 'L_S exceeds bound'");
  };

  auto* analyze = app.add_subcommand("analyze", "apply the criterion to a state, graph or family");
  add_common(analyze);
  analyze->add_option("--family", req.family, "ghz, w, dicke, noisy-ghz, werner, graph, graph-diag");
  analyze->add_option("--subset-cap", req.subset_cap, "largest subset size to report")->check(CLI::PositiveNumber);

  auto* family = app.add_subcommand("family", "closed-form strengths for a structured family");
  add_common(family);
  family->add_option("--family", req.family, "ghz, w, dicke, noisy-ghz, werner, graph, graph-diag")->required();
  family->add_option("--subset-cap", req.subset_cap, "largest subset size to report")->check(CLI::PositiveNumber);

  auto* tomo = app.add_subcommand("tomo-sim", "stream exact coefficients and track the lower bound on L_S");
  add_common(tomo);
  tomo->add_option("--family", req.family, "family to construct densely");
  tomo->add_option("--order", req.order, "support-first or random");
  tomo->add_option("--subset", req.subset, "comma-separated 1-based parties (default: all)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_input_error;
  }

  try {
    if (analyze->parsed()) return run_analyze(req, out);
    if (family->parsed()) return run_analyze(req, out);
    return run_tomo_sim(req, out);
  } catch (const Error& e) {
    err << "lucorr: " << e.what() << '\n';
    return exit_input_error;
  }
}

}  // namespace lucorr::cli
