#pragma once

// Command-line front end. main_entry() parses argv into a RunConfig and run()
// executes it, writing one table to the output stream or --out file.

#include "bounds.hpp"
#include "compare.hpp"
#include "detection.hpp"
#include "emit.hpp"
#include "measures.hpp"
#include "roof.hpp"
#include "state_io.hpp"
#include "states.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace entanglemeter::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitError = 2;
inline constexpr int kExitInput = 3;

struct RunConfig {
  std::string command;
  /// `file:path` or a factory spec `name:n[:key=val,...]`.
  std::string state;
  std::vector<std::string> measures;
  std::vector<std::string> bounds;
  std::optional<double> q;
  std::optional<double> alpha;
  std::vector<int> k;
  /// Bipartition for the bipartite bounds, 1-based text ("1,2|3").
  std::string cut;
  /// `name=lo:hi:step` or `name=value`.
  std::vector<std::string> grids;
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 42;
  int restarts = 16;
};

struct FactorySpec {
  StateFamily family = StateFamily::ghz;
  int n = 0;
  std::vector<std::pair<std::string, double>> params;
};

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_plain(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("cannot parse " + std::string(what) + " '" + std::string(s) + "' as a number");
  }
  return v;
}

}  // namespace detail

/// A real number, optionally a multiple of pi: "0.5", "pi", "-pi", "3*pi/4", "pi/720".
inline double parse_real(std::string_view s, std::string_view what = "value") {
  const auto at = s.find("pi");
  if (at == std::string_view::npos) return detail::parse_plain(s, what);
  std::string_view head = s.substr(0, at);
  std::string_view tail = s.substr(at + 2);
  double coefficient = 1.0;
  if (head == "-") {
    coefficient = -1.0;
  } else if (!head.empty()) {
    if (head.back() != '*') throw std::invalid_argument("cannot parse " + std::string(what) + " '" + std::string(s) + "'");
    coefficient = detail::parse_plain(head.substr(0, head.size() - 1), what);
  }
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') throw std::invalid_argument("cannot parse " + std::string(what) + " '" + std::string(s) + "'");
    divisor = detail::parse_plain(tail.substr(1), what);
  }
  return coefficient * std::numbers::pi / divisor;
}

inline GridAxis parse_grid(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw std::invalid_argument("grid '" + std::string(text) + "': expected name=lo:hi:step or name=value");
  }
  GridAxis g;
  g.name = std::string(text.substr(0, eq));
  const auto parts = detail::split(text.substr(eq + 1), ':');
  if (parts.size() == 1) {
    g.lo = g.hi = parse_real(parts[0], "grid value");
    g.step = 1.0;
  } else if (parts.size() == 3) {
    g.lo = parse_real(parts[0], "grid lower bound");
    g.hi = parse_real(parts[1], "grid upper bound");
    g.step = parse_real(parts[2], "grid step");
  } else {
    throw std::invalid_argument("grid '" + std::string(text) + "': expected name=lo:hi:step or name=value");
  }
  g.validate();
  return g;
}

inline FactorySpec parse_factory(std::string_view text) {
  const auto parts = detail::split(text, ':');
  if (parts.size() < 2 || parts.size() > 3) {
    throw std::invalid_argument("state '" + std::string(text) + "': expected name:n[:key=val,...] or file:path");
  }
  FactorySpec f;
  f.family = parse_family(parts[0]);
  {
    const auto& ns = parts[1];
    const auto [ptr, ec] = std::from_chars(ns.data(), ns.data() + ns.size(), f.n);
    if (ns.empty() || ec != std::errc{} || ptr != ns.data() + ns.size()) {
      throw std::invalid_argument("state '" + std::string(text) + "': site count '" + ns + "' is not an integer");
    }
  }
  const auto names = family_parameters(f.family);
  if (parts.size() == 3 && !parts[2].empty()) {
    for (const auto& kv : detail::split(parts[2], ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("state parameter '" + kv + "': expected key=val");
      const std::string key = kv.substr(0, eq);
      if (std::find(names.begin(), names.end(), key) == names.end()) {
        throw std::invalid_argument("state parameter '" + key + "' is not a parameter of " + to_string(f.family));
      }
      f.params.emplace_back(key, parse_real(std::string_view(kv).substr(eq + 1), "state parameter"));
    }
  }
  return f;
}

/// Builds the state named by `text`. Pure families yield a PureState.
inline LoadedState load_source(const std::string& text) {
  if (text.rfind("file:", 0) == 0) return load_state(text.substr(5));
  const FactorySpec f = parse_factory(text);
  std::vector<double> values;
  for (const auto& name : family_parameters(f.family)) {
    auto it = std::find_if(f.params.begin(), f.params.end(), [&](const auto& p) { return p.first == name; });
    if (it == f.params.end()) throw std::invalid_argument("state '" + text + "': missing parameter '" + name + "'");
    values.push_back(it->second);
  }
  switch (f.family) {
    case StateFamily::ghz: return ghz_pure(f.n);
    case StateFamily::w: return w_pure(f.n);
    case StateFamily::phi_theta:
      if (f.n != 3) throw std::invalid_argument("phi_theta: defined for n = 3 only");
      return phi_theta_pure(values[0]);
    default: return state_factory(f.family, f.n, values);
  }
}

inline DensityMatrix as_density(const LoadedState& s) {
  if (const auto* psi = std::get_if<PureState>(&s)) return to_density(*psi);
  return std::get<DensityMatrix>(s);
}

/// The pure state behind `s`, if it is one (rank-1 density matrices included).
inline std::optional<PureState> as_pure_state(const LoadedState& s) {
  if (const auto* psi = std::get_if<PureState>(&s)) return *psi;
  return as_pure(std::get<DensityMatrix>(s));
}

inline int site_count(const LoadedState& s) {
  return std::visit([](const auto& x) { return x.sites(); }, s);
}

namespace detail {

inline std::vector<int> k_values(const RunConfig& cfg, int n) {
  if (!cfg.k.empty()) return cfg.k;
  std::vector<int> all;
  for (int k = 2; k <= n; ++k) all.push_back(k);
  return all;
}

inline std::string params_string(const BoundReport& r) {
  std::string s;
  for (const auto& [key, v] : r.inputs) s += (s.empty() ? "" : ";") + key + "=" + format_number(v);
  s += std::string(s.empty() ? "" : ";") + "vacuous=" + (r.vacuous ? "true" : "false");
  return s;
}

inline Table bounds_table(const std::vector<BoundReport>& reports) {
  Table t{{"name", "value", "certified", "params"}, {}};
  for (const auto& r : reports) t.add({r.name, r.value, r.certified, params_string(r)});
  return t;
}

inline Table run_compute(const RunConfig& cfg) {
  const LoadedState state = load_source(cfg.state);
  const int n = site_count(state);
  const auto pure = as_pure_state(state);
  const double q = cfg.q.value_or(2.0);
  const double alpha = cfg.alpha.value_or(0.5);
  RoofOptions roof;
  roof.seed = cfg.seed;
  roof.restarts = cfg.restarts;
  UnitarySearch search;
  search.seed = cfg.seed;

  Table t{{"measure", "q", "alpha", "k", "value", "argmin_partition", "certified", "method"}, {}};
  auto q_cell = [&](MeasureFamily f) -> Cell { return f == MeasureFamily::q ? Cell{q} : Cell{Null{}}; };
  auto alpha_cell = [&](MeasureFamily f) -> Cell { return f == MeasureFamily::alpha ? Cell{alpha} : Cell{Null{}}; };
  auto require_pure = [&](const std::string& m) {
    if (!pure) throw std::invalid_argument("measure '" + m + "' requires a pure state");
    return *pure;
  };

  const std::vector<std::string> measures = cfg.measures.empty() ? std::vector<std::string>{"q-kme"} : cfg.measures;
  for (const auto& m : measures) {
    const MeasureFamily fam = m.rfind("alpha", 0) == 0 ? MeasureFamily::alpha : MeasureFamily::q;
    const double param = fam == MeasureFamily::q ? q : alpha;
    if (m == "q-kme" || m == "alpha-kme") {
      for (int k : k_values(cfg, n)) {
        const MeasureSpec spec{fam, param, k};
        if (pure) {
          const auto r = k_me_pure(*pure, spec);
          t.add({spec.name(), q_cell(fam), alpha_cell(fam), std::int64_t{k}, r.value, r.argmin.to_string(), true,
                 "exact"});
        } else {
          const auto r = roof_estimate(std::get<DensityMatrix>(state), spec, roof);
          t.add({spec.name(), q_cell(fam), alpha_cell(fam), std::int64_t{k}, r.value, Null{}, false, "roof-upper"});
        }
      }
    } else if (m == "q-gme" || m == "alpha-gme") {
      const auto r = gme_pure(require_pure(m), fam, param);
      t.add({fam == MeasureFamily::q ? "q-GME" : "alpha-GME", q_cell(fam), alpha_cell(fam), std::int64_t{2}, r.value,
             r.argmin.to_string(), true, "exact"});
    } else if (m == "gqc") {
      t.add({"GqC", q, Null{}, Null{}, gqc(require_pure(m), q), Null{}, true, "exact"});
    } else if (m == "fill") {
      t.add({"fill", Null{}, Null{}, Null{}, concurrence_fill(require_pure(m)), Null{}, true, "exact"});
    } else if (m == "q-pi-bound" || m == "alpha-pi-bound") {
      for (int k : k_values(cfg, n)) {
        const auto r = pi_lower_bound(as_density(state), MeasureSpec{fam, param, k}, search, roof);
        t.add({r.name, q_cell(fam), alpha_cell(fam), std::int64_t{k}, r.value, Null{}, r.certified, "pi-part"});
      }
    } else {
      throw std::invalid_argument("unknown measure '" + m +
                                  "' (expected q-kme, alpha-kme, q-gme, alpha-gme, gqc, fill, q-pi-bound, alpha-pi-bound)");
    }
  }
  return t;
}

inline Table run_bounds(const RunConfig& cfg, std::ostream& err) {
  const DensityMatrix rho = as_density(load_source(cfg.state));
  std::optional<Partition> cut;
  if (!cfg.cut.empty()) cut = Partition::parse(cfg.cut);
  const double q = cfg.q.value_or(2.0);
  const double alpha = cfg.alpha.value_or(0.5);

  std::vector<BoundRequest> requests;
  const bool explicit_selection = !cfg.bounds.empty();
  for (const auto& name : explicit_selection ? cfg.bounds : bound_names()) {
    requests.push_back({name, name == "alphan" ? alpha : q, cut});
  }
  std::vector<BoundRequest> runnable;
  for (const auto& req : requests) {
    try {
      run_bound(rho, req);
      runnable.push_back(req);
    } catch (const std::exception&) {
      // without an explicit selection, bounds whose preconditions fail are skipped
      if (explicit_selection) throw;
    }
  }
  const auto verdict = entanglement_verdict(rho, runnable);
  if (verdict.entangled) {
    err << "verdict: entangled (witness " << verdict.witness->name << ", value "
        << format_number(verdict.witness->value) << ")\n";
  } else {
    err << "verdict: no certified bound is positive\n";
  }
  return bounds_table(verdict.reports);
}

inline Table run_detect(const RunConfig& cfg) {
  const DensityMatrix rho = as_density(load_source(cfg.state));
  const CriterionTerms terms = criterion_terms(rho);
  Table t{{"k", "A", "B", "C", "D", "E", "ghz_violated", "w_violated", "k_eff1", "k_eff2", "k_eff1_uninformative",
           "k_eff2_uninformative", "k_nonseparable"},
          {}};
  for (int k : k_values(cfg, rho.sites())) {
    const auto v = separability_verdict(terms, rho.sites(), k);
    t.add({std::int64_t{k}, terms.A, terms.B, terms.C, terms.D, terms.E, v.ghz_test_violated, v.w_test_violated,
           v.k_eff1, v.k_eff2, v.k_eff1_uninformative, v.k_eff2_uninformative, v.k_nonseparable()});
  }
  return t;
}

inline Table scan_table(const std::vector<ScanRow>& rows) {
  Table t{{"family", "n", "k", "param1", "param2", "A", "B", "C", "D", "E", "ghz_violated", "w_violated", "k_eff1",
           "k_eff2"},
          {}};
  for (const auto& r : rows) {
    const Cell p1 = r.params.size() > 0 ? Cell{r.params[0]} : Cell{Null{}};
    const Cell p2 = r.params.size() > 1 ? Cell{r.params[1]} : Cell{Null{}};
    t.add({to_string(r.family), std::int64_t{r.n}, std::int64_t{r.k}, p1, p2, r.terms.A, r.terms.B, r.terms.C,
           r.terms.D, r.terms.E, r.verdict.ghz_test_violated, r.verdict.w_test_violated, r.verdict.k_eff1,
           r.verdict.k_eff2});
  }
  return t;
}

inline Table run_scan(const RunConfig& cfg) {
  if (cfg.state.rfind("file:", 0) == 0) throw std::invalid_argument("scan needs a factory state spec, not a file");
  if (cfg.grids.empty()) throw std::invalid_argument("scan needs at least one --grid");
  const FactorySpec f = parse_factory(cfg.state);
  std::vector<GridAxis> axes;
  for (const auto& g : cfg.grids) axes.push_back(parse_grid(g));
  return scan_table(detection_scan(f.family, f.n, k_values(cfg, f.n), axes, f.params));
}

inline Table comparison_table(const std::vector<ComparisonRow>& rows) {
  Table t{{"theta", "q", "c_q_gme", "gqc", "fill"}, {}};
  for (const auto& r : rows) t.add({r.theta, r.q, r.c_q_gme, r.gqc, r.fill});
  return t;
}

inline Table run_compare(const RunConfig& cfg, std::ostream& err) {
  if (cfg.grids.size() != 1) throw std::invalid_argument("compare needs exactly one --grid theta=lo:hi:step");
  const GridAxis axis = parse_grid(cfg.grids[0]);
  if (axis.name != "theta") throw std::invalid_argument("compare grid must be over theta");
  std::vector<double> thetas;
  for (std::size_t i = 0; i < axis.count(); ++i) thetas.push_back(axis.value(i));
  const auto rows = phi_theta_table(thetas, cfg.q.value_or(3.0));
  if (const auto flip = find_ordering_flip(rows)) {
    err << "ordering flip: theta " << format_number(rows[flip->first].theta) << " vs "
        << format_number(rows[flip->second].theta) << "\n";
  }
  return comparison_table(rows);
}

}  // namespace detail

/// Executes `cfg`; returns the process exit status. Diagnostics go to `err`.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Format format = parse_format(cfg.format);
    if (cfg.command != "scan" && cfg.command != "compare" && cfg.state.empty()) {
      throw std::invalid_argument(cfg.command + " needs --state");
    }
    Table t;
    if (cfg.command == "compute") {
      t = detail::run_compute(cfg);
    } else if (cfg.command == "bounds") {
      t = detail::run_bounds(cfg, err);
    } else if (cfg.command == "detect") {
      t = detail::run_detect(cfg);
    } else if (cfg.command == "scan") {
      if (cfg.state.empty()) throw std::invalid_argument("scan needs --state");
      t = detail::run_scan(cfg);
    } else if (cfg.command == "compare") {
      t = detail::run_compare(cfg, err);
    } else {
      throw std::invalid_argument("unknown command '" + cfg.command + "'");
    }
    if (cfg.out.empty()) {
      emit(t, format, out);
    } else {
      emit(t, format, cfg.out);
    }
    return kExitOk;
  } catch (const StateParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

/// Parses argv and runs. Usage errors exit with kExitUsage.
inline int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multipartite entanglement measures, bounds and separability criteria"};
  app.name("entanglemeter");
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cfg.out, "Output file (default: stdout)");
    sub->add_option("--seed", cfg.seed, "Seed for randomized searches");
  };
  auto add_state = [&](CLI::App* sub) {
    sub->add_option("--state", cfg.state, "file:path or name:n[:key=val,...]")->required();
  };
  auto add_k = [&](CLI::App* sub) {
    sub->add_option("--k", cfg.k, "k values (repeatable; default 2..n)")->delimiter(',');
  };

  auto* compute = app.add_subcommand("compute", "Evaluate measures on a state");
  add_state(compute);
  compute->add_option("--measure", cfg.measures, "q-kme, alpha-kme, q-gme, alpha-gme, gqc, fill, q-pi-bound, alpha-pi-bound")
      ->delimiter(',');
  compute->add_option("--q", cfg.q, "q >= 2");
  compute->add_option("--alpha", cfg.alpha, "0 <= alpha <= 1/2");
  compute->add_option("--restarts", cfg.restarts, "Convex-roof search restarts")->check(CLI::PositiveNumber);
  add_k(compute);
  add_common(compute);

  auto* bounds = app.add_subcommand("bounds", "Evaluate certified lower bounds");
  add_state(bounds);
  bounds->add_option("--bound", cfg.bounds, "Bound names (repeatable; default: all applicable)")->delimiter(',');
  bounds->add_option("--q", cfg.q, "q >= 2");
  bounds->add_option("--alpha", cfg.alpha, "0 <= alpha <= 1/2");
  bounds->add_option("--cut", cfg.cut, "Bipartition for bipartite bounds, e.g. 1|2,3");
  add_common(bounds);

  auto* detect = app.add_subcommand("detect", "Apply the k-separability criteria to a qubit state");
  add_state(detect);
  add_k(detect);
  add_common(detect);

  auto* scan = app.add_subcommand("scan", "Scan a state family over a parameter grid");
  add_state(scan);
  scan->add_option("--grid", cfg.grids, "name=lo:hi:step (repeatable)")->required();
  add_k(scan);
  add_common(scan);

  auto* compare = app.add_subcommand("compare", "Compare C_q-GME, GqC and concurrence fill on |phi_theta>");
  compare->add_option("--grid", cfg.grids, "theta=lo:hi:step")->required();
  compare->add_option("--q", cfg.q, "q >= 2 (default 3)");
  add_common(compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return run(cfg, out, err);
}

}  // namespace entanglemeter::cli
