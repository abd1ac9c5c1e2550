#pragma once

#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sombrero/io.hpp"
#include "sombrero/oracle.hpp"
#include "sombrero/reference_cases.hpp"

namespace sombrero::cli {

enum ExitCode : int { kOk = 0, kNotConverged = 1, kBadInput = 2, kNumerical = 3 };

inline nlohmann::ordered_json result_json(const RunConfig& cfg, const SolveResult& r) {
  nlohmann::ordered_json j;
  j["N"] = cfg.N;
  j["g"] = cfg.g;
  j["A"] = cfg.A;
  j["trial"] = to_string(cfg.trial);
  j["method"] = to_string(cfg.method);
  j["rc"] = to_string(cfg.rc);
  j["r_max"] = r.r_max;
  j["points"] = r.nodes.size();
  if (const auto* c = std::get_if<TrialOneCoeffs>(&r.trial_meta)) {
    j["trial_coefficients"] = {{"c", c->c}, {"m", c->m}};
  } else if (const auto* t = std::get_if<TrialTwoConfig>(&r.trial_meta)) {
    nlohmann::ordered_json tj;
    tj["a"] = t->a;
    tj["revised"] = t->revised;
    tj["root"] = to_string(t->root_choice);
    if (t->xi) tj["xi"] = *t->xi;
    j["trial_coefficients"] = tj;
  }
  j["energies"] = r.energies;
  j["converged"] = r.converged;
  j["iterations_used"] = r.iterations_used;
  return j;
}

namespace detail {

/// Flags shared by solve and wavefunction. Values land in `cli`; `bind` records
/// how to copy each one that was actually given over a config-file baseline.
struct SolveFlags {
  RunConfig cli;
  std::string config_path;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> bound;
  std::string trial = "1", method = "tau", rc = "0", root = "large", format = "csv", rmax;

  template <class Field>
  void bind(CLI::App& app, const std::string& name, Field RunConfig::*field, const std::string& help) {
    bound.emplace_back(app.add_option(name, cli.*field, help), [this, field](RunConfig& c) { c.*field = cli.*field; });
  }
  void bind_text(CLI::App& app, const std::string& name, std::string& store, const std::string& key,
                 const std::vector<std::string>& choices, const std::string& help) {
    auto* opt = app.add_option(name, store, help);
    if (!choices.empty()) opt->check(CLI::IsMember(choices));
    bound.emplace_back(opt, [&store, key](RunConfig& c) { c.set(key, store); });
  }

  void add_to(CLI::App& app, bool with_format) {
    app.add_option("--config", config_path, "key = value config file; flags override it")->check(CLI::ExistingFile);
    bind(app, "--N", &RunConfig::N, "spatial dimension");
    bind(app, "--g", &RunConfig::g, "coupling g > 0");
    bind(app, "--A", &RunConfig::A, "shape parameter A > 0");
    bind_text(app, "--trial", trial, "trial", {"1", "2"}, "trial function");
    bind_text(app, "--method", method, "method", {"f", "tau"}, "iteration scheme");
    bind(app, "--orders", &RunConfig::orders, "maximum iteration order");
    bind(app, "--tol", &RunConfig::tol, "convergence tolerance on |E_n - E_(n-1)|");
    bind(app, "--points", &RunConfig::points, "grid points (odd)");
    bind_text(app, "--rmax", rmax, "rmax", {}, "grid end radius (default: auto)");
    bind_text(app, "--rc", rc, "rc", {"0", "inf"}, "normalization point of f");
    bind_text(app, "--root", root, "root", {"large", "small"}, "root of the quadratic for a (trial 2)");
    bind(app, "--revised-a", &RunConfig::revised_a, "a used when no positive root exists (trial 2)");
    bind(app, "--out", &RunConfig::out, "output file");
    if (with_format) bind_text(app, "--format", format, "format", {"csv", "json"}, "output file format");
  }

  RunConfig resolve() const {
    RunConfig c = config_path.empty() ? RunConfig{} : RunConfig::from_config_file(config_path);
    for (const auto& [opt, copy] : bound)
      if (opt->count() > 0) copy(c);
    return c;
  }
};

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParameterError("cannot write '" + path + "'");
  f << text;
  if (!f) throw NumericalError("write to '" + path + "' failed");
}

inline SolveResult run_solve(const RunConfig& cfg) {
  return solve(make_params(cfg.N, cfg.g, cfg.A), cfg.trial, cfg.method, cfg.solve_options());
}

inline int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const SolveResult r = run_solve(cfg);
  for (std::size_t n = 0; n < r.energies.size(); ++n) out << "E" << n << " = " << format_display(r.energies[n]) << '\n';
  if (r.converged)
    out << "converged at order " << r.iterations_used << '\n';
  else
    out << "not converged after " << r.iterations_used << " orders (tol " << format_full(cfg.tol) << ")\n";
  if (!cfg.out.empty()) {
    std::ostringstream s;
    if (cfg.format == OutputFormat::json)
      s << result_json(cfg, r).dump(2) << '\n';
    else
      write_energy_csv(s, r);
    write_file(cfg.out, s.str());
  }
  return r.converged ? kOk : kNotConverged;
}

inline int cmd_wavefunction(const RunConfig& cfg, std::ostream& out) {
  const SolveResult r = run_solve(cfg);
  std::ostringstream s;
  write_wavefunction_csv(s, r, cfg.samples);
  if (cfg.out.empty())
    out << s.str();
  else
    write_file(cfg.out, s.str());
  return r.converged ? kOk : kNotConverged;
}

struct TableRow {
  TableCase c;
  std::vector<double> energies;
  std::string error;
};

inline std::vector<TableRow> compute_table(int which, std::size_t points) {
  const auto cases = table_cases(which);
  std::vector<std::future<TableRow>> jobs;
  for (const auto& c : cases) {
    jobs.push_back(std::async(std::launch::async, [c, which, points] {
      TableRow row{c, {}, {}};
      try {
        auto e = solve_table_case(c, which, points).energies;
        e.resize(std::min<std::size_t>(e.size(), static_cast<std::size_t>(c.orders) + 1));
        row.energies = std::move(e);
      } catch (const std::exception& ex) {
        row.error = ex.what();
      }
      return row;
    }));
  }
  std::vector<TableRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

inline std::string table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream s;
  s << "g,A,trial,E0,E1,E2,E3,E4,E5,error\n";
  for (const auto& r : rows) {
    s << format_full(r.c.g) << ',' << format_full(r.c.A) << ',' << (r.c.trial == TrialKind::one ? "I" : "II");
    for (std::size_t n = 0; n < 6; ++n) {
      s << ',';
      if (n < r.energies.size()) s << format_full(r.energies[n]);
    }
    std::string err = r.error;
    for (char& ch : err)
      if (ch == ',' || ch == '\n') ch = ';';
    s << ',' << err << '\n';
  }
  return s.str();
}

inline int cmd_table(int which, const std::string& path, std::size_t points, std::ostream& out) {
  const auto rows = compute_table(which, points);
  bool failed = false;
  out << "Table " << which << " (" << (which == 1 ? "tau" : "f") << "-iteration, N = 3)\n";
  for (const auto& r : rows) {
    char head[48];
    std::snprintf(head, sizeof head, "%-5g %-4g %-3s", r.c.g, r.c.A, r.c.trial == TrialKind::one ? "I" : "II");
    out << head;
    for (double e : r.energies) {
      const std::string cell = format_display(e);
      out << std::string(cell.size() < 9 ? 9 - cell.size() : 1, ' ') << cell;
    }
    if (!r.error.empty()) {
      out << "  error: " << r.error;
      failed = true;
    }
    out << '\n';
  }
  if (!path.empty()) write_file(path, table_csv(rows));
  return failed ? kNumerical : kOk;
}

}  // namespace detail

/// Entry point of the `sombrero` tool; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ground states of the N-dimensional sombrero potential by f- and tau-iteration", "sombrero"};
  app.require_subcommand(1);

  detail::SolveFlags solve_flags;
  auto* solve_cmd = app.add_subcommand("solve", "iterate one trial function to convergence");
  solve_flags.add_to(*solve_cmd, true);

  detail::SolveFlags wave_flags;
  auto* wave_cmd = app.add_subcommand("wavefunction", "sample the trial and refined wave functions");
  wave_flags.add_to(*wave_cmd, false);
  wave_flags.bind(*wave_cmd, "--samples", &RunConfig::samples, "number of uniform radii in [0, r_max]");

  int which = 1;
  std::string table_out;
  std::size_t table_points = kDefaultPoints;
  auto* table_cmd = app.add_subcommand("table", "reproduce a published eigenvalue table");
  table_cmd->add_option("--which", which, "1 = tau-iteration, 2 = f-iteration")->check(CLI::IsMember({1, 2}));
  table_cmd->add_option("--out", table_out, "CSV output file");
  table_cmd->add_option("--points", table_points, "grid points (odd)");

  int oracle_n = 3;
  double oracle_g = 1.0, oracle_a = 2.0;
  std::optional<double> oracle_rmax;
  std::size_t oracle_points = 4000;
  auto* oracle_cmd = app.add_subcommand("oracle", "finite-difference ground-state energy");
  oracle_cmd->add_option("--N", oracle_n, "spatial dimension");
  oracle_cmd->add_option("--g", oracle_g, "coupling g > 0");
  oracle_cmd->add_option("--A", oracle_a, "shape parameter A > 0");
  oracle_cmd->add_option("--rmax", oracle_rmax, "box radius (default: WKB rule)");
  oracle_cmd->add_option("--points", oracle_points, "interior points of the coarse mesh");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }

  try {
    if (solve_cmd->parsed()) return detail::cmd_solve(solve_flags.resolve(), out);
    if (wave_cmd->parsed()) return detail::cmd_wavefunction(wave_flags.resolve(), out);
    if (table_cmd->parsed()) return detail::cmd_table(which, table_out, table_points, out);
    if (oracle_cmd->parsed()) {
      const ProblemParams p = make_params(oracle_n, oracle_g, oracle_a);
      const double e = fd_ground_energy(p, oracle_rmax ? *oracle_rmax : oracle_r_max(p), oracle_points);
      out << "E = " << format_display(e) << "  (" << format_full(e) << ")\n";
      return kOk;
    }
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kBadInput;
}

}  // namespace sombrero::cli
