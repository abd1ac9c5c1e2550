#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <locale>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sombrero/errors.hpp"
#include "sombrero/iteration.hpp"

namespace sombrero {

/// Shortest text that reads back to the same double (17 significant digits).
inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Four decimals, the precision of the published tables.
inline std::string format_display(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

inline double parse_double(const std::string& s, const std::string& what) {
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  double v;
  if (!(in >> v) || !(in >> std::ws).eof()) throw ParameterError("cannot parse " + what + " from '" + s + "'");
  return v;
}

inline long parse_integer(const std::string& s, const std::string& what) {
  std::istringstream in(s);
  long v;
  if (!(in >> v) || !(in >> std::ws).eof()) throw ParameterError("cannot parse " + what + " from '" + s + "'");
  return v;
}

// --- enum spellings shared by the CLI, config files and outputs -------------

inline std::string to_string(Method m) { return m == Method::f ? "f" : "tau"; }
inline std::string to_string(Anchor a) { return a == Anchor::zero ? "0" : "inf"; }
inline std::string to_string(RootChoice r) { return r == RootChoice::larger ? "large" : "small"; }
inline std::string to_string(TrialKind t) { return t == TrialKind::one ? "1" : "2"; }

inline Method parse_method(const std::string& s) {
  if (s == "f") return Method::f;
  if (s == "tau") return Method::tau;
  throw ParameterError("method must be f or tau, got '" + s + "'");
}
inline Anchor parse_anchor(const std::string& s) {
  if (s == "0") return Anchor::zero;
  if (s == "inf") return Anchor::infinity;
  throw ParameterError("rc must be 0 or inf, got '" + s + "'");
}
inline RootChoice parse_root(const std::string& s) {
  if (s == "large") return RootChoice::larger;
  if (s == "small") return RootChoice::smaller;
  throw ParameterError("root must be large or small, got '" + s + "'");
}
inline TrialKind parse_trial(const std::string& s) {
  if (s == "1") return TrialKind::one;
  if (s == "2") return TrialKind::two;
  throw ParameterError("trial must be 1 or 2, got '" + s + "'");
}

enum class OutputFormat { csv, json };

/// Everything a run needs; round-trips through `key = value` config text.
struct RunConfig {
  int N = 3;
  double g = 1.0;
  double A = 2.0;
  TrialKind trial = TrialKind::one;
  Method method = Method::tau;
  int orders = 12;
  double tol = 1e-4;
  std::size_t points = kDefaultPoints;
  std::optional<double> rmax;
  Anchor rc = Anchor::zero;
  RootChoice root = RootChoice::larger;
  double revised_a = kDefaultRevisedA;
  std::string out;
  OutputFormat format = OutputFormat::csv;
  int samples = 201;

  SolveOptions solve_options() const {
    SolveOptions o;
    o.orders = orders;
    o.tol = tol;
    o.n_points = points;
    o.r_max = rmax;
    o.anchor = rc;
    o.trial.root_choice = root;
    o.trial.revised_a = revised_a;
    return o;
  }

  /// Applies one `key = value` pair; unknown keys are rejected.
  void set(const std::string& key, const std::string& value) {
    if (key == "N") N = static_cast<int>(parse_integer(value, key));
    else if (key == "g") g = parse_double(value, key);
    else if (key == "A") A = parse_double(value, key);
    else if (key == "trial") trial = parse_trial(value);
    else if (key == "method") method = parse_method(value);
    else if (key == "orders") orders = static_cast<int>(parse_integer(value, key));
    else if (key == "tol") tol = parse_double(value, key);
    else if (key == "points") {
      const long v = parse_integer(value, key);
      if (v < 0) throw ParameterError("points must be positive");
      points = static_cast<std::size_t>(v);
    }
    else if (key == "rmax") rmax = value == "auto" ? std::nullopt : std::optional<double>(parse_double(value, key));
    else if (key == "rc") rc = parse_anchor(value);
    else if (key == "root") root = parse_root(value);
    else if (key == "revised_a") revised_a = parse_double(value, key);
    else if (key == "out") out = value;
    else if (key == "format") {
      if (value == "csv") format = OutputFormat::csv;
      else if (value == "json") format = OutputFormat::json;
      else throw ParameterError("format must be csv or json, got '" + value + "'");
    }
    else if (key == "samples") samples = static_cast<int>(parse_integer(value, key));
    else throw ParameterError("unknown config key '" + key + "'");
  }

  std::string to_config_text() const {
    std::ostringstream s;
    s << "N = " << N << '\n'
      << "g = " << format_full(g) << '\n'
      << "A = " << format_full(A) << '\n'
      << "trial = " << to_string(trial) << '\n'
      << "method = " << to_string(method) << '\n'
      << "orders = " << orders << '\n'
      << "tol = " << format_full(tol) << '\n'
      << "points = " << points << '\n'
      << "rmax = " << (rmax ? format_full(*rmax) : std::string("auto")) << '\n'
      << "rc = " << to_string(rc) << '\n'
      << "root = " << to_string(root) << '\n'
      << "revised_a = " << format_full(revised_a) << '\n'
      << "out = " << out << '\n'
      << "format = " << (format == OutputFormat::csv ? "csv" : "json") << '\n'
      << "samples = " << samples << '\n';
    return s.str();
  }

  static RunConfig from_config_text(std::istream& in) {
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ParameterError("config line " + std::to_string(lineno) + ": expected key = value");
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
  }

  static RunConfig from_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config file '" + path + "'");
    return from_config_text(in);
  }
};

// --- CSV ------------------------------------------------------------------

/// Energy sequence as `order,energy,delta` rows.
inline void write_energy_csv(std::ostream& out, const SolveResult& r) {
  out << "order,energy,delta\n";
  for (std::size_t n = 0; n < r.energies.size(); ++n)
    out << n << ',' << format_full(r.energies[n]) << ',' << format_full(r.energies[n] - r.energies[0]) << '\n';
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline std::vector<double> read_energy_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "order,energy,delta") throw ParameterError("not an energy CSV");
  std::vector<double> energies;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 3) throw ParameterError("malformed energy CSV row '" + line + "'");
    if (parse_integer(cells[0], "order") != static_cast<long>(energies.size()))
      throw ParameterError("energy CSV orders are not consecutive");
    energies.push_back(parse_double(cells[1], "energy"));
  }
  return energies;
}

/// Linear interpolation of grid samples at `samples` uniform radii in [0, r_max].
inline void write_wavefunction_csv(std::ostream& out, const SolveResult& r, int samples) {
  if (samples < 2) throw ParameterError("need at least 2 wave-function samples");
  const std::size_t n = r.nodes.size();
  const double dr = r.nodes[1] - r.nodes[0];
  out << "r,phi_normalized,psi_normalized\n";
  for (int s = 0; s < samples; ++s) {
    const double x = r.r_max * s / (samples - 1);
    const std::size_t i = std::min(n - 2, static_cast<std::size_t>(x / dr));
    const double t = std::clamp((x - r.nodes[i]) / dr, 0.0, 1.0);
    const double phi = r.phi[i] + t * (r.phi[i + 1] - r.phi[i]);
    const double psi = r.psi[i] + t * (r.psi[i + 1] - r.psi[i]);
    out << format_full(x) << ',' << format_full(phi) << ',' << format_full(psi) << '\n';
  }
}

}  // namespace sombrero
