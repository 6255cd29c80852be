#include "schroder/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "schroder/conjugacy.hpp"
#include "schroder/ergodic.hpp"
#include "schroder/fpsolver.hpp"
#include "schroder/schroeder.hpp"

namespace schroder::cli {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& key, const std::string& what) {
  raise(ErrorKind::Schema, "config key '" + key + "': " + what);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
      schema(where + item.key(), "unknown key");
  }
}

double get_real(const json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) schema(path + key, "expected a number");
  return v.get<double>();
}

long long get_int(const json& obj, const std::string& key, const std::string& path, long long fallback,
                  long long min_value) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  long long out;
  if (v.is_number_integer()) {
    out = v.get<long long>();
  } else if (v.is_number_float() && std::isfinite(v.get<double>()) && v.get<double>() == std::floor(v.get<double>()) &&
             std::abs(v.get<double>()) < 9e18) {
    out = static_cast<long long>(v.get<double>());
  } else {
    schema(path + key, "expected an integer");
  }
  if (out < min_value) schema(path + key, "must be >= " + std::to_string(min_value));
  return out;
}

std::vector<std::string> get_names(const json& obj, const std::string& key) {
  std::vector<std::string> out;
  if (!obj.contains(key)) return out;
  const json& v = obj.at(key);
  auto split = [&](const std::string& s) {
    std::string cur;
    for (char ch : s) {
      if (ch == '+' || ch == ',') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else if (ch != ' ') {
        cur += ch;
      }
    }
    if (!cur.empty()) out.push_back(cur);
  };
  if (v.is_string()) {
    split(v.get<std::string>());
  } else if (v.is_array()) {
    for (const json& e : v) {
      if (!e.is_string()) schema(key, "expected strings");
      split(e.get<std::string>());
    }
  } else {
    schema(key, "expected a string or an array of strings");
  }
  return out;
}

MapParams parse_map(const json& m) {
  if (!m.is_object()) schema("map", "expected an object");
  if (!m.contains("family") || !m.at("family").is_string()) schema("map.family", "required string");
  const std::string name = m.at("family").get<std::string>();
  Family family;
  try {
    family = family_from_string(name);
  } catch (const Error&) {
    schema("map.family", "unknown family '" + name + "'");
  }
  const std::string p = "map.";
  switch (family) {
    case Family::Renyi:
      reject_unknown(m, p, {"family", "r"});
      return RenyiParams{static_cast<int>(get_int(m, "r", p, 2, 1))};
    case Family::Nr:
      reject_unknown(m, p, {"family", "r"});
      return NrParams{static_cast<int>(get_int(m, "r", p, 2, 1))};
    case Family::Logistic:
      reject_unknown(m, p, {"family"});
      return LogisticParams{};
    case Family::Chebyshev:
      reject_unknown(m, p, {"family", "r"});
      return ChebyshevParams{static_cast<int>(get_int(m, "r", p, 2, 1))};
    case Family::Lattes: {
      reject_unknown(m, p, {"family", "g2", "g3"});
      LattesParams lp;
      lp.g2 = get_real(m, "g2", p, lp.g2);
      lp.g3 = get_real(m, "g3", p, lp.g3);
      return lp;
    }
    case Family::Sn2: {
      reject_unknown(m, p, {"family", "kappa"});
      Sn2Params sp;
      sp.kappa = get_real(m, "kappa", p, sp.kappa);
      return sp;
    }
    case Family::CauchyDoubling:
      reject_unknown(m, p, {"family"});
      return CauchyDoublingParams{};
    case Family::BooleLft: {
      reject_unknown(m, p, {"family", "a", "b", "c", "d"});
      BooleLftParams bp;
      bp.a = get_real(m, "a", p, bp.a);
      bp.b = get_real(m, "b", p, bp.b);
      bp.c = get_real(m, "c", p, bp.c);
      bp.d = get_real(m, "d", p, bp.d);
      return bp;
    }
  }
  schema("map.family", "unknown family");
}

Command parse_command(const std::string& s) {
  for (Command c : {Command::Density, Command::Measure, Command::Lyapunov, Command::Verify, Command::Ulam,
                    Command::Koenigs})
    if (to_string(c) == s) return c;
  schema("command", "unknown command '" + s + "'");
}

void require_subset(const std::vector<std::string>& got, std::initializer_list<std::string_view> allowed,
                    const std::string& key) {
  for (const auto& g : got)
    if (std::find(allowed.begin(), allowed.end(), g) == allowed.end()) schema(key, "unsupported value '" + g + "'");
}

// ---------------------------------------------------------------- execution

struct CsvWriter {
  std::string text;

  void row(std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
      if (!first) text += ',';
      text += c;
      first = false;
    }
    text += '\n';
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text += ',';
      text += cells[i];
    }
    text += '\n';
  }
};

struct Check {
  std::string name;
  double residual;
  double tolerance;
  bool pass;
};

bool has(const std::vector<std::string>& v, std::string_view s) { return std::find(v.begin(), v.end(), s) != v.end(); }

bool has_conjugator(const MapInstance& map) {
  return map.family() != Family::Renyi && map.family() != Family::Nr && map.family() != Family::BooleLft;
}

double check_tol(const RunConfig& cfg, double fallback) { return cfg.tolerance.value_or(fallback); }

double boole_attracting_fixed_point(const BooleLftParams& p) {
  // c x^2 + (d - a) x - b = 0; the attracting root has |c x + d| > 1.
  const double disc = (p.d - p.a) * (p.d - p.a) + 4.0 * p.b * p.c;
  if (disc < 0.0) raise(ErrorKind::Domain, "boole_lft: no real fixed point");
  const double s = std::sqrt(disc);
  const double x1 = (p.a - p.d + s) / (2.0 * p.c), x2 = (p.a - p.d - s) / (2.0 * p.c);
  return std::abs(p.c * x1 + p.d) > std::abs(p.c * x2 + p.d) ? x1 : x2;
}

std::vector<double> chart_points(const MapInstance& map, int n) {
  const ChartedMap view = bounded_view(map);
  const Interval r = view.domain();
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = view.chart().to_x(r.lo + r.length() * (i + 0.5) / n);
  return xs;
}

RunResult run_density(const RunConfig& cfg, const MapInstance& map) {
  const std::vector<std::string> methods = cfg.methods;
  const ChartedMap view = bounded_view(map);
  const bool compact = !map.domain().bounded();
  const DensityModel rho = catalog_density(map);
  RunResult res;

  std::optional<GridDensity> ulam, hist;
  if (has(methods, "ulam")) {
    PowerIterationReport rep;
    ulam = stationary_density(ulam_matrix(map, cfg.cells, cfg.samples, cfg.seed), {}, &rep);
    res.summary["ulam_iterations"] = rep.iterations;
  }
  if (has(methods, "histogram"))
    hist = histogram_density(map, draw_initial_point(map, cfg.seed), cfg.steps, cfg.burn_in, cfg.bins, cfg.seed);

  std::vector<Check> checks;
  const auto rho_u = density_in_chart(rho, view.chart());
  if (ulam && has(methods, "analytic")) {
    const double l1 = l1_distance(*ulam, rho_u), tol = check_tol(cfg, compact ? 0.05 : 0.02);
    checks.push_back({"l1_ulam_analytic", l1, tol, l1 < tol});
  }
  if (hist && has(methods, "analytic")) {
    const double l1 = l1_distance(*hist, rho_u), tol = check_tol(cfg, 0.05);
    checks.push_back({"l1_histogram_analytic", l1, tol, l1 < tol});
  }
  if (hist && ulam) {
    const double l1 = l1_distance(*hist, coarsen(*ulam, cfg.bins)), tol = check_tol(cfg, 0.06);
    checks.push_back({"l1_histogram_ulam", l1, tol, l1 < tol});
  }
  for (const auto& c : checks) {
    res.summary[c.name] = {{"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}};
    res.all_passed = res.all_passed && c.pass;
  }

  CsvWriter w;
  std::vector<std::string> header{"x"};
  for (const char* m : {"analytic", "ulam", "histogram"})
    if (has(methods, m)) header.push_back(std::string("rho_") + m);
  w.row(header);
  const Interval r = view.domain();
  for (int i = 0; i < cfg.cells; ++i) {
    const double u = r.lo + r.length() * (i + 0.5) / cfg.cells;
    const double x = view.chart().to_x(u);
    std::vector<std::string> row{format_real(x)};
    if (has(methods, "analytic")) row.push_back(format_real(rho(x)));
    if (ulam) row.push_back(format_real(ulam->value_in_x(i)));
    if (hist) row.push_back(format_real(hist->values(i * cfg.bins / cfg.cells) / view.chart().jacobian(u)));
    w.row(row);
  }
  res.csv = std::move(w.text);
  return res;
}

RunResult run_measure(const RunConfig& cfg, const MapInstance& map) {
  const std::vector<double> xs = chart_points(map, cfg.grid);
  std::vector<double> mu(xs.size());
  if (has_conjugator(map)) {
    const ConjugacyPair pair = conjugator(map);
    for (std::size_t i = 0; i < xs.size(); ++i) mu[i] = measure_cdf(pair, xs[i]);
  } else {
    const DensityModel rho = catalog_density(map);
    const CumulativeMeasure cm([&rho](double x) { return rho(x); }, map.domain(), map.breakpoints());
    for (std::size_t i = 0; i < xs.size(); ++i) mu[i] = cm(xs[i]);
  }
  CsvWriter w;
  w.row({"x", "mu"});
  for (std::size_t i = 0; i < xs.size(); ++i) w.row({format_real(xs[i]), format_real(mu[i])});
  return {std::move(w.text), true, json::object()};
}

RunResult run_lyapunov(const RunConfig& cfg, const MapInstance& map) {
  const double expected = std::log(static_cast<double>(map.branch_count()));
  CsvWriter w;
  w.row({"method", "estimate", "expected_ln_r", "abs_error"});
  RunResult res;
  for (const auto& m : cfg.methods) {
    double est, tol;
    if (m == "quadrature") {
      est = lyapunov_quadrature(map, catalog_density(map));
      tol = check_tol(cfg, map.family() == Family::Lattes ? 1e-5 : 1e-6);
    } else {
      est = lyapunov_birkhoff_seeded(map, cfg.steps, cfg.burn_in, cfg.seed).estimate();
      tol = check_tol(cfg, 5e-3);
    }
    const double err = std::abs(est - expected);
    res.all_passed = res.all_passed && err < tol;
    res.summary[m] = {{"abs_error", err}, {"tolerance", tol}};
    w.row({m, format_real(est), format_real(expected), format_real(err)});
  }
  res.csv = std::move(w.text);
  return res;
}

std::vector<Check> verify_checks(const RunConfig& cfg, const MapInstance& map) {
  std::vector<Check> out;
  if (map.family() == Family::BooleLft) {
    const auto& p = std::get<BooleLftParams>(map.params());
    for (const auto& name : cfg.checks) {
      if (name == "ulam_attractor_mass") {
        const double fp = boole_attracting_fixed_point(p);
        const GridDensity d = stationary_density(ulam_matrix(map, cfg.cells, cfg.samples, cfg.seed));
        const double residual = 1.0 - mass_in(d, fp - 0.05, fp + 0.05), tol = check_tol(cfg, 0.1);
        out.push_back({name, residual, tol, residual < tol});
      } else if (name == "lyapunov_birkhoff_sign") {
        const double est = lyapunov_birkhoff_seeded(map, cfg.steps, cfg.burn_in, cfg.seed).estimate();
        const double tol = check_tol(cfg, 0.0);
        out.push_back({name, est, tol, est < tol});
      } else {
        // The claimed invariant density 1/(pi (1 + x^2)); the check passes
        // when the transfer-operator residual shows the claim does not hold.
        const auto claim = [](double x) { return 1.0 / (M_PI * (1.0 + x * x)); };
        const std::vector<double> grid = residual_grid(map, cfg.grid);
        const double residual = fp_residual(map, claim, grid), tol = check_tol(cfg, 1e-8);
        out.push_back({name, residual, tol, residual > tol});
      }
    }
    return out;
  }

  const DensityModel rho = catalog_density(map);
  const double r = map.branch_count();
  const SchroederCandidate cand{[&rho](double x) { return rho(x); }, {}, r};
  const std::vector<double> grid = residual_grid(map, cfg.grid);
  for (const auto& name : cfg.checks) {
    if (name == "conjugacy") {
      const double res = conjugacy_residual(conjugator(map), cfg.grid);
      const double tol = check_tol(cfg, map.family() == Family::Lattes ? 1e-8 : 1e-10);
      out.push_back({name, res, tol, res < tol});
    } else if (name == "schroeder_derivative") {
      const double res = derivative_form_residual(map, cand, grid), tol = check_tol(cfg, 1e-8);
      out.push_back({name, res, tol, res < tol});
    } else if (name == "eigenvalue") {
      const EigenvalueEstimate e = eigenvalue_estimate(map, cand.alpha, grid);
      const double res = std::max(std::abs(e.lambda_abs - r), e.spread), tol = check_tol(cfg, 1e-8);
      out.push_back({name, res, tol, res < tol});
    } else if (name == "fp") {
      double res = 0.0;
      for (double x : grid) res = std::max(res, std::abs(fp_aggregate(map, cand, x) - rho(x)) / rho(x));
      const double tol = check_tol(cfg, 1e-8);
      out.push_back({name, res, tol, res < tol});
    } else {  // measure
      const ConjugacyPair pair = conjugator(map);
      std::vector<double> cuts = map.breakpoints();
      cuts.insert(cuts.end(), map.singularities().begin(), map.singularities().end());
      const CumulativeMeasure cm(cand.alpha, map.domain(), cuts);
      double res = 0.0;
      const std::vector<double> xs = chart_points(map, std::min(cfg.grid, 100));
      for (double x : xs) res = std::max(res, std::abs(cm(x) - measure_cdf(pair, x)));
      const double tol = check_tol(cfg, 1e-8);
      out.push_back({name, res, tol, res < tol});
    }
  }
  return out;
}

RunResult run_verify(const RunConfig& cfg, const MapInstance& map) {
  RunResult res;
  CsvWriter w;
  w.row({"check_name", "residual", "tolerance", "pass"});
  for (const Check& c : verify_checks(cfg, map)) {
    res.all_passed = res.all_passed && c.pass;
    w.row({c.name, format_real(c.residual), format_real(c.tolerance), c.pass ? "true" : "false"});
  }
  res.csv = std::move(w.text);
  return res;
}

RunResult run_ulam(const RunConfig& cfg, const MapInstance& map) {
  const UlamOperator op = ulam_matrix(map, cfg.cells, cfg.samples, cfg.seed);
  PowerIterationReport rep;
  const GridDensity d = stationary_density(op, {}, &rep);
  RunResult res;
  double worst_row = 0.0;
  for (int i = 0; i < op.n; ++i) worst_row = std::max(worst_row, std::abs(op.transitions.row(i).sum() - 1.0));
  const double mass_err = std::abs(d.mass() - 1.0);
  res.all_passed = worst_row <= 1e-12 && mass_err <= 1e-12;
  res.summary = {{"iterations", rep.iterations},   {"last_change", rep.last_change},
                 {"row_sum_error", worst_row},     {"mass_error", mass_err},
                 {"shifted_samples", op.shifted_samples}};
  CsvWriter w;
  w.row({"cell", "u", "x", "rho_u", "rho_x"});
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double u = d.center(i);
    w.row({std::to_string(i), format_real(u), format_real(d.chart.to_x(u)), format_real(d.values(i)),
           format_real(d.value_in_x(i))});
  }
  res.csv = std::move(w.text);
  return res;
}

RunResult run_koenigs(const RunConfig& cfg, const MapInstance& map) {
  const KoenigsSeries ks = koenigs_series(map, cfg.fixed_point, cfg.order);
  const Polyd resid = ks.composition_residual();
  // Relative to the coefficient scale so distant fixed points with large c_n compare fairly.
  const Polyd scale = (ks.multiplier * ks.coeffs).cwiseAbs().cwiseMax(1.0);
  const double worst = resid.cwiseAbs().cwiseQuotient(scale).maxCoeff(), tol = check_tol(cfg, 1e-10);
  RunResult res;
  res.all_passed = worst < tol;
  res.summary = {{"multiplier", ks.multiplier}, {"composition_residual", worst}, {"tolerance", tol}};
  CsvWriter w;
  w.row({"n", "c_n"});
  for (int n = 0; n <= ks.order(); ++n) w.row({std::to_string(n), format_real(ks.coeffs(n))});
  res.csv = std::move(w.text);
  return res;
}

std::string read_all(std::istream& in) { return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}; }

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Density: return "density";
    case Command::Measure: return "measure";
    case Command::Lyapunov: return "lyapunov";
    case Command::Verify: return "verify";
    case Command::Ulam: return "ulam";
    case Command::Koenigs: return "koenigs";
  }
  return "unknown";
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.14e", v);
  return buf;
}

std::string error_line(std::string_view kind, std::string_view message) {
  return json{{"error", kind}, {"message", message}}.dump();
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) raise(ErrorKind::Schema, "config must be a JSON object");
  reject_unknown(doc, "", {"map", "command", "method", "checks", "grid", "cells", "bins", "samples", "steps", "burn_in",
                           "seed", "order", "fixed_point", "tolerance", "output", "overwrite"});
  RunConfig cfg;
  if (!doc.contains("map")) schema("map", "required");
  if (!doc.contains("command") || !doc.at("command").is_string()) schema("command", "required string");
  cfg.command = parse_command(doc.at("command").get<std::string>());
  cfg.map = parse_map(doc.at("map"));
  const MapInstance map = make_map(cfg.map);  // constraint errors surface unchanged

  cfg.grid = static_cast<int>(get_int(doc, "grid", "", cfg.grid, 2));
  cfg.cells = static_cast<int>(get_int(doc, "cells", "", cfg.cells, 16));
  cfg.bins = static_cast<int>(get_int(doc, "bins", "", cfg.bins, 1));
  cfg.samples = static_cast<int>(get_int(doc, "samples", "", cfg.samples, 32));
  cfg.steps = get_int(doc, "steps", "", cfg.steps, 1);
  cfg.burn_in = get_int(doc, "burn_in", "", cfg.burn_in, 0);
  cfg.order = static_cast<int>(get_int(doc, "order", "", cfg.order, 1));
  cfg.fixed_point = get_real(doc, "fixed_point", "", cfg.fixed_point);
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (s.is_number_unsigned())
      cfg.seed = s.get<std::uint64_t>();
    else
      cfg.seed = static_cast<std::uint64_t>(get_int(doc, "seed", "", 0, 0));
  }
  if (doc.contains("tolerance")) {
    const double t = get_real(doc, "tolerance", "", 0.0);
    if (!(t >= 0.0)) schema("tolerance", "must be >= 0");
    cfg.tolerance = t;
  }
  if (doc.contains("output")) {
    if (!doc.at("output").is_string()) schema("output", "expected a string");
    cfg.output = doc.at("output").get<std::string>();
  }
  if (doc.contains("overwrite")) {
    if (!doc.at("overwrite").is_boolean()) schema("overwrite", "expected a boolean");
    cfg.overwrite = doc.at("overwrite").get<bool>();
  }

  cfg.methods = get_names(doc, "method");
  cfg.checks = get_names(doc, "checks");
  const bool boole = map.family() == Family::BooleLft;
  if (!cfg.checks.empty() && cfg.command != Command::Verify) schema("checks", "only valid for the verify command");

  switch (cfg.command) {
    case Command::Density:
    case Command::Measure:
      if (boole)
        raise(ErrorKind::InvalidParameter,
              std::string(to_string(cfg.command)) +
                  ": boole_lft has no invariant density; its attracting fixed point carries the physical measure, "
                  "so the 1/(1+x^2) density claim for it is not reproduced (run 'verify' for the measured divergence)");
      if (cfg.command == Command::Density) {
        if (cfg.methods.empty()) cfg.methods = {"analytic", "ulam"};
        require_subset(cfg.methods, {"analytic", "ulam", "histogram"}, "method");
        if (has(cfg.methods, "histogram") && cfg.cells % cfg.bins != 0)
          schema("bins", "must divide cells so histogram bins align with the rows");
      } else if (!cfg.methods.empty()) {
        require_subset(cfg.methods, {"analytic"}, "method");
      }
      break;
    case Command::Lyapunov:
      if (cfg.methods.empty()) cfg.methods = boole ? std::vector<std::string>{"birkhoff"}
                                                   : std::vector<std::string>{"quadrature", "birkhoff"};
      require_subset(cfg.methods, {"quadrature", "birkhoff"}, "method");
      if (boole && has(cfg.methods, "quadrature"))
        raise(ErrorKind::InvalidParameter, "lyapunov: quadrature needs an invariant density, which boole_lft lacks");
      break;
    case Command::Verify:
      if (!cfg.methods.empty()) schema("method", "not used by verify (use 'checks')");
      if (boole) {
        if (cfg.checks.empty()) cfg.checks = {"ulam_attractor_mass", "lyapunov_birkhoff_sign", "cauchy_density_claim_diverges"};
        require_subset(cfg.checks, {"ulam_attractor_mass", "lyapunov_birkhoff_sign", "cauchy_density_claim_diverges"},
                       "checks");
      } else {
        const bool conj = has_conjugator(map);
        if (cfg.checks.empty()) {
          if (conj) cfg.checks.push_back("conjugacy");
          for (const char* c : {"schroeder_derivative", "eigenvalue", "fp"}) cfg.checks.push_back(c);
          if (conj) cfg.checks.push_back("measure");
        }
        require_subset(cfg.checks, {"conjugacy", "schroeder_derivative", "eigenvalue", "fp", "measure"}, "checks");
        if (!conj && (has(cfg.checks, "conjugacy") || has(cfg.checks, "measure")))
          raise(ErrorKind::NoConjugator, std::string(to_string(map.family())) +
                                             " is its own piecewise-linear base; no conjugacy or measure check");
      }
      break;
    case Command::Ulam:
    case Command::Koenigs:
      if (!cfg.methods.empty()) schema("method", "not used by " + std::string(to_string(cfg.command)));
      break;
  }
  return cfg;
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(ErrorKind::Schema, std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

void apply_override(json& doc, std::string_view dotted_key, std::string_view value) {
  if (dotted_key.empty()) raise(ErrorKind::Schema, "empty override key");
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted_key.find('.', start);
    const std::string part(dotted_key.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
    if (part.empty()) raise(ErrorKind::Schema, "malformed override key '" + std::string(dotted_key) + "'");
    if (!node->is_object()) {
      if (!node->is_null()) raise(ErrorKind::Schema, "override '" + std::string(dotted_key) + "' descends into a non-object");
      *node = json::object();
    }
    node = &(*node)[part];
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  json parsed = json::parse(value, nullptr, false);
  *node = parsed.is_discarded() ? json(std::string(value)) : std::move(parsed);
}

RunResult execute(const RunConfig& config) {
  const MapInstance map = make_map(config.map);
  switch (config.command) {
    case Command::Density: return run_density(config, map);
    case Command::Measure: return run_measure(config, map);
    case Command::Lyapunov: return run_lyapunov(config, map);
    case Command::Verify: return run_verify(config, map);
    case Command::Ulam: return run_ulam(config, map);
    case Command::Koenigs: return run_koenigs(config, map);
  }
  raise(ErrorKind::Schema, "unknown command");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const RunResult res = execute(config);
    if (config.output.empty() || config.output == "-") {
      out << res.csv;
      out.flush();
    } else {
      // "x" makes creation exclusive, so concurrent runs never share a file.
      std::FILE* f = std::fopen(config.output.c_str(), config.overwrite ? "wb" : "wbx");
      if (!f)
        raise(ErrorKind::Io, "cannot create '" + config.output + "': " + std::strerror(errno) +
                                 (config.overwrite ? "" : " (set overwrite to replace an existing file)"));
      const bool ok = std::fwrite(res.csv.data(), 1, res.csv.size(), f) == res.csv.size();
      if (std::fclose(f) != 0 || !ok) raise(ErrorKind::Io, "write to '" + config.output + "' failed");
    }
    if (!res.summary.empty()) err << json{{"summary", res.summary}}.dump() << '\n';
    return res.all_passed ? 0 : 1;
  } catch (const Error& e) {
    err << error_line(to_string(e.kind()), e.what()) << '\n';
    return 2;
  }
}

int main(int argc, char** argv) {
  CLI::App app{"Invariant densities, measures and Lyapunov exponents of chaotic interval maps.\n"
               "Any config key can be overridden with --key value, using dots for nested keys (--map.r 3)."};
  app.allow_extras();
  std::string config_path;
  app.add_option("-c,--config", config_path, "JSON config file, '-' for stdin (a leading bare path works too)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_line("usage", e.what()) << '\n';
    return 2;
  }

  try {
    std::vector<std::string> extras = app.remaining();
    if (config_path.empty() && !extras.empty() && (extras.front() == "-" || extras.front().rfind("--", 0) != 0)) {
      config_path = extras.front();
      extras.erase(extras.begin());
    }
    json doc = json::object();
    if (!config_path.empty()) {
      std::string text;
      if (config_path == "-") {
        text = read_all(std::cin);
      } else {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) raise(ErrorKind::Io, "cannot read config '" + config_path + "'");
        text = read_all(in);
      }
      doc = json::parse(text, nullptr, false);
      if (doc.is_discarded()) raise(ErrorKind::Schema, "config '" + config_path + "' is not well-formed JSON");
    }
    for (std::size_t i = 0; i < extras.size(); ++i) {
      const std::string& tok = extras[i];
      if (tok.rfind("--", 0) != 0) raise(ErrorKind::Schema, "unexpected argument '" + tok + "'");
      const std::string body = tok.substr(2);
      const std::size_t eq = body.find('=');
      if (eq != std::string::npos) {
        apply_override(doc, body.substr(0, eq), body.substr(eq + 1));
      } else {
        if (i + 1 >= extras.size()) raise(ErrorKind::Schema, "override '" + tok + "' needs a value");
        apply_override(doc, body, extras[++i]);
      }
    }
    return run(parse_config(doc), std::cout, std::cerr);
  } catch (const Error& e) {
    std::cerr << error_line(to_string(e.kind()), e.what()) << '\n';
    return 2;
  }
}

}  // namespace schroder::cli
