#include "zeropack/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "zeropack/report.hpp"

namespace zeropack::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string geometry;
  std::string r;
  std::string gamma;
  double beta = 1.0;
  double alpha = 1.0;
  bool starred = false;
  int degree = 0;
  double theta_min = std::numbers::pi / 3.0 - 0.3;
  double theta_max = std::numbers::pi / 3.0 + 0.3;
  int steps = 21;
  double theta = std::numbers::pi / 3.0;
  double delta = 0.0;
  std::string resolution;
  int jobs = 1;
  std::uint64_t seed = 1;
  int restarts = 3;
  int max_iterations = 20000;
  double tolerance = 1e-13;
  std::string method = "irls";
  std::string input;
  std::string out;
  std::string format = "json";
};

Geometry geometry_of(const Options& o) {
  if (o.geometry.empty()) throw UsageError("--geometry is required (hyperbolic or planar)");
  try {
    return parse_geometry(o.geometry);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

std::vector<double> params_of(const Options& o, Geometry g, bool allow_list) {
  const bool hyperbolic = g == Geometry::hyperbolic;
  const std::string& text = hyperbolic ? o.r : o.gamma;
  const std::string& other = hyperbolic ? o.gamma : o.r;
  const char* flag = hyperbolic ? "--r" : "--gamma";
  if (!other.empty()) {
    throw UsageError(std::string(hyperbolic ? "--gamma" : "--r") + " does not apply to the " +
                     to_string(g) + " geometry");
  }
  if (text.empty()) throw UsageError(std::string(flag) + " is required for the " + to_string(g) + " geometry");
  std::vector<double> values;
  try {
    values = parse_list(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
  if (values.empty()) throw UsageError(std::string(flag) + ": empty parameter list");
  if (!allow_list && values.size() != 1) throw UsageError(std::string(flag) + " takes a single value here");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) throw UsageError(std::string(flag) + ": sweep list must be strictly increasing");
  }
  return values;
}

Resolution resolution_of(const Options& o, Resolution fallback) {
  if (o.resolution.empty()) return fallback;
  try {
    return parse_resolution(o.resolution);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

OptimizerConfig optimizer_of(const Options& o) {
  OptimizerConfig c;
  c.max_iterations = o.max_iterations;
  c.tolerance = o.tolerance;
  c.seed = o.seed;
  c.restarts = o.restarts;
  c.jobs = o.jobs;
  if (o.method == "irls") {
    c.method = OptimizerMethod::irls;
  } else if (o.method == "gradient") {
    c.method = OptimizerMethod::gradient_descent;
  } else {
    throw UsageError("--method must be irls or gradient");
  }
  try {
    c.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return c;
}

FunctionalSpec spec_of(const Options& o, Geometry g, double param) {
  FunctionalSpec s{g, param, o.starred, o.alpha, o.beta};
  try {
    s.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return s;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Scalar members of a flat report as "key,value" rows.
std::string json_to_csv(const Json& j) {
  std::ostringstream os;
  os << "key,value\n";
  for (const auto& [k, v] : j.items()) {
    if (v.is_number_float()) {
      os << k << ',' << format_number(v.get<double>()) << '\n';
    } else if (v.is_number() || v.is_boolean()) {
      os << k << ',' << v.dump() << '\n';
    } else if (v.is_string()) {
      os << k << ',' << v.get<std::string>() << '\n';
    }
  }
  return os.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open output file '" + path + "'");
  file << text;
  file.flush();
  if (!file) throw IoError("failed writing output file '" + path + "'");
}

std::string render(const Json& j, const Options& o) {
  if (o.format == "json") return dump(j);
  if (o.format == "csv") return json_to_csv(j);
  throw UsageError("--format must be json or csv");
}

Json read_json_file(const std::string& path) {
  if (path.empty()) throw UsageError("--input is required");
  std::ifstream file(path);
  if (!file) throw IoError("cannot read input file '" + path + "'");
  try {
    return Json::parse(file);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("input file '" + path + "' is not valid JSON: " + e.what());
  }
}

int cmd_minimize(const Options& o, std::ostream& out, std::ostream& err) {
  const Geometry g = geometry_of(o);
  const double param = params_of(o, g, false).front();
  const FunctionalSpec spec = spec_of(o, g, param);
  const OptimizerConfig config = optimizer_of(o);
  const int n = o.degree > 0 ? o.degree : degree_schedule(g, param);
  const QuadratureGrid grid = functional_grid(spec, n, resolution_of(o, {}));
  const MinimizeResult result = minimize(spec, n, config, grid);
  write_text(o.out, render(to_json(result, n, config), o), out);
  if (!result.converged) {
    err << "zeropack: minimize did not converge (gradient norm " << format_number(result.gradient_norm) << ")\n";
    return kNotConverged;
  }
  return kOk;
}

int cmd_lattice_scan(const Options& o, std::ostream& out, std::ostream&) {
  if (o.steps < 2) throw UsageError("--steps must be at least 2");
  if (!(o.theta_min > 0.0 && o.theta_min < o.theta_max && o.theta_max < std::numbers::pi)) {
    throw UsageError("theta range must satisfy 0 < --theta-min < --theta-max < pi");
  }
  if (!(o.beta > 0.0)) throw UsageError("--beta must be positive");
  const Resolution res = resolution_of(o, {128, 128});
  const std::vector<ThetaValue> rows = theta_scan(o.theta_min, o.theta_max, o.steps, o.beta, res, o.jobs);

  const auto best = std::min_element(rows.begin(), rows.end(),
                                     [](const ThetaValue& a, const ThetaValue& b) { return a.value < b.value; });
  Json summary;
  summary["version"] = version();
  summary["beta"] = o.beta;
  summary["theta_min"] = o.theta_min;
  summary["theta_max"] = o.theta_max;
  summary["steps"] = o.steps;
  summary["grid_resolution"] = to_string(res);
  summary["argmin_theta"] = best->theta;
  summary["min_value"] = best->value;

  if (o.format == "json") {
    Json j = summary;
    j["rows"] = Json::array();
    for (const auto& row : rows) j["rows"].push_back({{"theta", row.theta}, {"value", row.value}});
    write_text(o.out, dump(j), out);
  } else if (o.format == "csv") {
    std::ostringstream csv;
    write_theta_scan_csv(csv, rows);
    write_text(o.out, csv.str(), out);
  } else {
    throw UsageError("--format must be json or csv");
  }
  if (!o.out.empty()) write_text(o.out + ".summary.json", dump(summary), out);
  return kOk;
}

int cmd_gap(const Options& o, std::ostream& out, std::ostream& err) {
  const Geometry g = geometry_of(o);
  const std::vector<double> params = params_of(o, g, true);
  GapOptions options;
  options.optimizer = optimizer_of(o);
  options.resolution = resolution_of(o, {});
  options.degree = o.degree;
  options.delta = o.delta;
  if (o.delta != 0.0 && !(o.delta > 0.0 && o.delta < 1.0)) throw UsageError("--delta must lie in (0,1)");
  const std::vector<GapReport> reports = equality_gap_sweep(g, params, options, o.jobs);

  bool all_converged = true;
  Json j;
  j["version"] = version();
  j["geometry"] = to_string(g);
  j["grid_resolution"] = to_string(options.resolution);
  j["reports"] = Json::array();
  Json gaps = Json::array();
  for (const auto& rep : reports) {
    j["reports"].push_back(to_json(rep));
    gaps.push_back(rep.gap);
    all_converged = all_converged && rep.converged;
  }
  Json summary;
  summary["params"] = params;
  summary["gaps"] = gaps;
  summary["gap_decreasing"] = reports.size() < 2 || reports.back().gap < reports.front().gap;
  summary["all_dbar_bounds_hold"] =
      std::all_of(reports.begin(), reports.end(), [](const GapReport& r) { return r.dbar_lhs <= r.dbar_rhs; });
  j["summary"] = std::move(summary);

  if (o.format == "json") {
    write_text(o.out, dump(j), out);
  } else if (o.format == "csv") {
    std::ostringstream os;
    os << "param,delta,degree,rho_unstarred,rho_starred_nu,gap,dbar_lhs,dbar_rhs,boundary_mass_l1,boundary_mass_l2\n";
    for (const auto& r : reports) {
      os << format_number(r.param) << ',' << format_number(r.delta) << ',' << r.degree << ','
         << format_number(r.rho_unstarred) << ',' << format_number(r.rho_starred_nu) << ',' << format_number(r.gap)
         << ',' << format_number(r.dbar_lhs) << ',' << format_number(r.dbar_rhs) << ','
         << format_number(r.boundary_mass_l1) << ',' << format_number(r.boundary_mass_l2) << '\n';
    }
    write_text(o.out, os.str(), out);
  } else {
    throw UsageError("--format must be json or csv");
  }
  if (!all_converged) {
    err << "zeropack: at least one gap minimization did not converge\n";
    return kNotConverged;
  }
  return kOk;
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream&) {
  const Geometry g = geometry_of(o);
  const double param = params_of(o, g, false).front();
  const FunctionalSpec spec = spec_of(o, g, param);
  ComplexPolynomial f;
  try {
    f = polynomial_from_json(read_json_file(o.input));
  } catch (const InvalidArgumentError& e) {
    throw UsageError(e.what());
  }
  const int n = std::max(f.size(), 1);
  const QuadratureGrid grid = functional_grid(spec, n, resolution_of(o, {}));
  DensityReport report = density(f, spec, grid);
  Json j = to_json(report);
  if (spec.alpha != 1.0 && !spec.starred) j["value"] = density_dilated(f, spec, grid);
  j["polynomial"] = polynomial_to_json(f);
  write_text(o.out, render(j, o), out);
  return kOk;
}

int cmd_dbar_check(const Options& o, std::ostream& out, std::ostream& err) {
  const Geometry g = geometry_of(o);
  const double param = params_of(o, g, false).front();
  const FunctionalSpec spec = spec_of(o, g, param);
  ComplexPolynomial f;
  try {
    f = polynomial_from_json(read_json_file(o.input));
  } catch (const InvalidArgumentError& e) {
    throw UsageError(e.what());
  }
  const CutoffSpec cut{o.delta > 0.0 ? o.delta : spec.default_delta(), spec.region_radius()};
  try {
    cut.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const CorrectionResult result = minimal_correction(f, cut, g, param, o.degree, resolution_of(o, {}));
  write_text(o.out, render(to_json(result, cut, g, param), o), out);
  if (!(result.lhs <= result.rhs)) {
    err << "zeropack: dbar bound violated (lhs " << format_number(result.lhs) << " > rhs "
        << format_number(result.rhs) << ")\n";
    return kFailure;
  }
  return kOk;
}

void add_geometry(CLI::App* app, Options& o, bool lists) {
  app->add_option("--geometry", o.geometry, "hyperbolic or planar");
  app->add_option("--r", o.r, lists ? "disk radius(es) in (0,1), comma-separated" : "disk radius in (0,1)");
  app->add_option("--gamma", o.gamma, lists ? "planar scale(s), comma-separated" : "planar scale gamma > 0");
  app->add_option("--degree", o.degree, "degree bound n (polynomials of degree < n); default from schedule");
  app->add_option("--resolution", o.resolution, "grid resolution NRADxNANG");
}

void add_optimizer(CLI::App* app, Options& o) {
  app->add_option("--seed", o.seed, "random seed for restarts");
  app->add_option("--restarts", o.restarts, "number of optimizer restarts");
  app->add_option("--max-iterations", o.max_iterations, "iteration cap per restart");
  app->add_option("--tolerance", o.tolerance, "relative decrease tolerance");
  app->add_option("--method", o.method, "irls or gradient");
}

void add_output(CLI::App* app, Options& o) {
  app->add_option("--out", o.out, "output path (default: stdout)");
  app->add_option("--format", o.format, "json or csv");
  app->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: '" + item + "'");
    }
    if (used != item.size() || !std::isfinite(v)) throw std::invalid_argument("not a number: '" + item + "'");
    values.push_back(v);
  }
  return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"zeropack: polynomial discrepancy densities, lattice candidates and dbar checks", "zeropack"};
  app.set_config("--config", "", "flat key = value file mirroring the flags");
  app.require_subcommand(1);
  Options o;

  auto* minimize_cmd = app.add_subcommand("minimize", "minimize the functional over Pol_n");
  add_geometry(minimize_cmd, o, false);
  minimize_cmd->add_option("--beta", o.beta, "exponent on |f| (planar)");
  minimize_cmd->add_option("--alpha", o.alpha, "weight dilation");
  minimize_cmd->add_flag("--starred", o.starred, "use the tight functional");
  add_optimizer(minimize_cmd, o);
  add_output(minimize_cmd, o);

  auto* scan_cmd = app.add_subcommand("lattice-scan", "cell averages of lattice candidates over theta");
  scan_cmd->add_option("--beta", o.beta, "exponent beta");
  scan_cmd->add_option("--theta-min", o.theta_min, "first lattice angle");
  scan_cmd->add_option("--theta-max", o.theta_max, "last lattice angle");
  scan_cmd->add_option("--steps", o.steps, "number of angles (>= 2)");
  scan_cmd->add_option("--resolution", o.resolution, "cell grid NUxNV (default 128x128)");
  add_output(scan_cmd, o);
  o.format = "json";

  auto* gap_cmd = app.add_subcommand("gap", "tight-vs-plain functional gap via the dbar correction");
  add_geometry(gap_cmd, o, true);
  gap_cmd->add_option("--delta", o.delta, "cut-off width (default per geometry)");
  add_optimizer(gap_cmd, o);
  add_output(gap_cmd, o);

  auto* eval_cmd = app.add_subcommand("eval", "evaluate the functional for a polynomial from a JSON file");
  add_geometry(eval_cmd, o, false);
  eval_cmd->add_option("--input", o.input, "polynomial JSON ([[re, im], ...])");
  eval_cmd->add_option("--beta", o.beta, "exponent on |f| (planar)");
  eval_cmd->add_option("--alpha", o.alpha, "weight dilation");
  eval_cmd->add_flag("--starred", o.starred, "use the tight functional");
  add_output(eval_cmd, o);

  auto* dbar_cmd = app.add_subcommand("dbar-check", "minimal dbar correction for a polynomial");
  add_geometry(dbar_cmd, o, false);
  dbar_cmd->add_option("--input", o.input, "polynomial JSON ([[re, im], ...])");
  dbar_cmd->add_option("--delta", o.delta, "cut-off width (default per geometry)");
  add_output(dbar_cmd, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "zeropack: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }

  // lattice-scan defaults to CSV unless asked otherwise.
  if (scan_cmd->parsed() && scan_cmd->count("--format") == 0) o.format = "csv";

  try {
    if (minimize_cmd->parsed()) return cmd_minimize(o, out, err);
    if (scan_cmd->parsed()) return cmd_lattice_scan(o, out, err);
    if (gap_cmd->parsed()) return cmd_gap(o, out, err);
    if (eval_cmd->parsed()) return cmd_eval(o, out, err);
    if (dbar_cmd->parsed()) return cmd_dbar_check(o, out, err);
  } catch (const UsageError& e) {
    err << "zeropack: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  } catch (const IoError& e) {
    err << "zeropack: " << e.what() << '\n';
    return kIoError;
  } catch (const InvalidArgumentError& e) {
    err << "zeropack: " << e.what() << '\n';
    return kUsageError;
  } catch (const InvalidLatticeError& e) {
    err << "zeropack: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "zeropack: " << e.what() << '\n';
    return kFailure;
  }
  return kUsageError;
}

}  // namespace zeropack::cli
