#include "zeropack/report.hpp"

#include "zeropack/version.hpp"

namespace zeropack {

namespace {

void add_spec_fields(Json& j, const FunctionalSpec& spec) {
  j["geometry"] = to_string(spec.geometry);
  j["param"] = spec.param;
  j["alpha"] = spec.alpha;
  j["beta"] = spec.beta;
  j["starred"] = spec.starred;
}

cplx parse_coefficient(const Json& c) {
  if (c.is_number()) return {c.get<double>(), 0.0};
  if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
    return {c[0].get<double>(), c[1].get<double>()};
  }
  throw InvalidArgumentError("polynomial coefficient must be a number or [re, im]");
}

}  // namespace

const char* version() { return kVersion; }

Json polynomial_to_json(const ComplexPolynomial& p) {
  Json out = Json::array();
  for (const cplx c : p.coeffs()) out.push_back(Json::array({c.real(), c.imag()}));
  return out;
}

ComplexPolynomial polynomial_from_json(const Json& j) {
  if (j.is_object()) {
    for (const char* key : {"coefficients", "minimizer"}) {
      if (j.contains(key)) return polynomial_from_json(j.at(key));
    }
    throw InvalidArgumentError("polynomial object needs a \"coefficients\" member");
  }
  if (!j.is_array() || j.empty()) throw InvalidArgumentError("polynomial must be a non-empty coefficient list");
  std::vector<cplx> coeffs;
  coeffs.reserve(j.size());
  for (const auto& c : j) coeffs.push_back(parse_coefficient(c));
  return ComplexPolynomial(std::move(coeffs));
}

Json to_json(const DensityReport& report) {
  Json j;
  j["version"] = version();
  j["value"] = report.value;
  j["ell1"] = report.ell1;
  j["ell2"] = report.ell2;
  j["boundary_mass_l1"] = report.boundary_mass_l1;
  j["boundary_mass_l2"] = report.boundary_mass_l2;
  j["delta"] = report.delta;
  add_spec_fields(j, report.spec);
  j["grid_resolution"] = to_string(report.grid_resolution);
  j["grid_region"] = report.grid_region;
  return j;
}

Json to_json(const MinimizeResult& result, int degree_bound, const OptimizerConfig& config) {
  Json j;
  j["version"] = version();
  add_spec_fields(j, result.diagnostics.spec);
  j["degree"] = degree_bound;
  j["value"] = result.value;
  j["converged"] = result.converged;
  j["iterations"] = result.iterations;
  j["gradient_norm"] = result.gradient_norm;
  j["minimizer"] = polynomial_to_json(result.minimizer);
  j["minimizer_modulus"] = Json::array();
  for (const cplx c : result.minimizer.coeffs()) j["minimizer_modulus"].push_back(std::abs(c));
  j["seed"] = config.seed;
  j["restarts"] = config.restarts;
  j["restart_values"] = result.restart_values;
  j["best_restart"] = result.best_restart;
  j["grid_resolution"] = to_string(result.diagnostics.grid_resolution);
  Json diag = to_json(result.diagnostics);
  diag.erase("version");
  j["diagnostics"] = std::move(diag);
  return j;
}

Json to_json(const GapReport& report) {
  Json j;
  j["version"] = version();
  j["geometry"] = to_string(report.geometry);
  j["param"] = report.param;
  j["delta"] = report.delta;
  j["degree"] = report.degree;
  j["rho_unstarred"] = report.rho_unstarred;
  j["rho_starred_nu"] = report.rho_starred_nu;
  j["gap"] = report.gap;
  j["dbar_lhs"] = report.dbar_lhs;
  j["dbar_rhs"] = report.dbar_rhs;
  j["boundary_mass_l1"] = report.boundary_mass_l1;
  j["boundary_mass_l2"] = report.boundary_mass_l2;
  if (report.sigma_sq_estimate) {
    j["sigma_sq_estimate"] = *report.sigma_sq_estimate;
    j["sigma_sq_estimate_note"] = "upper-bound-derived estimate: 1 - rho_starred_nu";
  }
  if (report.exterior_mass_u) j["exterior_mass_u"] = *report.exterior_mass_u;
  if (report.l1_perturbation) j["l1_perturbation"] = *report.l1_perturbation;
  if (report.l2_perturbation) j["l2_perturbation"] = *report.l2_perturbation;
  j["converged"] = report.converged;
  j["minimizer"] = polynomial_to_json(report.minimizer);
  j["nu"] = polynomial_to_json(report.nu);
  j["grid_resolution"] = to_string(report.grid_resolution);
  return j;
}

Json to_json(const CorrectionResult& result, const CutoffSpec& cutoff, Geometry geometry, double param) {
  Json j;
  j["version"] = version();
  j["geometry"] = to_string(geometry);
  j["param"] = param;
  j["delta"] = cutoff.delta;
  j["cutoff_radius"] = cutoff.r;
  j["degree_bound"] = result.degree_bound;
  j["lhs"] = result.lhs;
  j["rhs"] = result.rhs;
  j["bound_holds"] = result.lhs <= result.rhs;
  j["orthogonality_residual"] = result.orthogonality_residual;
  j["nu"] = polynomial_to_json(result.nu);
  j["grid_nodes"] = result.nodes.size();
  return j;
}

Json to_json(const CellAverage& average, double theta, double beta, Resolution resolution) {
  Json j;
  j["version"] = version();
  j["theta"] = theta;
  j["beta"] = beta;
  j["scaled_value"] = average.scaled_value;
  j["unscaled_value"] = average.unscaled_value;
  j["optimal_scale"] = average.optimal_scale;
  j["mean_g"] = average.mean_g;
  j["mean_g2"] = average.mean_g2;
  j["grid_resolution"] = to_string(resolution);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace zeropack
