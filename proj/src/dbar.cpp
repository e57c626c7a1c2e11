#include "zeropack/dbar.hpp"

#include <algorithm>
#include <cmath>

#include "zeropack/parallel.hpp"

namespace zeropack {

namespace {

bool in_annulus(double rho, const CutoffSpec& c) { return rho >= (1.0 - c.delta) * c.r && rho <= c.r; }

void validate_param(Geometry geometry, double param) {
  if (geometry == Geometry::hyperbolic) {
    if (!(param > 0.0 && param < 1.0)) throw InvalidArgumentError("hyperbolic radius r must lie in (0,1)");
  } else if (!(param > 0.0) || !std::isfinite(param)) {
    throw InvalidArgumentError("planar gamma must be positive");
  }
}

// Entries of diag(W e^{-phi}) for the grid.
std::vector<double> weighted_measure(const WeightTag& weight, const QuadratureGrid& grid) {
  std::vector<double> m(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) m[i] = grid.weights()[i] * weight_value(weight, grid.nodes()[i]);
  return m;
}

}  // namespace

void CutoffSpec::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgumentError("cut-off delta must lie in (0,1)");
  if (!(r > 0.0 && r <= 1.0)) throw InvalidArgumentError("cut-off radius must lie in (0,1]");
}

double cutoff(cplx z, const CutoffSpec& spec) {
  const double rho = std::abs(z);
  if (rho <= (1.0 - spec.delta) * spec.r) return 1.0;
  if (rho >= spec.r) return 0.0;
  const double t = 1.0 / spec.delta - rho / (spec.delta * spec.r);
  return t * t;
}

cplx dbar_cutoff(cplx z, const CutoffSpec& spec) {
  const double rho = std::abs(z);
  if (rho == 0.0 || !in_annulus(rho, spec)) return 0.0;
  const double dr = spec.delta * spec.r;
  const double derivative = -2.0 * (spec.r - rho) / (dr * dr);
  return derivative * z / (2.0 * rho);
}

WeightTag weight_for(Geometry geometry, double param) {
  if (geometry == Geometry::hyperbolic) return HyperbolicWeight{};
  return PlanarWeight{param};
}

std::vector<cplx> weighted_moments(std::span<const cplx> samples, const WeightTag& weight, int n,
                                   const QuadratureGrid& grid) {
  if (samples.size() != grid.size()) throw InvalidArgumentError("one sample per grid node is required");
  const Eigen::MatrixXcd v = vandermonde(grid.nodes(), n);
  const std::vector<double> m = weighted_measure(weight, grid);
  Eigen::VectorXcd g(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(samples[i].real()) || !std::isfinite(samples[i].imag())) {
      throw NumericError("non-finite sample", grid.nodes()[i]);
    }
    g(static_cast<Eigen::Index>(i)) = m[i] * samples[i];
  }
  const Eigen::VectorXcd b = v.adjoint() * g;
  return {b.data(), b.data() + b.size()};
}

ComplexPolynomial project_polynomial(std::span<const cplx> samples, const WeightTag& weight, int n,
                                     const QuadratureGrid& grid) {
  const WeightedGram g = gram(weight, n, grid);
  const std::vector<cplx> b = weighted_moments(samples, weight, n, grid);
  const Eigen::VectorXcd c = g.solve(Eigen::Map<const Eigen::VectorXcd>(b.data(), n));
  return ComplexPolynomial(std::vector<cplx>(c.data(), c.data() + c.size()));
}

QuadratureGrid correction_grid(Geometry geometry, double param, const CutoffSpec& cutoff, int n,
                               Resolution res) {
  const std::vector<double> splits{(1.0 - cutoff.delta) * cutoff.r, cutoff.r};
  if (geometry == Geometry::hyperbolic) return build_grid(Disk{{}, 1.0}, res, splits);
  return build_grid(TruncatedPlane{planar_cutoff_radius(n, param)}, res, splits);
}

CorrectionResult minimal_correction(const ComplexPolynomial& f, const CutoffSpec& cutoff_spec,
                                    Geometry geometry, double param, int n, Resolution res) {
  validate_param(geometry, param);
  cutoff_spec.validate();
  if (geometry == Geometry::planar && cutoff_spec.r != 1.0) {
    throw InvalidArgumentError("planar cut-off must have r = 1");
  }
  if (n <= 0) n = degree_schedule(geometry, param);
  const WeightTag weight = weight_for(geometry, param);
  const QuadratureGrid grid = correction_grid(geometry, param, cutoff_spec, n, res);

  std::vector<cplx> chi_f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cplx z = grid.nodes()[i];
    const double chi = cutoff(z, cutoff_spec);
    chi_f[i] = chi == 0.0 ? cplx{} : chi * f(z);
  }

  CorrectionResult out;
  out.degree_bound = n;
  out.nu = project_polynomial(chi_f, weight, n, grid);
  out.nodes.assign(grid.nodes().begin(), grid.nodes().end());
  out.u_values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out.u_values[i] = chi_f[i] - out.nu(grid.nodes()[i]);

  std::vector<double> lhs_terms(grid.size()), rhs_terms(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cplx z = grid.nodes()[i];
    const double w = grid.weights()[i];
    lhs_terms[i] = w * std::norm(out.u_values[i]) * weight_value(weight, z);
    const double d = std::norm(dbar_cutoff(z, cutoff_spec));
    if (d == 0.0) continue;
    const double m = std::norm(z);
    const double decay = geometry == Geometry::hyperbolic ? std::pow(1.0 - m, 3) : std::exp(-2.0 * param * m);
    rhs_terms[i] = w * d * std::norm(f(z)) * decay;
  }
  out.lhs = pairwise_sum(lhs_terms);
  out.rhs = pairwise_sum(rhs_terms);
  if (geometry == Geometry::planar) out.rhs /= 2.0 * param;

  if (out.lhs > 0.0) {
    const WeightedGram g = gram(weight, n, grid);
    const std::vector<cplx> moments = weighted_moments(out.u_values, weight, n, grid);
    const double norm_u = std::sqrt(out.lhs);
    for (int k = 0; k < n; ++k) {
      const double norm_zk = std::sqrt(g(k, k).real());
      out.orthogonality_residual = std::max(out.orthogonality_residual, std::abs(moments[k]) / (norm_u * norm_zk));
    }
  }
  return out;
}

double obstacle_function(Geometry geometry, double param, cplx z) {
  validate_param(geometry, param);
  const double m = std::norm(z);
  if (geometry == Geometry::planar) {
    return m <= 1.0 ? 2.0 * param * m : 2.0 * param * std::log(m) + 2.0 * param;
  }
  const double r2 = param * param;
  if (m <= r2) return -std::log1p(-m);
  return r2 / (1.0 - r2) * std::log(m / r2) - std::log1p(-r2);
}

GapReport equality_gap(Geometry geometry, double param, const GapOptions& options) {
  validate_param(geometry, param);
  const FunctionalSpec spec = geometry == Geometry::hyperbolic ? FunctionalSpec::hyperbolic(param)
                                                                : FunctionalSpec::planar(param);
  const FunctionalSpec starred = geometry == Geometry::hyperbolic ? FunctionalSpec::hyperbolic(param, true)
                                                                  : FunctionalSpec::planar(param, true);
  const int n = options.degree > 0 ? options.degree : degree_schedule(geometry, param);
  const double delta = options.delta > 0.0 ? options.delta : spec.default_delta();

  const QuadratureGrid grid = functional_grid(spec, n, options.resolution);
  const MinimizeResult best = minimize(spec, n, options.optimizer, grid);

  const CutoffSpec cut{delta, spec.region_radius()};
  const CorrectionResult corr = minimal_correction(best.minimizer, cut, geometry, param, n, options.resolution);
  const QuadratureGrid starred_grid = functional_grid(starred, n, options.resolution);

  GapReport out;
  out.geometry = geometry;
  out.param = param;
  out.delta = delta;
  out.degree = n;
  out.rho_unstarred = best.value;
  out.rho_starred_nu = density(corr.nu, starred, starred_grid).value;
  out.gap = out.rho_starred_nu - out.rho_unstarred;
  out.dbar_lhs = corr.lhs;
  out.dbar_rhs = corr.rhs;
  out.converged = best.converged;
  out.minimizer = best.minimizer;
  out.nu = corr.nu;
  out.grid_resolution = options.resolution;

  const QuadratureGrid layer = correction_grid(geometry, param, cut, n, options.resolution);
  out.boundary_mass_l1 = boundary_mass(best.minimizer, geometry, param, delta, 1, layer);
  out.boundary_mass_l2 = boundary_mass(best.minimizer, geometry, param, delta, 2, layer);

  if (geometry == Geometry::hyperbolic) {
    out.sigma_sq_estimate = 1.0 - out.rho_starred_nu;
  } else {
    // The correction grid and `layer` coincide, so u can be read off node by node.
    std::vector<double> ext(layer.size()), l1(layer.size()), l2(layer.size());
    for (std::size_t i = 0; i < layer.size(); ++i) {
      const cplx z = layer.nodes()[i];
      const double m = std::norm(z);
      const double w = layer.weights()[i];
      const double e = std::exp(-param * m);
      if (m >= 1.0) {
        ext[i] = w * std::norm(corr.u_values[i]) * e * e;
        continue;
      }
      const double a = std::abs(corr.nu(z));
      const double b = std::abs(best.minimizer(z));
      l1[i] = w * (a - b) * e;
      l2[i] = w * (a * a - b * b) * e * e;
    }
    out.exterior_mass_u = pairwise_sum(ext);
    out.l1_perturbation = std::abs(pairwise_sum(l1));
    out.l2_perturbation = std::abs(pairwise_sum(l2));
  }
  return out;
}

std::vector<GapReport> equality_gap_sweep(Geometry geometry, std::span<const double> params,
                                          const GapOptions& options, int jobs) {
  GapOptions inner = options;
  if (jobs > 1) inner.optimizer.jobs = 1;
  return parallel_map(static_cast<int>(params.size()), jobs,
                      [&](int k) { return equality_gap(geometry, params[k], inner); });
}

}  // namespace zeropack
