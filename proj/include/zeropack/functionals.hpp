#pragma once

// Discrepancy functionals over polynomials.
//
// Hyperbolic, radius r in (0,1):
//   rho_r(f)  = (1/L) int_{D(0,r)} ((1-|z|^2)|f| - 1)^2 dA/(1-|z|^2),
//   rho*_r(f) = same integrand with the indicator of D(0,r), integrated over D,
//   L = log(1/(1-r^2)).
// Planar, gamma > 0 (the gamma = R^2 form):
//   rho_g(f)  = int_D (|f| e^{-gamma|z|^2} - 1)^2 dA,
//   rho*_g(f) = int_C (|f| e^{-gamma|z|^2} - 1_D)^2 dA.
// Every functional is a sum over quadrature nodes of
//   mu_i (w_i |f(z_i)|^beta - ind_i)^2,
// which FunctionalSampling stores explicitly.

#include <string>
#include <vector>

#include "zeropack/poly.hpp"
#include "zeropack/quadrature.hpp"

namespace zeropack {

enum class Geometry { hyperbolic, planar };

std::string to_string(Geometry g);
Geometry parse_geometry(const std::string& text);

struct FunctionalSpec {
  Geometry geometry = Geometry::hyperbolic;
  /// r for hyperbolic, gamma for planar.
  double param = 0.5;
  bool starred = false;
  /// Dilation of the weight; hyperbolic requires 0 < alpha <= 1.
  double alpha = 1.0;
  /// Exponent on |f|; only meaningful for planar.
  double beta = 1.0;

  static FunctionalSpec hyperbolic(double r, bool starred = false) {
    return {Geometry::hyperbolic, r, starred, 1.0, 1.0};
  }
  static FunctionalSpec planar(double gamma, bool starred = false, double beta = 1.0) {
    return {Geometry::planar, gamma, starred, 1.0, beta};
  }

  /// Throws InvalidArgumentError when a parameter is out of range.
  void validate() const;
  /// Radius of the indicator region: r (hyperbolic) or 1 (planar).
  double region_radius() const;
  /// Default boundary-layer width: 1 - r (hyperbolic), min(gamma^{-1/2}, 1/2) (planar).
  double default_delta() const;
};

/// log(1/(1-r^2)), the hyperbolic normalizer.
double hyperbolic_normalizer(double r);

/// R_cut = max(3, sqrt((n ln(10 n) + 40) / (2 gamma))).
double planar_cutoff_radius(int degree_bound, double gamma);

/// A grid suited to the spec: the right region, with radial splits on every
/// circle where an indicator jumps (region boundary and the boundary layer).
QuadratureGrid functional_grid(const FunctionalSpec& spec, int degree_bound, Resolution res);

struct FunctionalSampling {
  std::vector<cplx> nodes;
  std::vector<double> measure;    // quadrature weight times dmu/dA
  std::vector<double> weight;     // w(z) multiplying |f|^beta
  std::vector<double> indicator;  // 1 inside the region, 0 outside
  double beta = 1.0;
};

/// Restricts the grid to the nodes the spec integrates over. Throws
/// ConfigurationError when the grid does not cover the required region.
FunctionalSampling sample_functional(const FunctionalSpec& spec, const QuadratureGrid& grid);

struct DensityReport {
  double value = 0.0;
  double ell1 = 0.0;
  double ell2 = 0.0;
  double boundary_mass_l1 = 0.0;
  double boundary_mass_l2 = 0.0;
  double delta = 0.0;
  FunctionalSpec spec;
  Resolution grid_resolution;
  std::string grid_region;
};

/// Squared pointwise mismatch; points with |z| equal to the region radius
/// count as outside.
double discrepancy(const ComplexPolynomial& f, cplx z, const FunctionalSpec& spec);

/// Functional value with diagnostics.
DensityReport density(const ComplexPolynomial& f, const FunctionalSpec& spec,
                      const QuadratureGrid& grid);

/// Value of the alpha-dilated functional (spec.alpha). Unstarred only.
double density_dilated(const ComplexPolynomial& f, const FunctionalSpec& spec,
                       const QuadratureGrid& grid);

/// ell_{k,r} = (1/L) int_{D(0,r)} |f|^k (1-|z|^2)^{k-1} dA.
double ell(const ComplexPolynomial& f, double r, int k, const QuadratureGrid& grid);

/// Annulus mass of |f|^p next to the region boundary:
///   hyperbolic (1/L) int_{A((1-delta)r, r)} |f|^p (1-|z|^2)^{p-1} dA,
///   planar     int_{A(1-delta, 1)} |f|^p e^{-p gamma |z|^2} dA.
double boundary_mass(const ComplexPolynomial& f, Geometry geometry, double param, double delta,
                     int p, const QuadratureGrid& grid);

struct GradientResult {
  /// d rho / d Re c_0, d rho / d Im c_0, d rho / d Re c_1, ...
  std::vector<double> values;
  /// True when |f| < 1e-14 at some node; that node's contribution is dropped.
  bool subgradient = false;

  double norm() const;
};

GradientResult gradient(const ComplexPolynomial& f, const FunctionalSpec& spec,
                        const QuadratureGrid& grid);

/// Evaluates a functional repeatedly for polynomials of a fixed degree bound.
/// Caches the monomial values at the integration nodes.
class FunctionalEvaluator {
 public:
  FunctionalEvaluator(const FunctionalSpec& spec, const QuadratureGrid& grid, int degree_bound);

  const FunctionalSpec& spec() const { return spec_; }
  const FunctionalSampling& sampling() const { return sampling_; }
  int degree_bound() const { return n_; }
  const Eigen::MatrixXcd& basis() const { return basis_; }

  Eigen::VectorXcd values(const Eigen::VectorXcd& c) const;
  double value(const Eigen::VectorXcd& c) const;
  GradientResult gradient(const Eigen::VectorXcd& c) const;

  struct Moments {
    double linear = 0.0;     // sum mu w |f|^beta ind
    double quadratic = 0.0;  // sum mu w^2 |f|^{2 beta}
    double constant = 0.0;   // sum mu ind
  };
  /// rho(t f) = t^{2 beta} quadratic - 2 t^beta linear + constant.
  Moments moments(const Eigen::VectorXcd& c) const;

  /// t > 0 minimizing rho(t f). Throws UndefinedScaleError for f = 0.
  double optimal_scale(const Eigen::VectorXcd& c) const;

  Eigen::VectorXcd coefficients(const ComplexPolynomial& f) const;

 private:
  FunctionalSpec spec_;
  FunctionalSampling sampling_;
  int n_;
  Eigen::MatrixXcd basis_;
};

}  // namespace zeropack
