#pragma once

// Cut-off functions and the minimal-norm dbar-correction.
//
// For a polynomial f and the cut-off chi, the minimal solution of
// dbar u = dbar(chi f) in the weighted space with polynomial growth is
// u = chi f - P(chi f), where P projects onto Pol_n in L^2(e^{-phi}).
// nu = P(chi f) is then the polynomial that replaces f in the tight
// functional.

#include <optional>
#include <span>
#include <vector>

#include "zeropack/functionals.hpp"
#include "zeropack/optimize.hpp"

namespace zeropack {

struct CutoffSpec {
  double delta = 0.1;
  /// Outer radius; 1 in the planar setting.
  double r = 1.0;

  void validate() const;
};

/// 1 on |z| <= (1-delta) r, (1/delta - |z|/(delta r))^2 on the annulus, 0 beyond.
double cutoff(cplx z, const CutoffSpec& spec);
/// dbar chi = chi'(|z|) z / (2|z|), chi'(t) = -2 (r - t)/(delta r)^2 on the annulus.
cplx dbar_cutoff(cplx z, const CutoffSpec& spec);

/// Weight tag matching a geometry: (1-|z|^2) on D, or e^{-2 gamma |z|^2}.
WeightTag weight_for(Geometry geometry, double param);

/// Weighted L^2 projection of grid samples onto Pol_n. `samples[i]` belongs
/// to grid.nodes()[i].
ComplexPolynomial project_polynomial(std::span<const cplx> samples, const WeightTag& weight, int n,
                                     const QuadratureGrid& grid);

/// <g, z^k>_phi for k < n on the grid.
std::vector<cplx> weighted_moments(std::span<const cplx> samples, const WeightTag& weight, int n,
                                   const QuadratureGrid& grid);

/// Grid for the correction problem: the unit disk (hyperbolic) or the
/// truncated plane (planar), split on both cut-off circles.
QuadratureGrid correction_grid(Geometry geometry, double param, const CutoffSpec& cutoff, int n,
                               Resolution res = {});

struct CorrectionResult {
  std::vector<cplx> nodes;
  std::vector<cplx> u_values;
  ComplexPolynomial nu;
  /// int |u|^2 e^{-phi} dA.
  double lhs = 0.0;
  /// The bound: int_A |dbar chi|^2 |f|^2 (1-|z|^2)^3 dA (hyperbolic) or
  /// (1/(2 gamma)) int_A |dbar chi|^2 |f|^2 e^{-2 gamma |z|^2} dA (planar).
  double rhs = 0.0;
  int degree_bound = 0;
  /// max_k |<u, z^k>| / (||u|| ||z^k||); 0 for u = 0.
  double orthogonality_residual = 0.0;
};

/// Minimal correction with degree bound n (0 selects the degree schedule).
CorrectionResult minimal_correction(const ComplexPolynomial& f, const CutoffSpec& cutoff,
                                    Geometry geometry, double param, int n = 0,
                                    Resolution res = {});

/// Obstacle function: 2 gamma |z|^2 on D and 2 gamma log|z|^2 + 2 gamma off D
/// (planar); log(1/(1-|z|^2)) on D(0,r) and
/// (r^2/(1-r^2)) log(|z|^2/r^2) + log(1/(1-r^2)) off it (hyperbolic).
double obstacle_function(Geometry geometry, double param, cplx z);

struct GapReport {
  Geometry geometry = Geometry::hyperbolic;
  double param = 0.0;
  double delta = 0.0;
  int degree = 0;
  double rho_unstarred = 0.0;
  double rho_starred_nu = 0.0;
  double gap = 0.0;
  double dbar_lhs = 0.0;
  double dbar_rhs = 0.0;
  double boundary_mass_l1 = 0.0;
  double boundary_mass_l2 = 0.0;
  /// Planar only: int_{C \ D} |u|^2 e^{-2 gamma |z|^2} dA,
  /// |int_D (|nu| - |f|) e^{-gamma |z|^2} dA| and
  /// |int_D (|nu|^2 - |f|^2) e^{-2 gamma |z|^2} dA|.
  std::optional<double> exterior_mass_u;
  std::optional<double> l1_perturbation;
  std::optional<double> l2_perturbation;
  /// Hyperbolic only: 1 - rho_starred_nu.
  std::optional<double> sigma_sq_estimate;
  bool converged = false;
  ComplexPolynomial minimizer;
  ComplexPolynomial nu;
  Resolution grid_resolution;
};

struct GapOptions {
  OptimizerConfig optimizer;
  Resolution resolution{};
  /// Degree override; 0 selects the schedule.
  int degree = 0;
  /// Cut-off width override; 0 selects the geometry default.
  double delta = 0.0;
};

GapReport equality_gap(Geometry geometry, double param, const GapOptions& options);

/// One report per parameter, in input order, up to `jobs` at a time.
std::vector<GapReport> equality_gap_sweep(Geometry geometry, std::span<const double> params,
                                          const GapOptions& options, int jobs);

}  // namespace zeropack
