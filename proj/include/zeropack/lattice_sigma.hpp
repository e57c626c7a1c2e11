#pragma once

// Weierstrass sigma machinery for lattices 2 omega1 Z + 2 omega2 Z and the
// doubly periodic densities |e^{nu z^2} sigma(z)|^beta e^{-|z|^2} built from it.

#include <iosfwd>
#include <vector>

#include "zeropack/quadrature.hpp"

namespace zeropack {

struct Lattice {
  cplx omega1;
  cplx omega2;
  /// arg(omega2 / omega1).
  double theta = 0.0;
  /// zeta(omega1), zeta(omega2).
  cplx eta1;
  cplx eta2;
  /// omega2 / omega1, Im tau > 0.
  cplx tau;

  /// eta1 omega2 - eta2 omega1 - i pi/2; zero up to rounding.
  cplx legendre_defect() const;
  /// Euclidean area of the fundamental cell.
  double cell_area() const;
};

struct ThetaSeries {
  cplx value;       // theta_1(v | tau)
  int terms = 0;
};

/// theta_1(v | tau) = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) v),
/// q = e^{i pi tau}; truncated once terms drop below 1e-18 of the sum.
ThetaSeries theta1(cplx v, cplx tau);
/// theta_1'(0 | tau) and theta_1'''(0 | tau).
std::pair<cplx, cplx> theta1_derivatives_at_zero(cplx tau);

/// zeta(omega) for the half-period omega of a lattice whose other generator
/// makes tau = omega_other / omega with Im tau > 0:
///   eta = -(pi^2 / (12 omega)) theta_1'''(0|tau) / theta_1'(0|tau).
cplx eta_from_theta_series(cplx omega, cplx tau);

/// Lattice with the given half-periods. eta1 and eta2 come from two separate
/// theta series (bases (omega1, omega2) and (omega2, -omega1)), so the
/// Legendre relation is a genuine check.
Lattice make_lattice(cplx omega1, cplx omega2);

/// omega2 = omega1 e^{i theta}, omega1 > 0 fixed by Im(conj(omega1) omega2) = pi beta / 8.
Lattice lattice_normalize(double theta, double beta);

/// Weierstrass sigma: (2 omega1/pi) e^{eta1 z^2/(2 omega1)} theta_1(pi z/(2 omega1)) / theta_1'(0).
cplx sigma(cplx z, const Lattice& lattice);

struct QuasiperiodicCandidate {
  Lattice lattice;
  cplx nu;
  double beta = 1.0;
  double scale = 1.0;

  /// f0(z) = e^{nu z^2} sigma(z).
  cplx f0(cplx z) const;
  /// g(z) = scale |f0(z)|^beta e^{-|z|^2}.
  double density(cplx z) const;
  /// max over `samples` cell points and j = 1, 2 of |g(z + 2 omega_j) - g(z)|,
  /// divided by the largest sampled g.
  double periodicity_residual(int samples = 1000) const;
};

/// Solves beta (4 nu omega_j + 2 eta_j) = 4 conj(omega_j) for j = 1, 2.
/// Throws NormalizationError when the two solutions disagree (the lattice
/// was not normalized for this beta) or the periodicity check fails.
QuasiperiodicCandidate abrikosov_candidate(const Lattice& lattice, double beta);

struct CellAverage {
  /// Cell mean of (s g - 1)^2 at the optimal s.
  double scaled_value = 0.0;
  /// Same with s = candidate.scale.
  double unscaled_value = 0.0;
  double optimal_scale = 0.0;
  double mean_g = 0.0;
  double mean_g2 = 0.0;
};

/// Cell means of g and g^2 on an (n_u, n_v) midpoint grid and its doubling,
/// combined by one Richardson step to remove the error from the conical
/// zeros of |sigma|^beta. Throws ResolutionError below 16x16.
CellAverage cell_average(const QuasiperiodicCandidate& candidate, Resolution resolution);

double cell_average_density(const QuasiperiodicCandidate& candidate, Resolution resolution,
                            bool optimize_scale);

struct ThetaValue {
  double theta = 0.0;
  double value = 0.0;
};

/// Optimally scaled cell averages at `steps` equispaced angles.
std::vector<ThetaValue> theta_scan(double theta_min, double theta_max, int steps, double beta,
                                   Resolution resolution, int jobs = 1);

/// "theta,value" header, one row per angle, 12 significant digits.
void write_theta_scan_csv(std::ostream& out, const std::vector<ThetaValue>& rows);

}  // namespace zeropack
