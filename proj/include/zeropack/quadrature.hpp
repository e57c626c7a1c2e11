#pragma once

// Product quadrature rules on disks, annuli, truncated planes and lattice
// cells. Weights are taken with respect to the normalized area measure
// dA = dx dy / pi, so the unit disk has total weight 1.

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "zeropack/error.hpp"

namespace zeropack {

using cplx = std::complex<double>;

struct Disk {
  cplx center{0.0, 0.0};
  double radius = 1.0;
};

struct Annulus {
  double r_in = 0.5;
  double r_out = 1.0;
};

/// The disk |z| < r_cut standing in for the whole plane under Gaussian decay.
struct TruncatedPlane {
  double r_cut = 3.0;
};

/// Fundamental cell {2 u omega1 + 2 v omega2 : (u, v) in [0,1)^2}.
struct Cell {
  cplx omega1;
  cplx omega2;
};

using Region = std::variant<Disk, Annulus, TruncatedPlane, Cell>;

/// (n_radial, n_angular) for radial regions, (n_u, n_v) for cells.
struct Resolution {
  int first = 64;
  int second = 128;

  bool operator==(const Resolution&) const = default;
};

std::string to_string(const Resolution& res);

/// Parses "NRADxNANG", e.g. "64x128".
Resolution parse_resolution(const std::string& text);

/// Normalized area (dA = dxdy/pi) of a region.
double region_area(const Region& region);

std::string region_name(const Region& region);

class QuadratureGrid {
 public:
  QuadratureGrid(std::vector<cplx> nodes, std::vector<double> weights,
                 Region region, Resolution resolution,
                 std::vector<double> radial_splits = {});

  std::span<const cplx> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  const Region& region() const { return region_; }
  Resolution resolution() const { return resolution_; }
  /// Interior radii where the radial rule was broken (radial regions only).
  std::span<const double> radial_splits() const { return splits_; }
  std::size_t size() const { return nodes_.size(); }

  double total_weight() const;

  /// Outer radius of a radial region centred at the origin; throws for cells
  /// and off-centre disks.
  double outer_radius() const;
  /// Inner radius (0 for disks and truncated planes).
  double inner_radius() const;

 private:
  std::vector<cplx> nodes_;
  std::vector<double> weights_;
  Region region_;
  Resolution resolution_;
  std::vector<double> splits_;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

/// Builds a product rule: Gauss-Legendre in radius (for the measure 2 rho
/// d rho) and equispaced angles; for cells an equispaced midpoint rule in the
/// lattice coordinates. `radial_splits` are interior radii at which the radial
/// rule is restarted with resolution.first nodes per piece, so integrands with
/// a kink on those circles are still integrated to full accuracy. Truncated
/// planes always split at |z| = 1.
QuadratureGrid build_grid(const Region& region, Resolution resolution,
                          std::span<const double> radial_splits = {});

/// Deterministic pairwise summation.
double pairwise_sum(std::span<const double> values);

/// Weighted sum of `integrand` over the grid nodes. Throws NumericError
/// carrying the node when the integrand is not finite.
template <class F>
double integrate(const QuadratureGrid& grid, F&& integrand) {
  std::vector<double> terms(grid.size());
  const auto nodes = grid.nodes();
  const auto weights = grid.weights();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double v = integrand(nodes[i]);
    if (!std::isfinite(v)) {
      throw NumericError("non-finite integrand value at quadrature node", nodes[i]);
    }
    terms[i] = weights[i] * v;
  }
  return pairwise_sum(terms);
}

}  // namespace zeropack
