#include "zeropack/lattice_sigma.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "zeropack/parallel.hpp"

namespace zeropack {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
constexpr double kSeriesTolerance = 1e-18;
constexpr int kMaxTerms = 400;

void require_upper_half_plane(cplx tau) {
  if (!(tau.imag() > 0.0)) throw InvalidLatticeError("lattice parameter tau must have Im tau > 0");
}

// q^{(n+1/2)^2} = exp(i pi tau (n+1/2)^2)
cplx nome_power(cplx tau, int n) {
  const double e = (n + 0.5) * (n + 0.5);
  return std::exp(kI * kPi * tau * e);
}

bool is_even_integer(double x) {
  return std::abs(x - 2.0 * std::round(x / 2.0)) < 1e-12;
}

// Extrapolates a trapezoid mean with error ~ h^order from meshes h and h/2.
double richardson(double coarse, double fine, double order) {
  return fine + (fine - coarse) / (std::pow(2.0, order) - 1.0);
}

struct Means {
  double g = 0.0;
  double g2 = 0.0;
};

Means cell_means(const QuasiperiodicCandidate& cand, Resolution res) {
  const QuadratureGrid grid = build_grid(Cell{cand.lattice.omega1, cand.lattice.omega2}, res);
  QuasiperiodicCandidate unit = cand;
  unit.scale = 1.0;
  std::vector<double> g(grid.size()), g2(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = unit.density(grid.nodes()[i]);
    if (!std::isfinite(v)) throw NumericError("non-finite candidate density", grid.nodes()[i]);
    g[i] = v;
    g2[i] = v * v;
  }
  const double count = static_cast<double>(grid.size());
  return {pairwise_sum(g) / count, pairwise_sum(g2) / count};
}

}  // namespace

cplx Lattice::legendre_defect() const { return eta1 * omega2 - eta2 * omega1 - kI * (kPi / 2.0); }

double Lattice::cell_area() const { return 4.0 * std::imag(std::conj(omega1) * omega2); }

ThetaSeries theta1(cplx v, cplx tau) {
  require_upper_half_plane(tau);
  ThetaSeries out;
  cplx sum{};
  for (int n = 0; n < kMaxTerms; ++n) {
    const cplx term = 2.0 * (n % 2 == 0 ? 1.0 : -1.0) * nome_power(tau, n) * std::sin((2.0 * n + 1.0) * v);
    sum += term;
    out.terms = n + 1;
    if (n > 0 && std::abs(term) <= kSeriesTolerance * std::abs(sum)) break;
  }
  out.value = sum;
  return out;
}

std::pair<cplx, cplx> theta1_derivatives_at_zero(cplx tau) {
  require_upper_half_plane(tau);
  cplx d1{}, d3{};
  for (int n = 0; n < kMaxTerms; ++n) {
    const double k = 2.0 * n + 1.0;
    const cplx c = 2.0 * (n % 2 == 0 ? 1.0 : -1.0) * nome_power(tau, n);
    const cplx t1 = c * k;
    const cplx t3 = -c * k * k * k;
    d1 += t1;
    d3 += t3;
    if (n > 0 && std::abs(t3) <= kSeriesTolerance * std::abs(d3)) break;
  }
  return {d1, d3};
}

cplx eta_from_theta_series(cplx omega, cplx tau) {
  const auto [d1, d3] = theta1_derivatives_at_zero(tau);
  return -(kPi * kPi / (12.0 * omega)) * d3 / d1;
}

Lattice make_lattice(cplx omega1, cplx omega2) {
  if (!(std::imag(std::conj(omega1) * omega2) > 0.0)) {
    throw InvalidLatticeError("lattice basis must be positively oriented: Im(conj(omega1) omega2) > 0");
  }
  Lattice lat;
  lat.omega1 = omega1;
  lat.omega2 = omega2;
  lat.tau = omega2 / omega1;
  lat.theta = std::arg(lat.tau);
  lat.eta1 = eta_from_theta_series(omega1, lat.tau);
  // Basis (omega2, -omega1) has tau' = -1/tau in the upper half-plane.
  lat.eta2 = eta_from_theta_series(omega2, -1.0 / lat.tau);
  return lat;
}

Lattice lattice_normalize(double theta, double beta) {
  if (!(theta > 0.0 && theta < kPi)) throw InvalidLatticeError("lattice angle theta must lie in (0, pi)");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgumentError("beta must be positive");
  const double omega1 = std::sqrt(kPi * beta / (8.0 * std::sin(theta)));
  return make_lattice(omega1, std::polar(omega1, theta));
}

cplx sigma(cplx z, const Lattice& lattice) {
  require_upper_half_plane(lattice.tau);
  const cplx w1 = lattice.omega1;
  const cplx d1 = theta1_derivatives_at_zero(lattice.tau).first;
  const cplx th = theta1(kPi * z / (2.0 * w1), lattice.tau).value;
  return (2.0 * w1 / kPi) * std::exp(lattice.eta1 * z * z / (2.0 * w1)) * th / d1;
}

cplx QuasiperiodicCandidate::f0(cplx z) const { return std::exp(nu * z * z) * sigma(z, lattice); }

double QuasiperiodicCandidate::density(cplx z) const {
  if (scale == 0.0) return 0.0;
  const cplx s = sigma(z, lattice);
  const double mod = std::abs(s);
  if (mod == 0.0) return 0.0;
  const double log_g = beta * (std::real(nu * z * z) + std::log(mod)) - std::norm(z);
  return scale * std::exp(log_g);
}

double QuasiperiodicCandidate::periodicity_residual(int samples) const {
  const int side = std::max(2, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(samples)))));
  double worst = 0.0;
  double peak = 0.0;
  int count = 0;
  for (int i = 0; i < side && count < samples; ++i) {
    for (int j = 0; j < side && count < samples; ++j, ++count) {
      // Irrational offsets keep the sample points off the lattice zeros.
      const double u = (i + 0.318309886) / side;
      const double v = (j + 0.271828183) / side;
      const cplx z = 2.0 * u * lattice.omega1 + 2.0 * v * lattice.omega2;
      const double g = density(z);
      peak = std::max(peak, g);
      worst = std::max(worst, std::abs(density(z + 2.0 * lattice.omega1) - g));
      worst = std::max(worst, std::abs(density(z + 2.0 * lattice.omega2) - g));
    }
  }
  return peak > 0.0 ? worst / peak : worst;
}

QuasiperiodicCandidate abrikosov_candidate(const Lattice& lattice, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgumentError("beta must be positive");
  const cplx nu1 = (2.0 * std::conj(lattice.omega1) / beta - lattice.eta1) / (2.0 * lattice.omega1);
  const cplx nu2 = (2.0 * std::conj(lattice.omega2) / beta - lattice.eta2) / (2.0 * lattice.omega2);
  if (std::abs(nu1 - nu2) > 1e-8 * std::max(1.0, std::abs(nu1))) {
    throw NormalizationError("lattice is not normalized for this beta: Im(conj(omega1) omega2) must be pi beta/8");
  }
  QuasiperiodicCandidate cand{lattice, 0.5 * (nu1 + nu2), beta, 1.0};
  const double residual = cand.periodicity_residual(64);
  if (!(residual < 1e-8)) {
    throw NormalizationError("candidate density failed the periodicity check (residual " +
                             std::to_string(residual) + ")");
  }
  return cand;
}

CellAverage cell_average(const QuasiperiodicCandidate& candidate, Resolution resolution) {
  if (resolution.first < 16 || resolution.second < 16) {
    throw ResolutionError("cell resolution " + to_string(resolution) +
                          " is too coarse; use at least 16x16 (128x128 or more recommended)");
  }
  const Means coarse = cell_means(candidate, resolution);
  const Means fine = cell_means(candidate, {2 * resolution.first, 2 * resolution.second});
  const double beta = candidate.beta;
  CellAverage out;
  // |sigma|^p with p not an even integer has conical zeros; the midpoint
  // rule then converges like h^{2+p}. Even p gives a smooth integrand.
  out.mean_g = is_even_integer(beta) ? fine.g : richardson(coarse.g, fine.g, 2.0 + beta);
  out.mean_g2 = is_even_integer(2.0 * beta) ? fine.g2 : richardson(coarse.g2, fine.g2, 2.0 + 2.0 * beta);
  out.optimal_scale = out.mean_g / out.mean_g2;
  out.scaled_value = 1.0 - out.optimal_scale * out.mean_g;
  const double s = candidate.scale;
  out.unscaled_value = s * s * out.mean_g2 - 2.0 * s * out.mean_g + 1.0;
  return out;
}

double cell_average_density(const QuasiperiodicCandidate& candidate, Resolution resolution,
                            bool optimize_scale) {
  const CellAverage avg = cell_average(candidate, resolution);
  return optimize_scale ? avg.scaled_value : avg.unscaled_value;
}

std::vector<ThetaValue> theta_scan(double theta_min, double theta_max, int steps, double beta,
                                   Resolution resolution, int jobs) {
  if (steps < 2) throw InvalidArgumentError("theta_scan needs at least 2 steps");
  if (!(theta_min > 0.0 && theta_min < theta_max && theta_max < kPi)) {
    throw InvalidArgumentError("theta range must satisfy 0 < theta_min < theta_max < pi");
  }
  return parallel_map(steps, jobs, [&](int k) {
    const double theta = k == steps - 1 ? theta_max
                                        : theta_min + (theta_max - theta_min) * k / (steps - 1);
    const auto cand = abrikosov_candidate(lattice_normalize(theta, beta), beta);
    return ThetaValue{theta, cell_average_density(cand, resolution, true)};
  });
}

void write_theta_scan_csv(std::ostream& out, const std::vector<ThetaValue>& rows) {
  out << "theta,value\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", row.theta, row.value);
    out << buf;
  }
}

}  // namespace zeropack
