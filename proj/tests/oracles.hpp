#pragma once

// Reference computations for the tests. None of these reuse the library's
// quadrature rules, series or solvers.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "zeropack/poly.hpp"

namespace oracle {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

/// Weierstrass product z prod (1 - z/w) e^{z/w + z^2/(2w^2)} over the lattice
/// points 0 < |w| <= radius, w = 2 m omega1 + 2 n omega2. The disk cut-off
/// is symmetric under w -> -w, so the odd tail terms cancel.
inline cplx sigma_product(cplx z, cplx omega1, cplx omega2, double radius = 200.0) {
  const double h = std::min(std::abs(omega1), std::abs(omega2));
  const int m_max = static_cast<int>(radius / (2.0 * h * std::sin(std::arg(omega2 / omega1)))) + 2;
  cplx log_sum{};
  for (int m = -m_max; m <= m_max; ++m) {
    for (int n = -m_max; n <= m_max; ++n) {
      if (m == 0 && n == 0) continue;
      const cplx w = 2.0 * double(m) * omega1 + 2.0 * double(n) * omega2;
      if (std::abs(w) > radius) continue;
      const cplx t = z / w;
      if (std::abs(t) < 0.05) {
        // log(1-t) + t + t^2/2 = -sum_{k>=3} t^k / k
        cplx term{}, p = t * t * t;
        for (int k = 3; k < 20; ++k, p *= t) term -= p / double(k);
        log_sum += term;
      } else {
        log_sum += std::log(1.0 - t) + t + 0.5 * t * t;
      }
    }
  }
  return z * std::exp(log_sum);
}

/// Jacobi triple product:
/// theta_1(v|tau) = 2 q^{1/4} sin v prod_{n>=1} (1 - q^{2n})(1 - 2 q^{2n} cos 2v + q^{4n}).
inline cplx theta1_product(cplx v, cplx tau, int factors = 200) {
  const cplx q = std::exp(cplx{0.0, kPi} * tau);
  const cplx q_quarter = std::exp(cplx{0.0, kPi / 4.0} * tau);
  cplx out = 2.0 * q_quarter * std::sin(v);
  cplx q2n = 1.0;
  for (int n = 1; n <= factors; ++n) {
    q2n *= q * q;
    out *= (1.0 - q2n) * (1.0 - 2.0 * q2n * std::cos(2.0 * v) + q2n * q2n);
  }
  return out;
}

/// Composite Simpson rule in the radius and trapezoid rule in the angle for
/// int_{A(r0, r1)} F dA with dA = dx dy / pi. `radial` must be even.
inline double polar_simpson(const std::function<double(cplx)>& f, double r0, double r1, int radial,
                            int angular) {
  const double h = (r1 - r0) / radial;
  double total = 0.0;
  for (int i = 0; i <= radial; ++i) {
    const double rho = r0 + i * h;
    const double c = (i == 0 || i == radial) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    double ring = 0.0;
    for (int k = 0; k < angular; ++k) ring += f(std::polar(rho, 2.0 * kPi * (k + 0.5) / angular));
    total += c * rho * ring / angular;
  }
  // (1/pi) int rho d rho d phi = 2 int rho * mean_phi d rho
  return 2.0 * total * h / 3.0;
}

/// Central differences of a function of real coordinates.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double x0 = x[i];
    const double step = h * std::max(1.0, std::abs(x0));
    x[i] = x0 + step;
    const double fp = f(x);
    x[i] = x0 - step;
    const double fm = f(x);
    x[i] = x0;
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

/// Constant c on the planar functional over D:
/// c^2 (1 - e^{-2g})/(2g) - 2c (1 - e^{-g})/g + 1.
inline double planar_constant_value(double c, double gamma) {
  return c * c * (1.0 - std::exp(-2.0 * gamma)) / (2.0 * gamma) - 2.0 * c * (1.0 - std::exp(-gamma)) / gamma + 1.0;
}

/// Constant c on the hyperbolic functional over D(0,r):
/// (c^2 (r^2 - r^4/2) - 2 c r^2)/L + 1.
inline double hyperbolic_constant_value(double c, double r) {
  const double L = -std::log1p(-r * r);
  const double r2 = r * r;
  return (c * c * (r2 - r2 * r2 / 2.0) - 2.0 * c * r2) / L + 1.0;
}

/// Polynomial with n complex Gaussian coefficients; coefficient k is scaled
/// by `decay^k` to keep values moderate on the relevant disk.
inline zeropack::ComplexPolynomial random_polynomial(std::mt19937_64& rng, int n, double decay = 1.0,
                                                     double scale = 1.0) {
  std::normal_distribution<double> normal;
  std::vector<cplx> c(n);
  double s = scale;
  for (int k = 0; k < n; ++k, s *= decay) c[k] = s * cplx{normal(rng), normal(rng)};
  return zeropack::ComplexPolynomial(std::move(c));
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double norm2(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

}  // namespace oracle
