#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "zeropack/functionals.hpp"

namespace zeropack {

enum class OptimizerMethod { irls, gradient_descent };

struct OptimizerConfig {
  int max_iterations = 20000;
  /// Stop when the relative decrease of one accepted step falls below this.
  double tolerance = 1e-13;
  OptimizerMethod method = OptimizerMethod::irls;
  std::uint64_t seed = 1;
  int restarts = 3;
  /// Worker threads for independent restarts.
  int jobs = 1;

  void validate() const;
};

struct MinimizeResult {
  ComplexPolynomial minimizer;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
  DensityReport diagnostics;
  std::vector<double> restart_values;
  int best_restart = 0;
};

/// Sufficient degree bound: ceil(r^2/(1-r^2)) (hyperbolic), ceil(2 gamma) (planar).
int degree_schedule(Geometry geometry, double param);

/// t > 0 minimizing rho(t f).
double optimal_scale(const ComplexPolynomial& f, const FunctionalSpec& spec,
                     const QuadratureGrid& grid);

/// Rotates f so that its highest nonzero coefficient is real and nonnegative.
ComplexPolynomial canonicalize(ComplexPolynomial f);

/// Minimizes the functional over Pol_n, keeping the best of config.restarts
/// runs. Restart 0 starts from a deterministic guess (the constant
/// 1/(1-r^2/2), or the projected lattice candidate for planar beta = 1); the
/// others from complex Gaussian coefficients scaled by the inverse square
/// root of the Gram diagonal.
MinimizeResult minimize(const FunctionalSpec& spec, int n, const OptimizerConfig& config,
                        const QuadratureGrid& grid);

/// Single local run from a given starting polynomial.
MinimizeResult minimize_from(const FunctionalSpec& spec, const ComplexPolynomial& start,
                             const OptimizerConfig& config, const QuadratureGrid& grid);

}  // namespace zeropack
