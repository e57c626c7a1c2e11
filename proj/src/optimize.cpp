#include "zeropack/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>

#include "zeropack/lattice_sigma.hpp"
#include "zeropack/parallel.hpp"

namespace zeropack {

namespace {

// Stationarity threshold used for the converged flag, relative to 1 + value.
constexpr double kStationarity = 1e-4;
// L-BFGS polishing stops once the gradient is this far below the threshold.
constexpr double kPolishTarget = 1e-3 * kStationarity;
constexpr int kPolishIterations = 3000;

using Vec = Eigen::VectorXd;

Vec to_real(const Eigen::VectorXcd& c) {
  Vec x(2 * c.size());
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    x(2 * k) = c(k).real();
    x(2 * k + 1) = c(k).imag();
  }
  return x;
}

Eigen::VectorXcd to_complex(const Vec& x) {
  Eigen::VectorXcd c(x.size() / 2);
  for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = {x(2 * k), x(2 * k + 1)};
  return c;
}

Vec gradient_vec(const FunctionalEvaluator& eval, const Eigen::VectorXcd& c) {
  const auto g = eval.gradient(c);
  return Eigen::Map<const Vec>(g.values.data(), static_cast<Eigen::Index>(g.values.size()));
}

struct LocalState {
  Eigen::VectorXcd c;
  double value = 0.0;
  int iterations = 0;
  double last_relative_decrease = 1.0;
};

// Backtracking (Armijo) line search along `dir`. Returns false when no
// decrease was found.
bool line_search(const FunctionalEvaluator& eval, LocalState& s, const Vec& grad, const Vec& dir,
                 double initial_step) {
  const double slope = grad.dot(dir);
  if (!(slope < 0.0)) return false;
  const Vec x = to_real(s.c);
  double step = initial_step;
  for (int k = 0; k < 60; ++k) {
    const Eigen::VectorXcd trial = to_complex(x + step * dir);
    const double v = eval.value(trial);
    if (std::isfinite(v) && v <= s.value + 1e-4 * step * slope) {
      if (v < s.value) {
        s.last_relative_decrease = (s.value - v) / std::max(s.value, 1e-300);
        s.c = trial;
        s.value = v;
        ++s.iterations;
        return true;
      }
      return false;
    }
    step *= 0.5;
  }
  return false;
}

// One steepest-descent step; the fallback when an IRLS step does not decrease.
bool descent_step(const FunctionalEvaluator& eval, LocalState& s) {
  const Vec g = gradient_vec(eval, s.c);
  const double gn = g.norm();
  if (!(gn > 0.0)) return false;
  const double cn = std::max(s.c.norm(), 1e-3);
  return line_search(eval, s, g, -g, cn / gn);
}

void lbfgs(const FunctionalEvaluator& eval, LocalState& s, int max_iterations, double tolerance) {
  constexpr std::size_t kMemory = 10;
  std::deque<Vec> ss, ys;
  Vec g = gradient_vec(eval, s.c);
  int stalled = 0;
  for (int it = 0; it < max_iterations; ++it) {
    if (g.norm() < kPolishTarget * (1.0 + std::abs(s.value))) break;
    Vec q = g;
    std::vector<double> alpha(ss.size());
    for (std::size_t i = ss.size(); i-- > 0;) {
      alpha[i] = ss[i].dot(q) / ys[i].dot(ss[i]);
      q -= alpha[i] * ys[i];
    }
    if (!ss.empty()) q *= ss.back().dot(ys.back()) / ys.back().squaredNorm();
    for (std::size_t i = 0; i < ss.size(); ++i) {
      const double b = ys[i].dot(q) / ys[i].dot(ss[i]);
      q += (alpha[i] - b) * ss[i];
    }
    Vec dir = -q;
    double step = 1.0;
    if (ss.empty() || g.dot(dir) >= 0.0) {
      dir = -g;
      step = std::max(s.c.norm(), 1e-3) / std::max(g.norm(), 1e-300) * 1e-2;
      ss.clear();
      ys.clear();
    }
    const Vec x0 = to_real(s.c);
    if (!line_search(eval, s, g, dir, step)) {
      if (ss.empty()) break;
      ss.clear();
      ys.clear();
      continue;
    }
    const Vec gnew = gradient_vec(eval, s.c);
    const Vec sk = to_real(s.c) - x0;
    const Vec yk = gnew - g;
    if (sk.dot(yk) > 1e-300) {
      ss.push_back(sk);
      ys.push_back(yk);
      if (ss.size() > kMemory) {
        ss.pop_front();
        ys.pop_front();
      }
    }
    g = gnew;
    stalled = s.last_relative_decrease < tolerance ? stalled + 1 : 0;
    if (stalled >= 5) break;
  }
}

class IrlsSolver {
 public:
  IrlsSolver(const FunctionalEvaluator& eval) : eval_(eval) {
    const auto& smp = eval.sampling();
    const Eigen::Index m = static_cast<Eigen::Index>(smp.nodes.size());
    Eigen::VectorXd w2(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto k = static_cast<std::size_t>(i);
      w2(i) = smp.measure[k] * smp.weight[k] * smp.weight[k];
    }
    Eigen::MatrixXcd g = eval.basis().adjoint() * w2.asDiagonal() * eval.basis();
    g = 0.5 * (g + g.adjoint()).eval();
    // The tag is unused here: this Gram carries the functional's own measure.
    gram_.emplace(HyperbolicWeight{}, std::move(g));
  }

  const WeightedGram& gram() const { return *gram_; }

  // Majorize-minimize step: fix the phase of the current iterate and solve
  // the weighted linear least-squares problem for the coefficients.
  Eigen::VectorXcd step(const Eigen::VectorXcd& c) const {
    const auto& smp = eval_.sampling();
    const Eigen::VectorXcd fz = eval_.values(c);
    const double floor = 1e-14 * fz.cwiseAbs().maxCoeff();
    Eigen::VectorXcd rhs(fz.size());
    for (Eigen::Index i = 0; i < fz.size(); ++i) {
      const auto k = static_cast<std::size_t>(i);
      const double mod = std::abs(fz(i));
      const cplx phase = mod > floor && mod > 0.0 ? fz(i) / mod : cplx{0.0, 0.0};
      rhs(i) = smp.measure[k] * smp.weight[k] * smp.indicator[k] * phase;
    }
    return gram_->solve(eval_.basis().adjoint() * rhs);
  }

 private:
  const FunctionalEvaluator& eval_;
  std::optional<WeightedGram> gram_;
};

void irls(const FunctionalEvaluator& eval, const IrlsSolver& solver, LocalState& s,
          const OptimizerConfig& config) {
  double extrapolation = 1.0;
  while (s.iterations < config.max_iterations) {
    const Eigen::VectorXcd next = solver.step(s.c);
    double v = eval.value(next);
    if (!(v <= s.value)) {
      const double before = s.value;
      if (!descent_step(eval, s)) break;
      if ((before - s.value) < config.tolerance * before) break;
      continue;
    }
    Eigen::VectorXcd accepted = next;
    const Eigen::VectorXcd trial = next + extrapolation * (next - s.c);
    const double vt = eval.value(trial);
    if (vt < v) {
      accepted = trial;
      v = vt;
      extrapolation = std::min(extrapolation * 1.5, 64.0);
    } else {
      extrapolation = 1.0;
    }
    s.last_relative_decrease = (s.value - v) / std::max(s.value, 1e-300);
    s.c = accepted;
    s.value = v;
    ++s.iterations;
    if (s.last_relative_decrease < config.tolerance) break;
  }
}

void rescale(const FunctionalEvaluator& eval, LocalState& s) {
  if (s.c.norm() == 0.0) return;
  double t;
  try {
    t = eval.optimal_scale(s.c);
  } catch (const UndefinedScaleError&) {
    return;
  }
  const Eigen::VectorXcd scaled = t * s.c;
  const double v = eval.value(scaled);
  if (v <= s.value) {
    if (v < s.value) s.last_relative_decrease = (s.value - v) / std::max(s.value, 1e-300);
    s.c = scaled;
    s.value = v;
  }
}

struct RunOutcome {
  Eigen::VectorXcd c;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
};

RunOutcome local_run(const FunctionalEvaluator& eval, const IrlsSolver& solver,
                     Eigen::VectorXcd start, const OptimizerConfig& config) {
  LocalState s;
  s.c = std::move(start);
  s.value = eval.value(s.c);
  rescale(eval, s);
  const bool use_irls = config.method == OptimizerMethod::irls && eval.sampling().beta == 1.0;
  if (use_irls) {
    irls(eval, solver, s, config);
  }
  const auto threshold = [&] { return kStationarity * (1.0 + std::abs(s.value)); };
  double gnorm = eval.gradient(s.c).norm();
  if (!use_irls || gnorm > kPolishTarget * (1.0 + std::abs(s.value))) {
    const int budget = use_irls ? kPolishIterations
                                : std::max(config.max_iterations - s.iterations, 1);
    lbfgs(eval, s, budget, config.tolerance);
  }
  // Confirmation step followed by the final rescaling: the relative decrease
  // they achieve together decides convergence.
  const double before = s.value;
  if (use_irls) {
    const Eigen::VectorXcd next = solver.step(s.c);
    const double v = eval.value(next);
    if (v < s.value) {
      s.c = next;
      s.value = v;
    }
  } else {
    descent_step(eval, s);
  }
  rescale(eval, s);
  s.last_relative_decrease = (before - s.value) / std::max(before, 1e-300);
  gnorm = eval.gradient(s.c).norm();

  RunOutcome out;
  out.c = s.c;
  out.value = s.value;
  out.iterations = s.iterations;
  out.gradient_norm = gnorm;
  out.converged = gnorm < threshold() && s.last_relative_decrease < config.tolerance;
  return out;
}

Eigen::VectorXcd deterministic_start(const FunctionalSpec& spec, const FunctionalEvaluator& eval,
                                     const IrlsSolver& solver) {
  const int n = eval.degree_bound();
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
  if (spec.geometry == Geometry::hyperbolic) {
    c(0) = 1.0 / (1.0 - 0.5 * spec.param * spec.param);
    return c;
  }
  if (spec.beta != 1.0) {
    c(0) = 1.0;
    return c;
  }
  // Project z -> f0(sqrt(gamma) z), the triangular-lattice candidate, onto Pol_n.
  const auto cand = abrikosov_candidate(lattice_normalize(std::numbers::pi / 3.0, 1.0), 1.0);
  const double root = std::sqrt(spec.param * spec.alpha);
  const auto& smp = eval.sampling();
  Eigen::VectorXcd rhs(static_cast<Eigen::Index>(smp.nodes.size()));
  for (std::size_t i = 0; i < smp.nodes.size(); ++i) {
    rhs(static_cast<Eigen::Index>(i)) =
        smp.measure[i] * smp.weight[i] * smp.weight[i] * smp.indicator[i] * cand.f0(root * smp.nodes[i]);
  }
  c = solver.gram().solve(eval.basis().adjoint() * rhs);
  if (!std::isfinite(c.norm()) || c.norm() == 0.0) {
    c.setZero();
    c(0) = 1.0;
  }
  return c;
}

Eigen::VectorXcd random_start(const IrlsSolver& solver, int n, std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::VectorXd scale = solver.gram().orthonormal_scale();
  Eigen::VectorXcd c(n);
  for (int k = 0; k < n; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    c(k) = cplx{re, im} * (scale(k) / std::sqrt(2.0 * n));
  }
  return c;
}

MinimizeResult finish(const FunctionalSpec& spec, const RunOutcome& run, const QuadratureGrid& grid) {
  MinimizeResult result;
  std::vector<cplx> coeffs(run.c.data(), run.c.data() + run.c.size());
  result.minimizer = canonicalize(ComplexPolynomial(std::move(coeffs)));
  result.iterations = run.iterations;
  result.converged = run.converged;
  result.gradient_norm = run.gradient_norm;
  result.diagnostics = density(result.minimizer, spec, grid);
  result.value = result.diagnostics.value;
  return result;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (max_iterations < 1) throw InvalidArgumentError("max_iterations must be at least 1");
  if (!(tolerance > 0.0)) throw InvalidArgumentError("tolerance must be positive");
  if (restarts < 1) throw InvalidArgumentError("restarts must be at least 1");
  if (jobs < 1) throw InvalidArgumentError("jobs must be at least 1");
}

int degree_schedule(Geometry geometry, double param) {
  double x;
  if (geometry == Geometry::hyperbolic) {
    if (!(param > 0.0 && param < 1.0)) throw InvalidArgumentError("degree_schedule: r must lie in (0,1)");
    x = param * param / (1.0 - param * param);
  } else {
    if (!(param > 0.0)) throw InvalidArgumentError("degree_schedule: gamma must be positive");
    x = 2.0 * param;
  }
  // Absorb rounding in r^2/(1-r^2) so exact integers are not bumped up.
  const double n = std::ceil(x * (1.0 - 1e-12));
  return std::max(1, static_cast<int>(n));
}

double optimal_scale(const ComplexPolynomial& f, const FunctionalSpec& spec,
                     const QuadratureGrid& grid) {
  if (f.is_zero()) throw UndefinedScaleError("optimal scale is undefined for the zero polynomial");
  const FunctionalEvaluator eval(spec, grid, f.size());
  return eval.optimal_scale(eval.coefficients(f));
}

ComplexPolynomial canonicalize(ComplexPolynomial f) {
  const int d = f.degree();
  if (d == ComplexPolynomial::kZeroDegree) return f;
  const cplx lead = f[d];
  f *= std::conj(lead) / std::abs(lead);
  f.mutable_coeffs()[d] = std::abs(lead);
  return f;
}

MinimizeResult minimize_from(const FunctionalSpec& spec, const ComplexPolynomial& start,
                             const OptimizerConfig& config, const QuadratureGrid& grid) {
  config.validate();
  const int n = std::max(start.size(), 1);
  const FunctionalEvaluator eval(spec, grid, n);
  const IrlsSolver solver(eval);
  const RunOutcome run = local_run(eval, solver, eval.coefficients(start), config);
  MinimizeResult result = finish(spec, run, grid);
  result.restart_values = {result.value};
  return result;
}

MinimizeResult minimize(const FunctionalSpec& spec, int n, const OptimizerConfig& config,
                        const QuadratureGrid& grid) {
  config.validate();
  if (n < 1) throw InvalidArgumentError("minimize: degree bound must be at least 1");
  const FunctionalEvaluator eval(spec, grid, n);
  const IrlsSolver solver(eval);

  std::vector<RunOutcome> runs = parallel_map(config.restarts, config.jobs, [&](int k) {
    Eigen::VectorXcd start = k == 0 ? deterministic_start(spec, eval, solver)
                                    : random_start(solver, n, config.seed, k);
    return local_run(eval, solver, std::move(start), config);
  });

  int best = 0;
  for (int k = 1; k < static_cast<int>(runs.size()); ++k) {
    if (runs[k].value < runs[best].value - 1e-12) best = k;
  }
  MinimizeResult result = finish(spec, runs[best], grid);
  result.best_restart = best;
  for (const auto& r : runs) result.restart_values.push_back(r.value);
  return result;
}

}  // namespace zeropack
