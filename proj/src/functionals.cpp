#include "zeropack/functionals.hpp"

#include <algorithm>
#include <cmath>

namespace zeropack {

namespace {

constexpr double kZeroModulus = 1e-14;

bool covers_disk(const QuadratureGrid& grid, double radius) {
  if (std::holds_alternative<Cell>(grid.region())) return false;
  if (const auto* d = std::get_if<Disk>(&grid.region()); d && d->center != cplx{}) return false;
  return grid.inner_radius() == 0.0 && grid.outer_radius() >= radius * (1.0 - 1e-15);
}

double abs_pow(double modulus, double beta) {
  return beta == 1.0 ? modulus : std::pow(modulus, beta);
}

}  // namespace

std::string to_string(Geometry g) { return g == Geometry::hyperbolic ? "hyperbolic" : "planar"; }

Geometry parse_geometry(const std::string& text) {
  if (text == "hyperbolic") return Geometry::hyperbolic;
  if (text == "planar") return Geometry::planar;
  throw InvalidArgumentError("geometry must be 'hyperbolic' or 'planar', got '" + text + "'");
}

void FunctionalSpec::validate() const {
  if (geometry == Geometry::hyperbolic) {
    if (!(param > 0.0 && param < 1.0)) throw InvalidArgumentError("hyperbolic radius r must lie in (0,1)");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgumentError("hyperbolic alpha must lie in (0,1]");
  } else {
    if (!(param > 0.0) || !std::isfinite(param)) throw InvalidArgumentError("planar gamma must be positive");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgumentError("planar alpha must be positive");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgumentError("beta must be positive");
}

double FunctionalSpec::region_radius() const {
  return geometry == Geometry::hyperbolic ? param : 1.0;
}

double FunctionalSpec::default_delta() const {
  if (geometry == Geometry::hyperbolic) return 1.0 - param;
  return std::min(1.0 / std::sqrt(param), 0.5);
}

double hyperbolic_normalizer(double r) { return -std::log1p(-r * r); }

double planar_cutoff_radius(int degree_bound, double gamma) {
  const double n = std::max(degree_bound, 1);
  return std::max(3.0, std::sqrt((n * std::log(10.0 * n) + 40.0) / (2.0 * gamma)));
}

QuadratureGrid functional_grid(const FunctionalSpec& spec, int degree_bound, Resolution res) {
  spec.validate();
  const double rr = spec.region_radius();
  const double inner = (1.0 - spec.default_delta()) * rr;
  const std::vector<double> splits{inner, rr};
  if (spec.geometry == Geometry::hyperbolic) {
    return build_grid(Disk{{}, spec.starred ? 1.0 : rr}, res, splits);
  }
  if (spec.starred) {
    return build_grid(TruncatedPlane{planar_cutoff_radius(degree_bound, spec.param)}, res, splits);
  }
  return build_grid(Disk{{}, 1.0}, res, splits);
}

FunctionalSampling sample_functional(const FunctionalSpec& spec, const QuadratureGrid& grid) {
  spec.validate();
  const double rr = spec.region_radius();
  const bool hyperbolic = spec.geometry == Geometry::hyperbolic;
  if (spec.starred && spec.alpha != 1.0) {
    throw ConfigurationError("dilated functionals are defined for the unstarred form only");
  }
  if (hyperbolic) {
    if (!covers_disk(grid, spec.starred ? 1.0 : rr) ||
        std::holds_alternative<TruncatedPlane>(grid.region()) || grid.outer_radius() > 1.0) {
      throw ConfigurationError(spec.starred
                                   ? "starred hyperbolic functional needs a grid on the unit disk"
                                   : "hyperbolic functional needs a disk grid covering D(0,r)");
    }
  } else {
    if (spec.starred ? !std::holds_alternative<TruncatedPlane>(grid.region())
                     : !covers_disk(grid, 1.0)) {
      throw ConfigurationError(spec.starred
                                   ? "starred planar functional needs a truncated-plane grid"
                                   : "planar functional needs a grid covering the unit disk");
    }
  }

  FunctionalSampling s;
  s.beta = spec.beta;
  const double a2 = spec.alpha * spec.alpha;
  const double norm = hyperbolic ? hyperbolic_normalizer(rr) : 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cplx z = grid.nodes()[i];
    const double m = std::norm(z);
    const bool inside = std::abs(z) < rr;
    if (!inside && !spec.starred) continue;
    double w, mu;
    if (hyperbolic) {
      if (m >= 1.0) continue;
      w = 1.0 - a2 * m;
      mu = grid.weights()[i] * a2 / (w * norm);
    } else {
      w = std::exp(-spec.alpha * spec.param * m);
      mu = grid.weights()[i];
    }
    s.nodes.push_back(z);
    s.measure.push_back(mu);
    s.weight.push_back(w);
    s.indicator.push_back(inside ? 1.0 : 0.0);
  }
  return s;
}

double discrepancy(const ComplexPolynomial& f, cplx z, const FunctionalSpec& spec) {
  spec.validate();
  const double m = std::norm(z);
  const double a2 = spec.alpha * spec.alpha;
  const double w = spec.geometry == Geometry::hyperbolic ? 1.0 - a2 * m
                                                         : std::exp(-spec.alpha * spec.param * m);
  const double ind = std::abs(z) < spec.region_radius() ? 1.0 : 0.0;
  const double d = w * abs_pow(std::abs(f(z)), spec.beta) - ind;
  return d * d;
}

double GradientResult::norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

FunctionalEvaluator::FunctionalEvaluator(const FunctionalSpec& spec, const QuadratureGrid& grid,
                                         int degree_bound)
    : spec_(spec), sampling_(sample_functional(spec, grid)), n_(degree_bound) {
  if (n_ < 1) throw InvalidArgumentError("degree bound must be at least 1");
  basis_ = vandermonde(sampling_.nodes, n_);
}

Eigen::VectorXcd FunctionalEvaluator::coefficients(const ComplexPolynomial& f) const {
  if (f.size() > n_) {
    for (int k = n_; k < f.size(); ++k) {
      if (f[k] != cplx{}) throw InvalidArgumentError("polynomial exceeds the evaluator's degree bound");
    }
  }
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n_);
  for (int k = 0; k < std::min(n_, f.size()); ++k) c(k) = f[k];
  return c;
}

Eigen::VectorXcd FunctionalEvaluator::values(const Eigen::VectorXcd& c) const { return basis_ * c; }

double FunctionalEvaluator::value(const Eigen::VectorXcd& c) const {
  const Eigen::VectorXcd fz = values(c);
  std::vector<double> terms(sampling_.nodes.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double d = sampling_.weight[i] * abs_pow(std::abs(fz(static_cast<Eigen::Index>(i))), sampling_.beta) -
                     sampling_.indicator[i];
    terms[i] = sampling_.measure[i] * d * d;
  }
  return pairwise_sum(terms);
}

FunctionalEvaluator::Moments FunctionalEvaluator::moments(const Eigen::VectorXcd& c) const {
  const Eigen::VectorXcd fz = values(c);
  const std::size_t n = sampling_.nodes.size();
  std::vector<double> lin(n), quad(n), cst(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = sampling_.weight[i] * abs_pow(std::abs(fz(static_cast<Eigen::Index>(i))), sampling_.beta);
    const double mu = sampling_.measure[i];
    lin[i] = mu * a * sampling_.indicator[i];
    quad[i] = mu * a * a;
    cst[i] = mu * sampling_.indicator[i];
  }
  return {pairwise_sum(lin), pairwise_sum(quad), pairwise_sum(cst)};
}

double FunctionalEvaluator::optimal_scale(const Eigen::VectorXcd& c) const {
  const Moments m = moments(c);
  if (!(m.quadratic > 0.0)) throw UndefinedScaleError("optimal scale is undefined for the zero polynomial");
  // rho(t f) is quadratic in s = t^beta with minimizer s = linear / quadratic.
  const double s = m.linear / m.quadratic;
  if (!(s > 0.0)) throw UndefinedScaleError("polynomial has no mass inside the region");
  return sampling_.beta == 1.0 ? s : std::pow(s, 1.0 / sampling_.beta);
}

GradientResult FunctionalEvaluator::gradient(const Eigen::VectorXcd& c) const {
  const Eigen::VectorXcd fz = values(c);
  const double beta = sampling_.beta;
  GradientResult out;
  Eigen::VectorXcd q(fz.size());
  for (Eigen::Index i = 0; i < fz.size(); ++i) {
    const double mod = std::abs(fz(i));
    if (mod < kZeroModulus) {
      out.subgradient = true;
      q(i) = 0.0;
      continue;
    }
    const auto k = static_cast<std::size_t>(i);
    const double w = sampling_.weight[k];
    const double a = abs_pow(mod, beta);
    // d|f|^beta = beta |f|^{beta-1} Re(conj(f) df) / |f|
    const double factor = 2.0 * sampling_.measure[k] * (w * a - sampling_.indicator[k]) * w * beta * a /
                          (mod * mod);
    q(i) = factor * std::conj(fz(i));
  }
  const Eigen::VectorXcd s = basis_.transpose() * q;
  out.values.resize(2 * static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) {
    out.values[2 * j] = s(j).real();
    out.values[2 * j + 1] = -s(j).imag();
  }
  return out;
}

DensityReport density(const ComplexPolynomial& f, const FunctionalSpec& spec,
                      const QuadratureGrid& grid) {
  const int n = std::max(f.size(), 1);
  const FunctionalEvaluator eval(spec, grid, n);
  const Eigen::VectorXcd c = eval.coefficients(f);

  DensityReport report;
  report.value = eval.value(c);
  const Eigen::VectorXcd fz = eval.values(c);
  const auto& s = eval.sampling();
  std::vector<double> l1(s.nodes.size()), l2(s.nodes.size());
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const double a = s.weight[i] * abs_pow(std::abs(fz(static_cast<Eigen::Index>(i))), s.beta);
    l1[i] = s.measure[i] * a * s.indicator[i];
    l2[i] = s.measure[i] * a * a * s.indicator[i];
  }
  report.ell1 = pairwise_sum(l1);
  report.ell2 = pairwise_sum(l2);
  report.delta = spec.default_delta();
  report.boundary_mass_l1 = boundary_mass(f, spec.geometry, spec.param, report.delta, 1, grid);
  report.boundary_mass_l2 = boundary_mass(f, spec.geometry, spec.param, report.delta, 2, grid);
  report.spec = spec;
  report.grid_resolution = grid.resolution();
  report.grid_region = region_name(grid.region());
  return report;
}

double density_dilated(const ComplexPolynomial& f, const FunctionalSpec& spec,
                       const QuadratureGrid& grid) {
  if (spec.starred) throw ConfigurationError("dilated functionals are defined for the unstarred form only");
  return density(f, spec, grid).value;
}

double ell(const ComplexPolynomial& f, double r, int k, const QuadratureGrid& grid) {
  if (!(r > 0.0 && r < 1.0)) throw InvalidArgumentError("ell: r must lie in (0,1)");
  if (k != 1 && k != 2) throw InvalidArgumentError("ell: k must be 1 or 2");
  if (!covers_disk(grid, r)) throw ConfigurationError("ell: grid must cover D(0,r)");
  const double norm = hyperbolic_normalizer(r);
  return integrate(grid, [&](cplx z) {
           if (!(std::abs(z) < r)) return 0.0;
           const double mod = std::abs(f(z));
           return k == 1 ? mod : mod * mod * (1.0 - std::norm(z));
         }) /
         norm;
}

double boundary_mass(const ComplexPolynomial& f, Geometry geometry, double param, double delta,
                     int p, const QuadratureGrid& grid) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgumentError("boundary_mass: delta must lie in (0,1)");
  if (p != 1 && p != 2) throw InvalidArgumentError("boundary_mass: p must be 1 or 2");
  const bool hyperbolic = geometry == Geometry::hyperbolic;
  if (hyperbolic && !(param > 0.0 && param < 1.0)) throw InvalidArgumentError("boundary_mass: r must lie in (0,1)");
  if (!hyperbolic && !(param > 0.0)) throw InvalidArgumentError("boundary_mass: gamma must be positive");
  const double outer = hyperbolic ? param : 1.0;
  const double inner = (1.0 - delta) * outer;
  if (std::holds_alternative<Cell>(grid.region()) || grid.outer_radius() < outer * (1.0 - 1e-15) ||
      grid.inner_radius() > inner) {
    throw ConfigurationError("boundary_mass: grid does not cover the annulus");
  }
  const double value = integrate(grid, [&](cplx z) {
    const double rho = std::abs(z);
    if (!(rho > inner && rho < outer)) return 0.0;
    const double mod = std::abs(f(z));
    const double m = rho * rho;
    if (hyperbolic) return p == 1 ? mod : mod * mod * (1.0 - m);
    const double e = std::exp(-param * m);
    return p == 1 ? mod * e : mod * mod * e * e;
  });
  return hyperbolic ? value / hyperbolic_normalizer(param) : value;
}

GradientResult gradient(const ComplexPolynomial& f, const FunctionalSpec& spec,
                        const QuadratureGrid& grid) {
  const FunctionalEvaluator eval(spec, grid, std::max(f.size(), 1));
  return eval.gradient(eval.coefficients(f));
}

}  // namespace zeropack
