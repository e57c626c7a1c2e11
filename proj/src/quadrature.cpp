#include "zeropack/quadrature.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

namespace zeropack {

namespace {

constexpr double kPi = std::numbers::pi;

// Legendre P_n and its derivative at x by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

double cell_area(const Cell& cell) {
  // Euclidean area of the parallelogram spanned by 2 omega1, 2 omega2.
  return 4.0 * std::abs(std::imag(std::conj(cell.omega1) * cell.omega2));
}

struct RadialRule {
  std::vector<double> radii;
  std::vector<double> weights;  // for 2 rho d rho
};

RadialRule radial_rule(double r0, double r1, std::span<const double> splits, int n) {
  std::vector<double> breaks{r0};
  for (double s : splits) {
    if (s > r0 && s < r1) breaks.push_back(s);
  }
  breaks.push_back(r1);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const auto [x, w] = gauss_legendre(n);
  RadialRule rule;
  for (std::size_t piece = 0; piece + 1 < breaks.size(); ++piece) {
    const double a = breaks[piece];
    const double b = breaks[piece + 1];
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    for (int i = 0; i < n; ++i) {
      const double rho = mid + half * x[i];
      rule.radii.push_back(rho);
      rule.weights.push_back(w[i] * half * 2.0 * rho);
    }
  }
  return rule;
}

QuadratureGrid radial_grid(const Region& region, cplx center, double r0, double r1,
                           Resolution res, std::span<const double> splits) {
  const RadialRule rule = radial_rule(r0, r1, splits, res.first);
  const int n_ang = res.second;
  std::vector<cplx> nodes;
  std::vector<double> weights;
  nodes.reserve(rule.radii.size() * n_ang);
  weights.reserve(rule.radii.size() * n_ang);
  for (std::size_t i = 0; i < rule.radii.size(); ++i) {
    for (int k = 0; k < n_ang; ++k) {
      const double angle = 2.0 * kPi * k / n_ang;
      nodes.push_back(center + std::polar(rule.radii[i], angle));
      weights.push_back(rule.weights[i] / n_ang);
    }
  }
  std::vector<double> kept;
  for (double s : splits) {
    if (s > r0 && s < r1) kept.push_back(s);
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  return QuadratureGrid(std::move(nodes), std::move(weights), region, res, std::move(kept));
}

}  // namespace

std::string to_string(const Resolution& res) {
  return std::to_string(res.first) + "x" + std::to_string(res.second);
}

Resolution parse_resolution(const std::string& text) {
  const auto pos = text.find('x');
  if (pos == std::string::npos) {
    throw InvalidArgumentError("resolution must look like NRADxNANG, got '" + text + "'");
  }
  Resolution res;
  try {
    std::size_t used = 0;
    res.first = std::stoi(text.substr(0, pos), &used);
    if (used != pos) throw std::invalid_argument(text);
    const std::string tail = text.substr(pos + 1);
    res.second = std::stoi(tail, &used);
    if (used != tail.size()) throw std::invalid_argument(text);
  } catch (const std::logic_error&) {
    throw InvalidArgumentError("resolution must look like NRADxNANG, got '" + text + "'");
  }
  if (res.first < 1 || res.second < 1) {
    throw InvalidArgumentError("resolution components must be positive: '" + text + "'");
  }
  return res;
}

double region_area(const Region& region) {
  return std::visit(
      [](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return r.radius * r.radius;
        } else if constexpr (std::is_same_v<T, Annulus>) {
          return r.r_out * r.r_out - r.r_in * r.r_in;
        } else if constexpr (std::is_same_v<T, TruncatedPlane>) {
          return r.r_cut * r.r_cut;
        } else {
          return cell_area(r) / kPi;
        }
      },
      region);
}

std::string region_name(const Region& region) {
  static const char* names[] = {"disk", "annulus", "truncated_plane", "cell"};
  return names[region.index()];
}

QuadratureGrid::QuadratureGrid(std::vector<cplx> nodes, std::vector<double> weights,
                               Region region, Resolution resolution,
                               std::vector<double> radial_splits)
    : nodes_(std::move(nodes)),
      weights_(std::move(weights)),
      region_(region),
      resolution_(resolution),
      splits_(std::move(radial_splits)) {
  if (nodes_.size() != weights_.size()) {
    throw InvalidArgumentError("quadrature grid: node and weight counts differ");
  }
}

double QuadratureGrid::total_weight() const { return pairwise_sum(weights_); }

double QuadratureGrid::outer_radius() const {
  if (const auto* d = std::get_if<Disk>(&region_)) {
    if (d->center != cplx{}) throw ConfigurationError("grid disk is not centred at the origin");
    return d->radius;
  }
  if (const auto* a = std::get_if<Annulus>(&region_)) return a->r_out;
  if (const auto* t = std::get_if<TruncatedPlane>(&region_)) return t->r_cut;
  throw ConfigurationError("cell grids have no radius");
}

double QuadratureGrid::inner_radius() const {
  if (const auto* a = std::get_if<Annulus>(&region_)) return a->r_in;
  if (std::holds_alternative<Cell>(region_)) throw ConfigurationError("cell grids have no radius");
  return 0.0;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw InvalidArgumentError("Gauss-Legendre order must be positive");
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      if (n == 1) break;
      const auto [p, dp] = legendre_with_derivative(n, z);
      const double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double dp = 1.0;
    if (n > 1) dp = legendre_with_derivative(n, z).second;
    const double weight = (n == 1) ? 2.0 : 2.0 / ((1.0 - z * z) * dp * dp);
    if (n == 1) z = 0.0;
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = weight;
    w[n - 1 - i] = weight;
  }
  return {x, w};
}

QuadratureGrid build_grid(const Region& region, Resolution resolution,
                          std::span<const double> radial_splits) {
  if (resolution.first < 1 || resolution.second < 1) {
    throw InvalidRegionError("quadrature resolution components must be >= 1");
  }
  return std::visit(
      [&](const auto& r) -> QuadratureGrid {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Disk>) {
          if (!(r.radius > 0.0) || !std::isfinite(r.radius)) {
            throw InvalidRegionError("disk radius must be positive");
          }
          return radial_grid(region, r.center, 0.0, r.radius, resolution, radial_splits);
        } else if constexpr (std::is_same_v<T, Annulus>) {
          if (!(r.r_in > 0.0 && r.r_in < r.r_out) || !std::isfinite(r.r_out)) {
            throw InvalidRegionError("annulus radii must satisfy 0 < r_in < r_out");
          }
          return radial_grid(region, cplx{}, r.r_in, r.r_out, resolution, radial_splits);
        } else if constexpr (std::is_same_v<T, TruncatedPlane>) {
          if (!(r.r_cut > 0.0) || !std::isfinite(r.r_cut)) {
            throw InvalidRegionError("plane truncation radius must be positive");
          }
          std::vector<double> splits(radial_splits.begin(), radial_splits.end());
          splits.push_back(1.0);
          return radial_grid(region, cplx{}, 0.0, r.r_cut, resolution, splits);
        } else {
          const double area = cell_area(r);
          if (!(area > 0.0) || !std::isfinite(area)) {
            throw InvalidRegionError("lattice cell has zero area");
          }
          const int nu = resolution.first;
          const int nv = resolution.second;
          std::vector<cplx> nodes;
          nodes.reserve(static_cast<std::size_t>(nu) * nv);
          const double w = area / kPi / (static_cast<double>(nu) * nv);
          for (int i = 0; i < nu; ++i) {
            for (int j = 0; j < nv; ++j) {
              const double u = (i + 0.5) / nu;
              const double v = (j + 0.5) / nv;
              nodes.push_back(2.0 * u * r.omega1 + 2.0 * v * r.omega2);
            }
          }
          std::vector<double> weights(nodes.size(), w);
          return QuadratureGrid(std::move(nodes), std::move(weights), region, resolution);
        }
      },
      region);
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 64;
  if (values.size() <= kBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace zeropack
