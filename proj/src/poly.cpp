#include "zeropack/poly.hpp"

#include <cmath>
#include <string>

namespace zeropack {

ComplexPolynomial ComplexPolynomial::monomial(int k, cplx c) {
  std::vector<cplx> coeffs(k + 1);
  coeffs[k] = c;
  return ComplexPolynomial(std::move(coeffs));
}

int ComplexPolynomial::degree() const {
  for (int k = size() - 1; k >= 0; --k) {
    if (std::abs(coeffs_[k]) > 0.0) return k;
  }
  return kZeroDegree;
}

cplx ComplexPolynomial::operator()(cplx z) const {
  cplx acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

ComplexPolynomial& ComplexPolynomial::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

std::vector<double> ComplexPolynomial::to_real() const {
  std::vector<double> x;
  x.reserve(2 * coeffs_.size());
  for (const auto& c : coeffs_) {
    x.push_back(c.real());
    x.push_back(c.imag());
  }
  return x;
}

ComplexPolynomial ComplexPolynomial::from_real(std::span<const double> x) {
  if (x.size() % 2 != 0) throw InvalidArgumentError("real coefficient vector must have even length");
  std::vector<cplx> coeffs(x.size() / 2);
  for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] = {x[2 * k], x[2 * k + 1]};
  return ComplexPolynomial(std::move(coeffs));
}

ComplexPolynomial dilate(const ComplexPolynomial& p, cplx alpha) {
  std::vector<cplx> coeffs(p.coeffs().begin(), p.coeffs().end());
  cplx power{1.0, 0.0};
  for (auto& c : coeffs) {
    c *= power;
    power *= alpha;
  }
  return ComplexPolynomial(std::move(coeffs));
}

double weight_value(const WeightTag& tag, cplx z) {
  const double m = std::norm(z);
  if (std::holds_alternative<HyperbolicWeight>(tag)) return m < 1.0 ? 1.0 - m : 0.0;
  return std::exp(-2.0 * std::get<PlanarWeight>(tag).gamma * m);
}

Eigen::MatrixXcd vandermonde(std::span<const cplx> nodes, int n) {
  Eigen::MatrixXcd v(static_cast<Eigen::Index>(nodes.size()), n);
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    cplx power{1.0, 0.0};
    for (int k = 0; k < n; ++k) {
      v(i, k) = power;
      power *= nodes[i];
    }
  }
  return v;
}

WeightedGram::WeightedGram(WeightTag tag, Eigen::MatrixXcd matrix)
    : tag_(tag), matrix_(std::move(matrix)) {
  const Eigen::Index n = matrix_.rows();
  scale_.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double d = matrix_(j, j).real();
    if (!(d > 0.0)) {
      throw ConditioningError("Gram matrix has a non-positive diagonal entry at degree " +
                              std::to_string(j) + "; increase the grid resolution");
    }
    scale_(j) = 1.0 / std::sqrt(d);
  }
  const Eigen::MatrixXcd scaled = scale_.asDiagonal() * matrix_ * scale_.asDiagonal();
  llt_.compute(scaled);
  if (llt_.info() != Eigen::Success) {
    throw ConditioningError("Cholesky factorization of the Gram matrix failed at degree bound " +
                            std::to_string(n) + "; increase the grid resolution");
  }
}

Eigen::VectorXd WeightedGram::orthonormal_scale() const { return scale_; }

Eigen::VectorXcd WeightedGram::solve(const Eigen::VectorXcd& rhs) const {
  const Eigen::VectorXcd y = llt_.solve(scale_.asDiagonal() * rhs);
  return scale_.asDiagonal() * y;
}

double WeightedGram::norm_squared(const ComplexPolynomial& p) const {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(matrix_.rows());
  for (int k = 0; k < std::min<int>(p.size(), static_cast<int>(c.size())); ++k) c(k) = p[k];
  return (c.adjoint() * matrix_ * c)(0).real();
}

WeightedGram gram(const WeightTag& weight, int n, const QuadratureGrid& grid) {
  if (n < 1) throw InvalidArgumentError("degree bound must be at least 1");
  const bool hyperbolic = std::holds_alternative<HyperbolicWeight>(weight);
  if (std::holds_alternative<Cell>(grid.region())) {
    throw ConfigurationError("weighted Gram matrices need a radial grid, got a lattice cell");
  }
  if (hyperbolic && (std::holds_alternative<TruncatedPlane>(grid.region()) ||
                     grid.outer_radius() > 1.0)) {
    throw ConfigurationError("hyperbolic weight requires a grid inside the unit disk");
  }
  const Eigen::MatrixXcd v = vandermonde(grid.nodes(), n);
  Eigen::VectorXd w(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    w(static_cast<Eigen::Index>(i)) = grid.weights()[i] * weight_value(weight, grid.nodes()[i]);
  }
  // G(j,k) = sum_i w_i z_i^k conj(z_i^j)
  Eigen::MatrixXcd g = v.adjoint() * w.asDiagonal() * v;
  g = 0.5 * (g + g.adjoint()).eval();
  return WeightedGram(weight, std::move(g));
}

}  // namespace zeropack
