#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include "zeropack/quadrature.hpp"

namespace zeropack {

/// Polynomial of degree at most n-1 stored by its n monomial coefficients.
class ComplexPolynomial {
 public:
  /// Degree reported for the zero polynomial.
  static constexpr int kZeroDegree = std::numeric_limits<int>::min();

  ComplexPolynomial() = default;
  explicit ComplexPolynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {}
  static ComplexPolynomial zero(int n) { return ComplexPolynomial(std::vector<cplx>(n)); }
  static ComplexPolynomial constant(cplx c) { return ComplexPolynomial({c}); }
  static ComplexPolynomial monomial(int k, cplx c = 1.0);

  /// Number of stored coefficients, i.e. the n in Pol_n.
  int size() const { return static_cast<int>(coeffs_.size()); }
  int degree() const;
  bool is_zero() const { return degree() == kZeroDegree; }

  std::span<const cplx> coeffs() const { return coeffs_; }
  std::vector<cplx>& mutable_coeffs() { return coeffs_; }
  cplx operator[](int k) const { return k < size() ? coeffs_[k] : cplx{}; }

  /// Horner evaluation.
  cplx operator()(cplx z) const;

  ComplexPolynomial& operator*=(cplx s);
  friend ComplexPolynomial operator*(cplx s, ComplexPolynomial p) { return p *= s; }

  /// Coefficients as interleaved (re, im) pairs: 2n reals.
  std::vector<double> to_real() const;
  static ComplexPolynomial from_real(std::span<const double> x);

  bool operator==(const ComplexPolynomial&) const = default;

 private:
  std::vector<cplx> coeffs_;
};

/// q(z) = p(alpha z).
ComplexPolynomial dilate(const ComplexPolynomial& p, cplx alpha);

/// Weight (1 - |z|^2) on the unit disk; zero outside.
struct HyperbolicWeight {};
/// Weight exp(-2 gamma |z|^2).
struct PlanarWeight {
  double gamma = 1.0;
};
using WeightTag = std::variant<HyperbolicWeight, PlanarWeight>;

/// e^{-phi(z)} for the weight tag.
double weight_value(const WeightTag& tag, cplx z);

/// Rows are nodes, columns the monomials z^0..z^{n-1}.
Eigen::MatrixXcd vandermonde(std::span<const cplx> nodes, int n);

class WeightedGram {
 public:
  WeightedGram(WeightTag tag, Eigen::MatrixXcd matrix);

  const WeightTag& weight() const { return tag_; }
  int degree_bound() const { return static_cast<int>(matrix_.rows()); }
  /// G(j,k) = <z^k, z^j>, so that <p, z^j> = (G c)_j for p = sum c_k z^k.
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  cplx operator()(int j, int k) const { return matrix_(j, k); }

  /// 1/sqrt(G(j,j)): multiplying z^j by this gives a unit-norm basis element.
  Eigen::VectorXd orthonormal_scale() const;

  /// Solves G c = b through the diagonally rescaled Cholesky factor.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;

  /// ||p||^2 = c^H G c.
  double norm_squared(const ComplexPolynomial& p) const;

 private:
  WeightTag tag_;
  Eigen::MatrixXcd matrix_;
  Eigen::VectorXd scale_;
  Eigen::LLT<Eigen::MatrixXcd> llt_;
};

/// Gram matrix of monomials in the weighted inner product, on the grid.
/// Hyperbolic requires a radial grid inside the closed unit disk; planar
/// accepts disks and truncated planes.
WeightedGram gram(const WeightTag& weight, int n, const QuadratureGrid& grid);

}  // namespace zeropack
