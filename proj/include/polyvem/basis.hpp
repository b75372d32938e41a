#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "polyvem/geometry.hpp"

namespace polyvem {

enum class BasisKind { Monomial, Orthonormal };

/// Dimension of P_k in two variables; 0 for k < 0.
inline int poly_dim(int k) { return k < 0 ? 0 : (k + 1) * (k + 2) / 2; }

/// Exponents (a, b) of x^a y^b in graded-lex order:
/// (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...
const std::vector<std::array<int, 2>>& monomial_exponents(int k);

/// Thrown by orthonormalize when the Gram matrix is numerically singular.
class SingularBasis : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Polynomial basis on an element: phi_i = sum_j L(i,j) m_j, where m_j are
/// the scaled monomials ((x - xc) / h)^alpha. For the monomial kind L is the
/// identity.
struct CellBasis {
  int k = 0;
  BasisKind kind = BasisKind::Monomial;
  Point2 centroid;
  double h = 1.0;
  Eigen::MatrixXd L;

  int dim() const { return poly_dim(k); }

  /// Scaled monomial values at x.
  Eigen::VectorXd monomials(Point2 x) const;
  /// Scaled monomial gradients at x, one row per monomial.
  Eigen::MatrixXd monomial_gradients(Point2 x) const;

  Eigen::VectorXd values(Point2 x) const { return L * monomials(x); }
  Eigen::MatrixXd gradients(Point2 x) const { return L * monomial_gradients(x); }

  /// Laplacian of every basis function expanded in scaled monomials of
  /// degree <= k-2 (dim x poly_dim(k-2)).
  Eigen::MatrixXd laplacian_coefficients() const;
};

CellBasis scaled_monomials(const Polygon& p, int k);
CellBasis scaled_monomials(Point2 centroid, double h, int k);

/// Basis orthonormal for the area-averaged product (1/|P|) int_P u v, from
/// modified Gram-Schmidt (with one reorthogonalization pass) applied to the
/// scaled monomials. The first function is the constant 1. L is lower
/// triangular. Throws SingularBasis when a monomial is numerically dependent
/// on its predecessors.
CellBasis orthonormalize(const Polygon& p, int k);

/// Legendre polynomials mapped to the edge [a, b].
struct EdgeBasis {
  int k = 0;
  Point2 a, b;

  /// Values of L_0..L_k at the point with edge parameter s in [-1, 1].
  Eigen::VectorXd values(double s) const;
  Point2 point(double s) const { return 0.5 * (1.0 - s) * a + 0.5 * (1.0 + s) * b; }
  double length() const { return distance(a, b); }
};

}  // namespace polyvem
