#pragma once

#include <stdexcept>
#include <vector>

#include "polyvem/geometry.hpp"

namespace polyvem {

/// 1D rule on [-1, 1].
struct QuadratureRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

struct QuadratureRule2D {
  std::vector<Point2> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

/// Legendre polynomial P_n and its derivative at s.
void legendre(int n, double s, double& value, double& derivative);

/// n-point Gauss-Legendre rule, exact to degree 2n-1.
QuadratureRule1D gauss_legendre(int n);

/// n-point Gauss-Lobatto rule including both endpoints, exact to degree
/// 2n-3. Throws std::invalid_argument for n < 2.
QuadratureRule1D gauss_lobatto(int n);

/// Rule on the reference triangle (0,0),(1,0),(0,1) exact to `degree`,
/// built from a collapsed tensor Gauss rule. Cached per degree.
const QuadratureRule2D& reference_triangle_rule(int degree);

/// Rule on a single triangle exact to `degree`.
QuadratureRule2D triangle_quadrature(const Triangle& t, int degree);

/// Ear-clips `p` and places a triangle rule on every ear.
QuadratureRule2D polygon_quadrature(const Polygon& p, int degree);

}  // namespace polyvem
