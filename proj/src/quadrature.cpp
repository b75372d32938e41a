#include "polyvem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace polyvem {

void legendre(int n, double s, double& value, double& derivative) {
  double p0 = 1.0, p1 = s;
  if (n == 0) {
    value = 1.0;
    derivative = 0.0;
    return;
  }
  for (int j = 2; j <= n; ++j) {
    double p2 = ((2.0 * j - 1.0) * s * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  value = p1;
  if (std::abs(s) == 1.0) {
    derivative = 0.5 * n * (n + 1) * std::pow(s, n + 1);
  } else {
    derivative = n * (s * p1 - p0) / (s * s - 1.0);
  }
}

QuadratureRule1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  QuadratureRule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p = 0, dp = 0;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, p, dp);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(n, x, p, dp);
    r.nodes[n - 1 - i] = x;
    r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

QuadratureRule1D gauss_lobatto(int n) {
  if (n < 2) throw std::invalid_argument("gauss_lobatto needs n >= 2");
  QuadratureRule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int m = n - 1;
  r.nodes[0] = -1.0;
  r.nodes[m] = 1.0;
  // Interior nodes are the roots of P'_m; Newton on P'_m with P''_m from the
  // Legendre ODE.
  for (int i = 1; i < m; ++i) {
    double x = -std::cos(std::numbers::pi * i / m);
    for (int it = 0; it < 100; ++it) {
      double p = 0, dp = 0;
      legendre(m, x, p, dp);
      double d2p = (2.0 * x * dp - m * (m + 1.0) * p) / (1.0 - x * x);
      double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
  }
  for (int i = 0; i < n; ++i) {
    double p = 0, dp = 0;
    legendre(m, r.nodes[i], p, dp);
    r.weights[i] = 2.0 / (m * (m + 1.0) * p * p);
  }
  return r;
}

const QuadratureRule2D& reference_triangle_rule(int degree) {
  static std::mutex mutex;
  static std::map<int, QuadratureRule2D> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(degree);
  if (it != cache.end()) return it->second;

  // x = u, y = v (1 - u) with Jacobian (1 - u): degree+1 in u, degree in v.
  const int n = (degree + 3) / 2;
  QuadratureRule1D g = gauss_legendre(n);
  QuadratureRule2D r;
  for (int i = 0; i < n; ++i) {
    double u = 0.5 * (g.nodes[i] + 1.0);
    for (int j = 0; j < n; ++j) {
      double v = 0.5 * (g.nodes[j] + 1.0);
      r.nodes.push_back({u, v * (1.0 - u)});
      r.weights.push_back(0.25 * g.weights[i] * g.weights[j] * (1.0 - u));
    }
  }
  return cache.emplace(degree, std::move(r)).first->second;
}

QuadratureRule2D triangle_quadrature(const Triangle& t, int degree) {
  const QuadratureRule2D& ref = reference_triangle_rule(degree);
  QuadratureRule2D r;
  r.nodes.reserve(ref.size());
  r.weights.reserve(ref.size());
  Point2 e1 = t.b - t.a, e2 = t.c - t.a;
  double jac = std::abs(cross(e1, e2));
  for (std::size_t q = 0; q < ref.size(); ++q) {
    r.nodes.push_back(t.a + ref.nodes[q].x * e1 + ref.nodes[q].y * e2);
    r.weights.push_back(ref.weights[q] * jac);
  }
  return r;
}

QuadratureRule2D polygon_quadrature(const Polygon& p, int degree) {
  QuadratureRule2D r;
  for (const Triangle& t : ear_clip(p)) {
    if (t.area() <= 0.0) continue;
    QuadratureRule2D tr = triangle_quadrature(t, degree);
    r.nodes.insert(r.nodes.end(), tr.nodes.begin(), tr.nodes.end());
    r.weights.insert(r.weights.end(), tr.weights.begin(), tr.weights.end());
  }
  return r;
}

}  // namespace polyvem
