#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "polyvem/geometry.hpp"
#include "polyvem/mesh.hpp"
#include "polyvem/vem_local.hpp"

namespace oracle {

using polyvem::Point2;
using polyvem::Polygon;

/// Area by the trapezoid formula, sum of (x_{i+1} - x_i)(y_{i+1} + y_i) / 2,
/// negated so that CCW polygons come out positive.
double trapezoid_area(const std::vector<Point2>& v);

/// Maze polygon vertices at deformation t, typed in from the dataset
/// description rather than taken from the library.
std::vector<Point2> maze_vertices(double t);

/// True if every vertex of p is visible from q (segment q-v meets no edge
/// other than at v).
bool sees_all_vertices(const Polygon& p, Point2 q);

/// Distance from q to the boundary of p.
double boundary_distance(const Polygon& p, Point2 q);

/// Random polygon built by perturbing radii of a star around (0.5, 0.5);
/// may or may not have a kernel.
Polygon random_star_polygon(std::mt19937_64& rng, int n, double rmin);

struct VisibilityResult {
  int checked = 0;
  int mismatches = 0;
  int kernel_hits = 0;
};

/// Samples `points` uniform points inside p (away from boundaries) and
/// compares kernel membership against vertex visibility.
VisibilityResult kernel_vs_visibility(const Polygon& p, int points, std::mt19937_64& rng);

/// Monte-Carlo estimate of the integral of fn over p by rejection in the
/// bounding box; returns mean and standard error.
struct MonteCarlo {
  double mean = 0.0;
  double stderr_ = 0.0;
};
template <class Fn>
MonteCarlo monte_carlo(const Polygon& p, Fn&& fn, std::size_t samples, std::uint64_t seed) {
  double xmin = p[0].x, xmax = p[0].x, ymin = p[0].y, ymax = p[0].y;
  for (const auto& v : p.vertices) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  const double box = (xmax - xmin) * (ymax - ymin);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(xmin, xmax), uy(ymin, ymax);
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    Point2 q{ux(rng), uy(rng)};
    double v = polyvem::contains(p, q) ? box * fn(q) : 0.0;
    s += v;
    s2 += v * v;
  }
  MonteCarlo mc;
  mc.mean = s / samples;
  double var = s2 / samples - mc.mean * mc.mean;
  mc.stderr_ = std::sqrt(std::max(var, 0.0) / samples);
  return mc;
}

/// Stiffness of two polynomials given by coefficient vectors in the basis of
/// cb, integrated directly by quadrature (no VEM projections involved).
double polynomial_stiffness(const polyvem::CellBasis& cb, const Polygon& p, const Eigen::VectorXd& a,
                            const Eigen::VectorXd& b);

}  // namespace oracle

