#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyvem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

/// Twice the signed area of triangle (a, b, c); positive when CCW.
inline double orient2d(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

/// Raised for polygons violating the element invariants (orientation,
/// duplicate vertices, zero area, self-intersection).
class InvalidPolygon : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when ear clipping cannot find an ear; carries the vertex where the
/// search stalled.
class EarClipError : public std::runtime_error {
 public:
  EarClipError(const std::string& what, std::size_t vertex)
      : std::runtime_error(what), vertex_(vertex) {}
  std::size_t vertex() const { return vertex_; }

 private:
  std::size_t vertex_;
};

/// A simple polygon stored as a counter-clockwise vertex loop. Consecutive
/// collinear vertices are allowed.
struct Polygon {
  std::vector<Point2> vertices;

  std::size_t size() const { return vertices.size(); }
  const Point2& operator[](std::size_t i) const { return vertices[i]; }
  const Point2& vertex(std::size_t i) const { return vertices[i % vertices.size()]; }
  /// Edge i runs from vertex i to vertex i+1 (cyclically).
  Point2 edge_vector(std::size_t i) const { return vertex(i + 1) - vertex(i); }
  double edge_length(std::size_t i) const { return norm(edge_vector(i)); }
};

struct Triangle {
  Point2 a, b, c;
  double area() const { return 0.5 * orient2d(a, b, c); }
};

struct PolygonMetrics {
  double area = 0.0;
  Point2 centroid;
  double diameter = 0.0;
  double shortest_edge = 0.0;
  double longest_edge = 0.0;
};

double signed_area(const Polygon& p);

/// Area, centroid, diameter and edge-length extrema. Throws InvalidPolygon
/// on fewer than three vertices or non-positive area.
PolygonMetrics polygon_metrics(const Polygon& p);

/// Max distance between vertices (exact for polygons).
double polygon_diameter(const Polygon& p);

/// Checks all invariants of an element polygon, O(n^2) for simplicity.
/// Returns an empty string when valid, a description otherwise.
std::string check_polygon(const Polygon& p);

/// Throws InvalidPolygon with the description from check_polygon.
void require_valid(const Polygon& p);

bool is_convex(const Polygon& p, double tol = 1e-12);

/// Point in polygon by winding number; points on the boundary count as
/// inside when `closed` is set.
bool contains(const Polygon& p, Point2 q, bool closed = true);

/// Proper or improper intersection of closed segments [a,b] and [c,d].
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d);

struct KernelResult {
  Polygon kernel;  ///< empty vertex list when the kernel is empty
  double area = 0.0;
};

/// Intersection of the inner half-planes of all edges of `p`.
KernelResult polygon_kernel(const Polygon& p);

/// Triangulates a simple CCW polygon. Collinear vertices are removed as
/// zero-area ears only when no proper ear remains.
std::vector<Triangle> ear_clip(const Polygon& p);

/// Index form of ear_clip: each triangle references vertices of `p`.
std::vector<std::array<std::size_t, 3>> ear_clip_indices(const Polygon& p);

struct EdgeGroup {
  std::size_t first_edge = 0;  ///< index of the first edge of the run
  std::size_t count = 0;       ///< number of consecutive edges (cyclic)
};

/// Maximal cyclic runs of consecutive collinear edges. `tol` bounds the
/// normalized cross product between consecutive edge directions.
std::vector<EdgeGroup> collinear_submeshes(const Polygon& p, double tol = 1e-9);

/// Convex hull (monotone chain), CCW, collinear points dropped.
std::vector<Point2> convex_hull(std::vector<Point2> pts);

/// Apply x -> scale * (x - anchor) + offset to every vertex.
Polygon transformed(const Polygon& p, double scale, Point2 anchor, Point2 offset);

/// True if the two polygons overlap or touch (boundary crossing or one
/// containing the other).
bool polygons_intersect(const Polygon& a, const Polygon& b);

}  // namespace polyvem
