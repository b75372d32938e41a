#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <vector>

#include "polyvem/geometry.hpp"

namespace polyvem {

struct RefineOptions {
  double max_area = std::numeric_limits<double>::infinity();
  double min_angle_deg = 0.0;  ///< 0 disables angle refinement
  std::size_t max_steiner = 500000;
};

struct TriangulationResult {
  std::vector<Point2> points;
  /// CCW triangles of the domain (regions reachable from the square boundary
  /// without crossing a segment).
  std::vector<std::array<std::size_t, 3>> triangles;
  /// Triangles sitting in a small input angle that refinement cannot fix;
  /// parallel to `triangles`.
  std::vector<bool> angle_exempt;
  /// For every input segment, the vertex ids along it from its first to its
  /// second endpoint, including inserted split points.
  std::vector<std::vector<std::size_t>> segment_chains;
  std::size_t steiner_points = 0;
  bool cap_reached = false;
};

/// Delaunay triangulation of the unit square and the given points (the four
/// corners are added automatically; points on the square boundary split its
/// sides). Built by incremental insertion with Lawson flips.
TriangulationResult delaunay_unit_square(const std::vector<Point2>& points);

/// Constrained, refined triangulation of the unit square. `segments` index
/// into `points`; closed segment loops enclose holes, whose triangles are
/// dropped. Segments may be split but never moved. Refinement inserts
/// circumcenters (splitting encroached segments first) until every domain
/// triangle satisfies the area bound and, except at small input angles, the
/// minimum angle, or until the Steiner cap is reached.
TriangulationResult constrained_delaunay_refine(const std::vector<Point2>& points,
                                                const std::vector<std::array<std::size_t, 2>>& segments,
                                                const RefineOptions& opt);

/// Smallest interior angle of a triangle in degrees.
double min_angle_deg(Point2 a, Point2 b, Point2 c);

}  // namespace polyvem
