#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyvem/geometry.hpp"

namespace polyvem {

using Index = std::size_t;
using ElementLoop = std::vector<Index>;

/// Polygonal mesh of the unit square. Elements are CCW vertex loops into the
/// shared vertex array; collinear vertices on an edge are ordinary vertices of
/// every element that touches them.
struct PolygonalMesh {
  std::vector<Point2> vertices;
  std::vector<ElementLoop> elements;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_elements() const { return elements.size(); }
  Polygon element_polygon(std::size_t e) const;

  /// Per-vertex flag: true if the vertex lies on an edge used by exactly one
  /// element.
  std::vector<bool> boundary_vertex_flags() const;
};

struct MeshViolation {
  enum class Kind { InvalidElement, Orientation, Nonconforming, BoundaryGap, AreaMismatch, IndexRange };
  Kind kind;
  std::size_t element;  ///< offending element, or npos for mesh-wide checks
  std::string message;
};

std::string to_string(MeshViolation::Kind k);

/// Conformity and tiling diagnostics for a mesh of the unit square. An empty
/// result means the mesh is valid.
std::vector<MeshViolation> validate(const PolygonalMesh& mesh, double tol = 1e-9);

struct MeshStats {
  double h = 0.0;        ///< max element diameter
  double A_ratio = 0.0;  ///< max |P| / min |P|
  double e_ratio = 0.0;  ///< max |e| / min |e| over all element edges
  std::size_t n_vertices = 0;
  std::size_t n_elements = 0;
};

MeshStats mesh_stats(const PolygonalMesh& mesh);

/// Uniform nx-by-ny grid of squares on the unit square.
PolygonalMesh square_grid(int nx, int ny);

/// Unit square split along the diagonal (0,0)-(1,1).
PolygonalMesh two_triangle_mesh();

class MeshParseError : public std::runtime_error {
 public:
  MeshParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// OFF reader. z coordinates are ignored; faces must be valid CCW polygons.
PolygonalMesh read_off(std::istream& in);
PolygonalMesh read_mesh(const std::filesystem::path& path);

/// OFF writer, 17 significant digits, LF line endings, z written as 0.
void write_off(const PolygonalMesh& mesh, std::ostream& out);
void write_mesh(const PolygonalMesh& mesh, const std::filesystem::path& path);

}  // namespace polyvem
