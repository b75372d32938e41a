#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyvem/geometry.hpp"
#include "polyvem/mesh.hpp"

namespace polyvem {

enum class DatasetKind { Triangle, Maze, Star, Jenga, Slices, Ulike };

std::string to_string(DatasetKind k);
/// Accepts the kind names; a trailing "4" (e.g. "jenga4") is not parsed here.
DatasetKind parse_kind(const std::string& s);

struct DatasetSpec {
  DatasetKind kind = DatasetKind::Triangle;
  int N = 10;     ///< number of refinement steps the deformation schedule spans
  int n_el = 1;   ///< elements inserted per step (4 for the x4 variants)
  double d0 = 0.03;
  double t_min = 0.0;
  double t_max = 0.95;
  std::uint64_t seed = 0;
};

class DatasetError : public std::runtime_error {
 public:
  DatasetError(const std::string& what, int level) : std::runtime_error(what), level_(level) {}
  int level() const { return level_; }

 private:
  int level_;
};

/// Throws std::invalid_argument when the spec violates its invariants.
void check_spec(const DatasetSpec& spec);

/// "jenga", "jenga4", ... used for file names and tables.
std::string dataset_name(const DatasetSpec& spec);

/// Maze polygon with deformation t in [0, 1).
Polygon maze_polygon(double t);

/// Star polygon: regular polygon on the unit circle with 8(1 + floor(10 t))
/// vertices whose odd vertices are pulled towards the origin until the tip
/// angles drop below (1 - t) pi / 3.
Polygon star_polygon(double t);

/// Four half-size copies of a mesh of the unit square, duplicates merged.
PolygonalMesh mirror_mesh(const PolygonalMesh& m);

/// Base meshes before mirroring; m is the number of insertion steps
/// (level times n_el).
PolygonalMesh jenga_base(int m);
PolygonalMesh slices_base(int m);
PolygonalMesh ulike_base(int m);

struct GeneratedLevel {
  PolygonalMesh mesh;
  std::vector<std::string> warnings;
  /// Triangles left skinny because they sit in a small input angle.
  std::vector<Index> angle_exempt;
};

/// Mesh n of the dataset.
GeneratedLevel generate_level(const DatasetSpec& spec, int n);

/// For mirroring kinds the unmirrored base mesh of level n (whose area and
/// edge ratios equal those of the full mesh); other kinds return mesh n.
PolygonalMesh base_mesh(const DatasetSpec& spec, int n);

/// Meshes 0..levels.
std::vector<GeneratedLevel> generate_dataset(const DatasetSpec& spec, int levels);

/// Deformation and polygon area used by hybrid level n.
double hybrid_t(const DatasetSpec& spec, int n);
double hybrid_d(const DatasetSpec& spec, int n);

/// Radius schedule of the triangle dataset.
double triangle_radius(int n);

}  // namespace polyvem
