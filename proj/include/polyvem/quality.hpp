#pragma once

#include <string>
#include <vector>

#include "polyvem/datasets.hpp"
#include "polyvem/geometry.hpp"
#include "polyvem/mesh.hpp"

namespace polyvem {

struct ElementQuality {
  double rho1 = 0.0;  ///< kernel area / area
  double rho2 = 0.0;  ///< min(sqrt|P|, shortest edge) / max(sqrt|P|, diameter)
  double rho3 = 0.0;  ///< 3 / number of edges
  double rho4 = 0.0;  ///< worst edge ratio within a collinear run of edges

  /// Contribution of the element to the mesh indicator.
  double combined() const { return (rho1 * rho2 + rho1 * rho3 + rho1 * rho4) / 3.0; }
};

ElementQuality element_quality(const Polygon& p);

struct QualityReport {
  std::vector<ElementQuality> elements;
  double rho = 0.0;
  double mean_rho1 = 0.0, mean_rho2 = 0.0, mean_rho3 = 0.0, mean_rho4 = 0.0;
  MeshStats stats;
};

/// Square root of the element average of ElementQuality::combined().
double combine_quality(const std::vector<ElementQuality>& elements);

QualityReport mesh_quality(const PolygonalMesh& mesh);

struct DatasetQualityRow {
  int level = 0;
  std::size_t n_vertices = 0;  ///< dof proxy
  double rho = 0.0;
  double A_ratio = 0.0;
  double e_ratio = 0.0;
};

std::vector<DatasetQualityRow> dataset_quality(const std::vector<PolygonalMesh>& meshes);

/// CSV with header level,n_vertices,rho,A_ratio,e_ratio.
std::string quality_csv(const std::vector<DatasetQualityRow>& rows);

/// Per-element CSV (element,rho1,rho2,rho3,rho4) for heat maps.
std::string element_quality_csv(const QualityReport& report);

}  // namespace polyvem
