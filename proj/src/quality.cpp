#include "polyvem/quality.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polyvem/parallel.hpp"

namespace polyvem {

ElementQuality element_quality(const Polygon& p) {
  const PolygonMetrics m = polygon_metrics(p);
  ElementQuality q;
  q.rho1 = std::clamp(polygon_kernel(p).area / m.area, 0.0, 1.0);
  const double s = std::sqrt(m.area);
  q.rho2 = std::min(s, m.shortest_edge) / std::max(s, m.diameter);
  q.rho3 = 3.0 / static_cast<double>(p.size());
  q.rho4 = 1.0;
  for (const EdgeGroup& g : collinear_submeshes(p)) {
    double lo = p.edge_length(g.first_edge), hi = lo;
    for (std::size_t i = 1; i < g.count; ++i) {
      double l = p.edge_length((g.first_edge + i) % p.size());
      lo = std::min(lo, l);
      hi = std::max(hi, l);
    }
    q.rho4 = std::min(q.rho4, lo / hi);
  }
  return q;
}

double combine_quality(const std::vector<ElementQuality>& elements) {
  if (elements.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& e : elements) sum += e.combined();
  return std::sqrt(sum / static_cast<double>(elements.size()));
}

QualityReport mesh_quality(const PolygonalMesh& mesh) {
  QualityReport r;
  r.elements.resize(mesh.num_elements());
  parallel_for(mesh.num_elements(), [&](std::size_t e) { r.elements[e] = element_quality(mesh.element_polygon(e)); });
  r.rho = combine_quality(r.elements);
  for (const auto& e : r.elements) {
    r.mean_rho1 += e.rho1;
    r.mean_rho2 += e.rho2;
    r.mean_rho3 += e.rho3;
    r.mean_rho4 += e.rho4;
  }
  if (!r.elements.empty()) {
    const double n = static_cast<double>(r.elements.size());
    r.mean_rho1 /= n;
    r.mean_rho2 /= n;
    r.mean_rho3 /= n;
    r.mean_rho4 /= n;
  }
  r.stats = mesh_stats(mesh);
  return r;
}

std::vector<DatasetQualityRow> dataset_quality(const std::vector<PolygonalMesh>& meshes) {
  std::vector<DatasetQualityRow> rows;
  for (std::size_t n = 0; n < meshes.size(); ++n) {
    QualityReport q = mesh_quality(meshes[n]);
    rows.push_back({static_cast<int>(n), meshes[n].num_vertices(), q.rho, q.stats.A_ratio, q.stats.e_ratio});
  }
  return rows;
}

std::string quality_csv(const std::vector<DatasetQualityRow>& rows) {
  std::ostringstream out;
  out.precision(10);
  out << "level,n_vertices,rho,A_ratio,e_ratio\n";
  for (const auto& r : rows) out << r.level << ',' << r.n_vertices << ',' << r.rho << ',' << r.A_ratio << ',' << r.e_ratio << '\n';
  return out.str();
}

std::string element_quality_csv(const QualityReport& report) {
  std::ostringstream out;
  out.precision(10);
  out << "element,rho1,rho2,rho3,rho4\n";
  for (std::size_t e = 0; e < report.elements.size(); ++e) {
    const auto& q = report.elements[e];
    out << e << ',' << q.rho1 << ',' << q.rho2 << ',' << q.rho3 << ',' << q.rho4 << '\n';
  }
  return out.str();
}

}  // namespace polyvem
