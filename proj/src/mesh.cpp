#include "polyvem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace polyvem {

namespace {

std::uint64_t segment_key(Index a, Index b) {
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

bool on_domain_boundary(Point2 a, Point2 b, double tol) {
  auto same_side = [tol](double u, double v, double c) {
    return std::abs(u - c) <= tol && std::abs(v - c) <= tol;
  };
  return same_side(a.x, b.x, 0.0) || same_side(a.x, b.x, 1.0) || same_side(a.y, b.y, 0.0) ||
         same_side(a.y, b.y, 1.0);
}

}  // namespace

Polygon PolygonalMesh::element_polygon(std::size_t e) const {
  Polygon p;
  p.vertices.reserve(elements[e].size());
  for (Index v : elements[e]) p.vertices.push_back(vertices[v]);
  return p;
}

std::vector<bool> PolygonalMesh::boundary_vertex_flags() const {
  std::unordered_map<std::uint64_t, int> count;
  for (const auto& loop : elements) {
    for (std::size_t i = 0; i < loop.size(); ++i) {
      Index a = loop[i], b = loop[(i + 1) % loop.size()];
      ++count[segment_key(std::min(a, b), std::max(a, b))];
    }
  }
  std::vector<bool> flags(vertices.size(), false);
  for (const auto& [key, c] : count) {
    if (c == 1) {
      flags[key >> 32] = true;
      flags[key & 0xffffffffu] = true;
    }
  }
  return flags;
}

std::string to_string(MeshViolation::Kind k) {
  switch (k) {
    case MeshViolation::Kind::InvalidElement: return "invalid-element";
    case MeshViolation::Kind::Orientation: return "orientation";
    case MeshViolation::Kind::Nonconforming: return "nonconforming";
    case MeshViolation::Kind::BoundaryGap: return "boundary-gap";
    case MeshViolation::Kind::AreaMismatch: return "area-mismatch";
    case MeshViolation::Kind::IndexRange: return "index-range";
  }
  return "unknown";
}

std::vector<MeshViolation> validate(const PolygonalMesh& mesh, double tol) {
  using Kind = MeshViolation::Kind;
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<MeshViolation> out;

  std::vector<bool> usable(mesh.elements.size(), true);
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const auto& loop = mesh.elements[e];
    bool in_range = loop.size() >= 3;
    for (Index v : loop) in_range = in_range && v < mesh.vertices.size();
    if (!in_range) {
      out.push_back({Kind::IndexRange, e, "element " + std::to_string(e) + " has a bad vertex index or fewer than 3 vertices"});
      usable[e] = false;
      continue;
    }
    std::string msg = check_polygon(mesh.element_polygon(e));
    if (!msg.empty()) {
      Kind kind = msg.rfind("orientation", 0) == 0 ? Kind::Orientation : Kind::InvalidElement;
      out.push_back({kind, e, "element " + std::to_string(e) + ": " + msg});
      usable[e] = false;
    }
  }

  // Each directed segment must be matched by its reverse in another element,
  // unless it lies on the domain boundary.
  std::unordered_map<std::uint64_t, std::size_t> owner;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    if (!usable[e]) continue;
    const auto& loop = mesh.elements[e];
    for (std::size_t i = 0; i < loop.size(); ++i) {
      Index a = loop[i], b = loop[(i + 1) % loop.size()];
      auto [it, inserted] = owner.emplace(segment_key(a, b), e);
      if (!inserted) {
        out.push_back({Kind::Nonconforming, e,
                       "segment " + std::to_string(a) + "->" + std::to_string(b) + " used by elements " +
                           std::to_string(it->second) + " and " + std::to_string(e) + " (overlap)"});
      }
    }
  }
  double boundary_length = 0.0;
  for (const auto& [key, e] : owner) {
    Index a = key >> 32, b = key & 0xffffffffu;
    if (owner.count(segment_key(b, a))) continue;
    Point2 pa = mesh.vertices[a], pb = mesh.vertices[b];
    if (on_domain_boundary(pa, pb, tol)) {
      boundary_length += distance(pa, pb);
    } else {
      out.push_back({Kind::Nonconforming, e,
                     "segment " + std::to_string(a) + "->" + std::to_string(b) + " of element " +
                         std::to_string(e) + " has no neighbour and is not on the boundary"});
    }
  }
  if (std::abs(boundary_length - 4.0) > 4.0 * tol * 10) {
    std::ostringstream s;
    s << "boundary length " << std::setprecision(12) << boundary_length << " differs from 4";
    out.push_back({Kind::BoundaryGap, npos, s.str()});
  }

  double total = 0.0;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e)
    if (usable[e]) total += signed_area(mesh.element_polygon(e));
  if (std::abs(total - 1.0) > tol) {
    std::ostringstream s;
    s << "element areas sum to " << std::setprecision(15) << total;
    out.push_back({Kind::AreaMismatch, npos, s.str()});
  }
  return out;
}

MeshStats mesh_stats(const PolygonalMesh& mesh) {
  MeshStats st;
  st.n_vertices = mesh.vertices.size();
  st.n_elements = mesh.elements.size();
  double amin = std::numeric_limits<double>::infinity(), amax = 0.0;
  double emin = std::numeric_limits<double>::infinity(), emax = 0.0;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    PolygonMetrics m = polygon_metrics(mesh.element_polygon(e));
    amin = std::min(amin, m.area);
    amax = std::max(amax, m.area);
    emin = std::min(emin, m.shortest_edge);
    emax = std::max(emax, m.longest_edge);
    st.h = std::max(st.h, m.diameter);
  }
  if (!mesh.elements.empty()) {
    st.A_ratio = amax / amin;
    st.e_ratio = emax / emin;
  }
  return st;
}

PolygonalMesh square_grid(int nx, int ny) {
  PolygonalMesh m;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) m.vertices.push_back({static_cast<double>(i) / nx, static_cast<double>(j) / ny});
  auto id = [nx](int i, int j) { return static_cast<Index>(j * (nx + 1) + i); };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) m.elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  return m;
}

PolygonalMesh two_triangle_mesh() {
  PolygonalMesh m;
  m.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  m.elements = {{0, 1, 2}, {0, 2, 3}};
  return m;
}

namespace {

struct LineReader {
  std::istream& in;
  std::size_t line_no = 0;

  // Next non-empty line with comments stripped; false at end of input.
  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  }
};

}  // namespace

PolygonalMesh read_off(std::istream& in) {
  LineReader r{in};
  std::string line;
  if (!r.next(line)) throw MeshParseError("empty input", r.line_no);
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  if (magic != "OFF") throw MeshParseError("expected OFF header", r.line_no);

  // Counts may follow the header on the same line.
  long nv = -1, nf = -1, ne = 0;
  if (!(header >> nv >> nf)) {
    if (!r.next(line)) throw MeshParseError("missing counts line", r.line_no);
    std::istringstream counts(line);
    if (!(counts >> nv >> nf)) throw MeshParseError("malformed counts line", r.line_no);
    counts >> ne;
  }
  if (nv < 0 || nf < 0) throw MeshParseError("negative counts", r.line_no);

  PolygonalMesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    if (!r.next(line)) throw MeshParseError("unexpected end of vertex list", r.line_no);
    std::istringstream s(line);
    Point2 p;
    if (!(s >> p.x >> p.y)) throw MeshParseError("malformed vertex", r.line_no);
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw MeshParseError("non-finite vertex", r.line_no);
    mesh.vertices.push_back(p);
  }
  mesh.elements.reserve(static_cast<std::size_t>(nf));
  for (long f = 0; f < nf; ++f) {
    if (!r.next(line)) throw MeshParseError("unexpected end of face list", r.line_no);
    std::istringstream s(line);
    long m = 0;
    if (!(s >> m) || m < 3) throw MeshParseError("face needs at least 3 vertices", r.line_no);
    ElementLoop loop(static_cast<std::size_t>(m));
    for (auto& v : loop) {
      long idx = -1;
      if (!(s >> idx)) throw MeshParseError("malformed face", r.line_no);
      if (idx < 0 || idx >= nv) throw MeshParseError("vertex index out of range", r.line_no);
      v = static_cast<Index>(idx);
    }
    for (std::size_t i = 0; i < loop.size(); ++i)
      if (loop[i] == loop[(i + 1) % loop.size()]) throw MeshParseError("repeated consecutive index", r.line_no);
    mesh.elements.push_back(std::move(loop));
    std::string msg = check_polygon(mesh.element_polygon(mesh.elements.size() - 1));
    if (!msg.empty()) throw MeshParseError("invalid face: " + msg, r.line_no);
  }
  return mesh;
}

PolygonalMesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_off(in);
}

void write_off(const PolygonalMesh& mesh, std::ostream& out) {
  out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.elements.size() << " 0\n";
  out << std::setprecision(17);
  for (const auto& p : mesh.vertices) out << p.x << ' ' << p.y << " 0\n";
  for (const auto& loop : mesh.elements) {
    out << loop.size();
    for (Index v : loop) out << ' ' << v;
    out << '\n';
  }
}

void write_mesh(const PolygonalMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_off(mesh, out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace polyvem
