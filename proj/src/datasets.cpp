#include "polyvem/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <unordered_map>

#include "polyvem/poisson_disk.hpp"
#include "polyvem/triangulation.hpp"

namespace polyvem {

namespace {

constexpr double kTriangleR0 = 0.14;
constexpr int kShrinkSteps = 20;
constexpr double kShrinkFraction = 0.05;

std::uint64_t level_seed(const DatasetSpec& spec, int n) {
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(spec.kind)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

struct VertexKey {
  std::uint64_t x, y;
  bool operator==(const VertexKey& o) const { return x == o.x && y == o.y; }
};

struct VertexKeyHash {
  std::size_t operator()(const VertexKey& k) const { return std::hash<std::uint64_t>()(k.x * 0x9e3779b97f4a7c15ULL ^ k.y); }
};

VertexKey key_of(Point2 p) {
  VertexKey k;
  double x = p.x + 0.0, y = p.y + 0.0;  // folds -0 into +0
  std::memcpy(&k.x, &x, sizeof x);
  std::memcpy(&k.y, &y, sizeof y);
  return k;
}

/// Builds a mesh from polygons given by coordinates, merging equal points.
class MeshBuilder {
 public:
  Index vertex(Point2 p) {
    auto [it, inserted] = ids_.emplace(key_of(p), mesh_.vertices.size());
    if (inserted) mesh_.vertices.push_back(p);
    return it->second;
  }
  void element(const std::vector<Point2>& loop) {
    ElementLoop e;
    for (Point2 p : loop) e.push_back(vertex(p));
    mesh_.elements.push_back(std::move(e));
  }
  PolygonalMesh take() { return std::move(mesh_); }

 private:
  PolygonalMesh mesh_;
  std::unordered_map<VertexKey, Index, VertexKeyHash> ids_;
};

struct Box {
  Point2 lo, hi;
};

Box bounding_box(const Polygon& p) {
  Box b{p[0], p[0]};
  for (const auto& v : p.vertices) {
    b.lo = {std::min(b.lo.x, v.x), std::min(b.lo.y, v.y)};
    b.hi = {std::max(b.hi.x, v.x), std::max(b.hi.y, v.y)};
  }
  return b;
}

bool boxes_overlap(const Box& a, const Box& b) {
  return a.lo.x <= b.hi.x && b.lo.x <= a.hi.x && a.lo.y <= b.hi.y && b.lo.y <= a.hi.y;
}

PolygonalMesh triangle_level(const DatasetSpec& spec, int n) {
  const double r = triangle_radius(n);
  const int per_side = std::max(1, static_cast<int>(std::floor(1.0 / r)));
  std::vector<Point2> boundary;
  for (int i = 0; i < per_side; ++i) {
    // i / per_side on every side, so opposite sides carry identical values
    const double s = static_cast<double>(i) / per_side;
    const double t = static_cast<double>(per_side - i) / per_side;
    boundary.push_back({s, 0.0});
    boundary.push_back({1.0, s});
    boundary.push_back({t, 1.0});
    boundary.push_back({0.0, t});
  }
  PoissonDiskOptions opt;
  opt.radius = r;
  opt.seed = level_seed(spec, n);
  std::vector<Point2> pts = poisson_disk(opt, boundary);
  pts.insert(pts.begin(), boundary.begin(), boundary.end());
  TriangulationResult tr = delaunay_unit_square(pts);
  PolygonalMesh m;
  m.vertices = tr.points;
  for (const auto& t : tr.triangles) m.elements.push_back({t[0], t[1], t[2]});
  return m;
}

GeneratedLevel hybrid_level(const DatasetSpec& spec, int n) {
  GeneratedLevel out;
  const double t = hybrid_t(spec, n);
  const double d = hybrid_d(spec, n);
  const std::size_t copies = std::size_t{1} << n;
  const Polygon shape = spec.kind == DatasetKind::Maze ? maze_polygon(t) : star_polygon(t);
  const Box sb = bounding_box(shape);
  const Point2 anchor = 0.5 * (sb.lo + sb.hi);
  const double shape_area = signed_area(shape);
  const double half_extent = 0.5 * std::max(sb.hi.x - sb.lo.x, sb.hi.y - sb.lo.y) * std::sqrt(d / shape_area);

  std::mt19937_64 rng(level_seed(spec, n));
  const double margin = std::min(0.49, half_extent * 1.05);
  PoissonDiskOptions opt;
  opt.radius = 1.0 / std::sqrt(2.0 * static_cast<double>(copies));
  opt.lo = {margin, margin};
  opt.hi = {1 - margin, 1 - margin};
  std::vector<Point2> centers;
  for (int attempt = 0; attempt < 200; ++attempt) {
    opt.seed = rng();
    centers = poisson_disk(opt);
    if (centers.size() >= copies) break;
    opt.radius *= 0.95;
  }
  if (centers.size() < copies) throw DatasetError("could not sample polygon centers", n);
  std::shuffle(centers.begin(), centers.end(), rng);
  centers.resize(copies);

  std::vector<Polygon> placed;
  double area = d;
  for (int it = 0;; ++it) {
    area = d * (1.0 - kShrinkFraction * it);
    const double scale = std::sqrt(area / shape_area);
    placed.clear();
    for (Point2 c : centers) placed.push_back(transformed(shape, scale, anchor, c));
    std::vector<Box> boxes;
    for (const auto& p : placed) boxes.push_back(bounding_box(p));
    bool ok = true;
    for (std::size_t i = 0; i < placed.size() && ok; ++i) {
      if (boxes[i].lo.x <= 0 || boxes[i].lo.y <= 0 || boxes[i].hi.x >= 1 || boxes[i].hi.y >= 1) ok = false;
      for (std::size_t j = i + 1; j < placed.size() && ok; ++j)
        if (boxes_overlap(boxes[i], boxes[j]) && polygons_intersect(placed[i], placed[j])) ok = false;
    }
    if (ok) break;
    if (it == kShrinkSteps) throw DatasetError("polygon copies still intersect after shrinking", n);
  }

  std::vector<Point2> pts;
  std::vector<std::array<std::size_t, 2>> segs;
  for (const auto& p : placed) {
    std::size_t base = pts.size();
    for (std::size_t i = 0; i < p.size(); ++i) {
      pts.push_back(p[i]);
      segs.push_back({base + i, base + (i + 1) % p.size()});
    }
  }
  RefineOptions ro;
  ro.max_area = area;
  ro.min_angle_deg = 20.0;
  TriangulationResult tr = constrained_delaunay_refine(pts, segs, ro);
  if (tr.cap_reached) out.warnings.push_back("Steiner point cap reached; triangle quality not guaranteed");

  out.mesh.vertices = tr.points;
  for (std::size_t t = 0; t < tr.triangles.size(); ++t) {
    const auto& tri = tr.triangles[t];
    if (tr.angle_exempt[t]) out.angle_exempt.push_back(out.mesh.elements.size());
    out.mesh.elements.push_back({tri[0], tri[1], tri[2]});
  }
  std::size_t s = 0;
  for (const auto& p : placed) {
    ElementLoop loop;
    for (std::size_t i = 0; i < p.size(); ++i, ++s)
      loop.insert(loop.end(), tr.segment_chains[s].begin(), tr.segment_chains[s].end() - 1);
    out.mesh.elements.push_back(std::move(loop));
  }
  return out;
}

PolygonalMesh mirrored(PolygonalMesh m, int times) {
  for (int i = 0; i < times; ++i) m = mirror_mesh(m);
  return m;
}

}  // namespace

std::string to_string(DatasetKind k) {
  switch (k) {
    case DatasetKind::Triangle: return "triangle";
    case DatasetKind::Maze: return "maze";
    case DatasetKind::Star: return "star";
    case DatasetKind::Jenga: return "jenga";
    case DatasetKind::Slices: return "slices";
    case DatasetKind::Ulike: return "ulike";
  }
  return "?";
}

DatasetKind parse_kind(const std::string& s) {
  for (DatasetKind k : {DatasetKind::Triangle, DatasetKind::Maze, DatasetKind::Star, DatasetKind::Jenga,
                        DatasetKind::Slices, DatasetKind::Ulike})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown dataset kind '" + s + "'");
}

void check_spec(const DatasetSpec& spec) {
  if (spec.N < 1) throw std::invalid_argument("N must be at least 1");
  if (spec.n_el < 1) throw std::invalid_argument("n_el must be at least 1");
  if (!(spec.d0 > 0 && spec.d0 < 1)) throw std::invalid_argument("d0 must lie in (0, 1)");
  if (!(spec.t_min >= 0 && spec.t_min <= spec.t_max && spec.t_max < 1))
    throw std::invalid_argument("deformation range must satisfy 0 <= t_min <= t_max < 1");
}

std::string dataset_name(const DatasetSpec& spec) {
  std::string s = to_string(spec.kind);
  if (spec.n_el != 1) s += std::to_string(spec.n_el);
  return s;
}

Polygon maze_polygon(double t) {
  if (!(t >= 0 && t < 1)) throw std::invalid_argument("maze_polygon: t must lie in [0, 1)");
  const double q = t / 4;
  return Polygon{{{0, 1},
                  {0, 0},
                  {1, 0},
                  {1, 0.75},
                  {0.5, 0.75},
                  {0.5, 0.5 + q},
                  {0.75 + q, 0.5 + q},
                  {0.75 + q, 0.25 - q},
                  {0.25 - q, 0.25 - q},
                  {0.25 - q, 1}}};
}

Polygon star_polygon(double t) {
  if (!(t >= 0 && t < 1)) throw std::invalid_argument("star_polygon: t must lie in [0, 1)");
  const int n = 8 * (1 + static_cast<int>(std::floor(10 * t)));
  const double limit = (1 - t) * M_PI / 3;
  std::vector<Point2> ring(n);
  for (int i = 0; i < n; ++i) ring[i] = {std::cos(2 * M_PI * i / n), std::sin(2 * M_PI * i / n)};
  for (int j = 100; j > 0; --j) {
    const double s = j / 100.0;
    Polygon p;
    for (int i = 0; i < n; ++i) p.vertices.push_back(i % 2 ? s * ring[i] : ring[i]);
    // every tip has the same angle by symmetry
    Point2 u = p[n - 1] - p[0], v = p[1] - p[0];
    double angle = std::atan2(std::abs(cross(u, v)), dot(u, v));
    if (angle < limit) return p;
  }
  throw std::runtime_error("star_polygon: projection factor reached zero");
}

PolygonalMesh mirror_mesh(const PolygonalMesh& m) {
  MeshBuilder b;
  const Point2 offsets[4] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<Point2> loop;
  for (Point2 off : offsets) {
    for (const auto& e : m.elements) {
      loop.clear();
      for (Index v : e) loop.push_back(0.5 * (m.vertices[v] + off));
      b.element(loop);
    }
  }
  return b.take();
}

PolygonalMesh jenga_base(int m) {
  std::vector<double> xs = {0.0};
  for (int j = m + 1; j >= 1; --j) xs.push_back(std::ldexp(1.0, -j));
  MeshBuilder b;
  std::vector<Point2> bottom = {{0, 0}, {1, 0}, {1, 0.25}};
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) bottom.push_back({*it, 0.25});
  b.element(bottom);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    b.element({{xs[i], 0.25}, {xs[i + 1], 0.25}, {xs[i + 1], 0.75}, {xs[i], 0.75}});
  b.element({{0.5, 0.25}, {1, 0.25}, {1, 0.75}, {0.5, 0.75}});
  std::vector<Point2> top;
  for (double x : xs) top.push_back({x, 0.75});
  top.insert(top.end(), {{1, 0.75}, {1, 1}, {0, 1}});
  b.element(top);
  return b.take();
}

PolygonalMesh slices_base(int m) {
  const Point2 o{0, 0}, one{1, 1};
  auto upper = [](int i) { return Point2{std::ldexp(1.0, -i), 1 - std::ldexp(1.0, -i)}; };
  auto lower = [](int i) { return Point2{1 - std::ldexp(1.0, -i), std::ldexp(1.0, -i)}; };
  const int last = m + 2;
  MeshBuilder b;
  for (int i = 1; i < last; ++i) {
    b.element({o, upper(i), one, upper(i + 1)});
    b.element({o, lower(i + 1), one, lower(i)});
  }
  b.element({o, upper(last), one, {0, 1}});
  b.element({o, {1, 0}, one, lower(last)});
  return b.take();
}

PolygonalMesh ulike_base(int m) {
  if (m > 24) throw std::invalid_argument("ulike_base: too many polylines");
  const std::size_t count = std::size_t{1} << m;
  std::vector<double> b(count);
  for (std::size_t j = 0; j < count; ++j) b[j] = 0.5 * static_cast<double>(j + 1) / static_cast<double>(count + 1);
  MeshBuilder mb;
  std::vector<Point2> ext = {{0, 1}, {0, 0}};
  for (double x : b) ext.push_back({x, 0});
  for (auto it = b.rbegin(); it != b.rend(); ++it) ext.push_back({1 - *it, 0});
  ext.insert(ext.end(), {{1, 0}, {1, 1}, {1 - b[0], 1}, {1 - b[0], b[0]}, {b[0], b[0]}, {b[0], 1}});
  mb.element(ext);
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const double p = b[i], q = b[i + 1];
    mb.element({{p, 1}, {p, p}, {1 - p, p}, {1 - p, 1}, {1 - q, 1}, {1 - q, q}, {q, q}, {q, 1}});
  }
  const double c = b.back();
  mb.element({{c, 1}, {c, c}, {1 - c, c}, {1 - c, 1}});
  return mb.take();
}

double hybrid_t(const DatasetSpec& spec, int n) {
  double t = spec.t_min + n * (spec.t_max - spec.t_min) / spec.N;
  return std::min(t, spec.t_max);
}

double hybrid_d(const DatasetSpec& spec, int n) { return spec.d0 / std::ldexp(1.0, n); }

double triangle_radius(int n) { return kTriangleR0 / std::ldexp(1.0, n); }

PolygonalMesh base_mesh(const DatasetSpec& spec, int n) {
  const int m = n * spec.n_el;
  switch (spec.kind) {
    case DatasetKind::Jenga: return jenga_base(m);
    case DatasetKind::Slices: return slices_base(m);
    case DatasetKind::Ulike: return ulike_base(m);
    default: return generate_level(spec, n).mesh;
  }
}

GeneratedLevel generate_level(const DatasetSpec& spec, int n) {
  check_spec(spec);
  if (n < 0) throw std::invalid_argument("level must be non-negative");
  GeneratedLevel g;
  switch (spec.kind) {
    case DatasetKind::Triangle: g.mesh = triangle_level(spec, n); break;
    case DatasetKind::Maze:
    case DatasetKind::Star: g = hybrid_level(spec, n); break;
    case DatasetKind::Jenga:
    case DatasetKind::Slices:
    case DatasetKind::Ulike: g.mesh = mirrored(base_mesh(spec, n), n); break;
  }
  return g;
}

std::vector<GeneratedLevel> generate_dataset(const DatasetSpec& spec, int levels) {
  std::vector<GeneratedLevel> out;
  for (int n = 0; n <= levels; ++n) out.push_back(generate_level(spec, n));
  return out;
}

}  // namespace polyvem
