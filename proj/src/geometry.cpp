#include "polyvem/geometry.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace polyvem {

double signed_area(const Polygon& p) {
  const std::size_t n = p.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(p[i], p.vertex(i + 1));
  }
  return 0.5 * twice;
}

double polygon_diameter(const Polygon& p) {
  // Extremal pairs are hull vertices; the hull is only worth building for
  // long loops.
  std::vector<Point2> pts = p.size() > 64 ? convex_hull(p.vertices) : p.vertices;
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      best = std::max(best, distance(pts[i], pts[j]));
    }
  }
  return best;
}

PolygonMetrics polygon_metrics(const Polygon& p) {
  const std::size_t n = p.size();
  if (n < 3) throw InvalidPolygon("polygon has fewer than 3 vertices");

  // Shift to the first vertex so the centroid sums do not lose digits on
  // small elements far from the origin.
  const Point2 o = p[0];
  double twice = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = p[i] - o;
    const Point2 b = p.vertex(i + 1) - o;
    const double c = cross(a, b);
    twice += c;
    cx += (a.x + b.x) * c;
    cy += (a.y + b.y) * c;
  }
  if (!(twice > 0.0)) throw InvalidPolygon("polygon has non-positive signed area");

  PolygonMetrics m;
  m.area = 0.5 * twice;
  m.centroid = {o.x + cx / (3.0 * twice), o.y + cy / (3.0 * twice)};
  m.diameter = polygon_diameter(p);
  m.shortest_edge = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double len = p.edge_length(i);
    m.shortest_edge = std::min(m.shortest_edge, len);
    m.longest_edge = std::max(m.longest_edge, len);
  }
  return m;
}

namespace {

int sign_with_tol(double v, double tol) {
  if (v > tol) return 1;
  if (v < -tol) return -1;
  return 0;
}

bool on_segment(Point2 a, Point2 b, Point2 q) {
  return std::min(a.x, b.x) <= q.x && q.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= q.y &&
         q.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double scale = std::max({norm(b - a), norm(d - c), 1e-300});
  const double tol = 1e-14 * scale * scale;
  const int o1 = sign_with_tol(orient2d(a, b, c), tol);
  const int o2 = sign_with_tol(orient2d(a, b, d), tol);
  const int o3 = sign_with_tol(orient2d(c, d, a), tol);
  const int o4 = sign_with_tol(orient2d(c, d, b), tol);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

std::string check_polygon(const Polygon& p) {
  const std::size_t n = p.size();
  std::ostringstream msg;
  if (n < 3) return "fewer than 3 vertices";
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(p[i].x) || !std::isfinite(p[i].y)) {
      msg << "non-finite coordinate at vertex " << i;
      return msg.str();
    }
    if (p[i] == p.vertex(i + 1)) {
      msg << "duplicate consecutive vertex at " << i;
      return msg.str();
    }
  }
  if (!(signed_area(p) > 0.0)) return "orientation: signed area is not positive";

  // Adjacent edges must not fold back onto each other.
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 e0 = p.edge_vector(i);
    const Point2 e1 = p.edge_vector(i + 1);
    if (std::abs(cross(e0, e1)) <= 1e-14 * norm(e0) * norm(e1) && dot(e0, e1) < 0.0) {
      msg << "edges " << i << " and " << (i + 1) % n << " fold back";
      return msg.str();
    }
  }

  // Non-adjacent edges must be disjoint.
  struct Box {
    double x0, x1, y0, y1;
  };
  std::vector<Box> boxes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = p[i], b = p.vertex(i + 1);
    boxes[i] = {std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y), std::max(a.y, b.y)};
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return boxes[a].x0 < boxes[b].x0; });
  for (std::size_t oi = 0; oi < n; ++oi) {
    const std::size_t i = order[oi];
    for (std::size_t oj = oi + 1; oj < n; ++oj) {
      const std::size_t j = order[oj];
      if (boxes[j].x0 > boxes[i].x1) break;
      if (boxes[j].y0 > boxes[i].y1 || boxes[j].y1 < boxes[i].y0) continue;
      if ((i + 1) % n == j || (j + 1) % n == i) continue;
      if (segments_intersect(p[i], p.vertex(i + 1), p[j], p.vertex(j + 1))) {
        msg << "self-intersection between edges " << std::min(i, j) << " and " << std::max(i, j);
        return msg.str();
      }
    }
  }
  return {};
}

void require_valid(const Polygon& p) {
  const std::string err = check_polygon(p);
  if (!err.empty()) throw InvalidPolygon(err);
}

bool is_convex(const Polygon& p, double tol) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 e0 = p.edge_vector(i);
    const Point2 e1 = p.edge_vector(i + 1);
    if (cross(e0, e1) < -tol * norm(e0) * norm(e1)) return false;
  }
  return true;
}

bool contains(const Polygon& p, Point2 q, bool closed) {
  const std::size_t n = p.size();
  int winding = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = p[i];
    const Point2 b = p.vertex(i + 1);
    const double o = orient2d(a, b, q);
    if (o == 0.0 && on_segment(a, b, q)) return closed;
    if (a.y <= q.y) {
      if (b.y > q.y && o > 0.0) ++winding;
    } else {
      if (b.y <= q.y && o < 0.0) --winding;
    }
  }
  return winding != 0;
}

KernelResult polygon_kernel(const Polygon& p) {
  KernelResult result;
  const std::size_t n = p.size();
  if (n < 3) return result;

  double x0 = p[0].x, x1 = p[0].x, y0 = p[0].y, y1 = p[0].y;
  for (const Point2& v : p.vertices) {
    x0 = std::min(x0, v.x);
    x1 = std::max(x1, v.x);
    y0 = std::min(y0, v.y);
    y1 = std::max(y1, v.y);
  }
  const double scale = std::max(x1 - x0, y1 - y0);
  const double eps = 1e-13 * scale;

  std::vector<Point2> region = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  std::vector<Point2> next;
  for (std::size_t i = 0; i < n && !region.empty(); ++i) {
    const Point2 a = p[i];
    const Point2 dir = p.edge_vector(i);
    const double len = norm(dir);
    if (len == 0.0) continue;
    auto side = [&](Point2 q) { return cross(dir, q - a) / len; };

    next.clear();
    const std::size_t m = region.size();
    for (std::size_t j = 0; j < m; ++j) {
      const Point2 cur = region[j];
      const Point2 nxt = region[(j + 1) % m];
      const double dc = side(cur);
      const double dn = side(nxt);
      const bool cur_in = dc >= -eps;
      const bool nxt_in = dn >= -eps;
      if (cur_in) next.push_back(cur);
      if (cur_in != nxt_in && std::abs(dc - dn) > 0.0) {
        const double t = dc / (dc - dn);
        next.push_back(cur + t * (nxt - cur));
      }
    }
    region.clear();
    for (const Point2& q : next) {
      if (region.empty() || distance(region.back(), q) > eps) region.push_back(q);
    }
    while (region.size() > 1 && distance(region.front(), region.back()) <= eps) region.pop_back();
    if (region.size() < 3) region.clear();
  }

  if (region.size() >= 3) {
    Polygon k{region};
    const double area = signed_area(k);
    if (area > 1e-12 * scale * scale) {
      result.kernel = std::move(k);
      result.area = area;
    }
  }
  return result;
}

std::vector<std::array<std::size_t, 3>> ear_clip_indices(const Polygon& p) {
  const std::size_t n = p.size();
  if (n < 3) throw EarClipError("ear clipping needs at least 3 vertices", 0);
  std::vector<std::array<std::size_t, 3>> tris;
  tris.reserve(n - 2);
  if (n == 3) {
    tris.push_back({0, 1, 2});
    return tris;
  }

  std::vector<std::size_t> prev(n), next(n);
  for (std::size_t i = 0; i < n; ++i) {
    prev[i] = (i + n - 1) % n;
    next[i] = (i + 1) % n;
  }
  std::vector<char> alive(n, 1);

  // -1 reflex, 0 flat, +1 convex
  auto classify = [&](std::size_t i) {
    const Point2 a = p[prev[i]], b = p[i], c = p[next[i]];
    const Point2 e0 = b - a, e1 = c - b;
    const double cr = cross(e0, e1);
    const double tol = 1e-12 * norm(e0) * norm(e1);
    if (cr > tol) return 1;
    if (cr < -tol) return -1;
    return 0;
  };
  std::vector<int> kind(n);
  for (std::size_t i = 0; i < n; ++i) kind[i] = classify(i);

  // Vertices that can block an ear: everything not strictly convex.
  auto blocks_ear = [&](std::size_t i) {
    const std::size_t a = prev[i], c = next[i];
    const Point2 pa = p[a], pb = p[i], pc = p[c];
    const double bx0 = std::min({pa.x, pb.x, pc.x}), bx1 = std::max({pa.x, pb.x, pc.x});
    const double by0 = std::min({pa.y, pb.y, pc.y}), by1 = std::max({pa.y, pb.y, pc.y});
    const double area2 = orient2d(pa, pb, pc);
    const double tol = 1e-14 * std::abs(area2);
    for (std::size_t j = next[c]; j != a; j = next[j]) {
      if (kind[j] == 1) continue;
      const Point2 q = p[j];
      if (q.x < bx0 || q.x > bx1 || q.y < by0 || q.y > by1) continue;
      if (orient2d(pa, pb, q) >= -tol && orient2d(pb, pc, q) >= -tol &&
          orient2d(pc, pa, q) >= -tol) {
        return true;
      }
    }
    return false;
  };

  std::size_t remaining = n;
  std::size_t cursor = 0;
  while (remaining > 3) {
    bool clipped = false;
    std::size_t i = cursor;
    for (std::size_t step = 0; step < remaining; ++step, i = next[i]) {
      if (kind[i] == 1 && !blocks_ear(i)) {
        tris.push_back({prev[i], i, next[i]});
        clipped = true;
        break;
      }
    }
    if (!clipped) {
      // No proper ear: drop a flat vertex, which carries no area.
      i = cursor;
      for (std::size_t step = 0; step < remaining; ++step, i = next[i]) {
        if (kind[i] == 0 && dot(p[i] - p[prev[i]], p[next[i]] - p[i]) > 0.0) {
          clipped = true;
          break;
        }
      }
    }
    if (!clipped) {
      throw EarClipError("ear clipping found no ear (degenerate polygon) near vertex " +
                             std::to_string(cursor),
                         cursor);
    }
    const std::size_t a = prev[i], c = next[i];
    next[a] = c;
    prev[c] = a;
    alive[i] = 0;
    --remaining;
    kind[a] = classify(a);
    kind[c] = classify(c);
    cursor = a;
  }
  std::size_t a = cursor;
  while (!alive[a]) a = next[a];
  const std::size_t b = next[a], c = next[b];
  if (orient2d(p[a], p[b], p[c]) > 0.0) tris.push_back({a, b, c});
  return tris;
}

std::vector<Triangle> ear_clip(const Polygon& p) {
  std::vector<Triangle> out;
  for (const auto& t : ear_clip_indices(p)) out.push_back({p[t[0]], p[t[1]], p[t[2]]});
  return out;
}

std::vector<EdgeGroup> collinear_submeshes(const Polygon& p, double tol) {
  const std::size_t n = p.size();
  std::vector<EdgeGroup> groups;
  if (n == 0) return groups;
  auto continues = [&](std::size_t i) {
    // true when edge i+1 continues edge i on the same line
    const Point2 e0 = p.edge_vector(i);
    const Point2 e1 = p.edge_vector(i + 1);
    const double s = norm(e0) * norm(e1);
    return std::abs(cross(e0, e1)) <= tol * s && dot(e0, e1) > 0.0;
  };
  std::size_t start = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!continues((i + n - 1) % n)) {
      start = i;
      break;
    }
  }
  if (start == n) {
    groups.push_back({0, n});
    return groups;
  }
  std::size_t i = 0;
  while (i < n) {
    const std::size_t first = (start + i) % n;
    std::size_t count = 1;
    while (i + count < n && continues((first + count - 1) % n)) ++count;
    groups.push_back({first, count});
    i += count;
  }
  return groups;
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(),
            [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && orient2d(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && orient2d(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0.0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  return hull;
}

Polygon transformed(const Polygon& p, double scale, Point2 anchor, Point2 offset) {
  Polygon out;
  out.vertices.reserve(p.size());
  for (const Point2& v : p.vertices) out.vertices.push_back(scale * (v - anchor) + offset);
  return out;
}

bool polygons_intersect(const Polygon& a, const Polygon& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (segments_intersect(a[i], a.vertex(i + 1), b[j], b.vertex(j + 1))) return true;
    }
  }
  return contains(a, b[0]) || contains(b, a[0]);
}

}  // namespace polyvem
