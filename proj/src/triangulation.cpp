#include "polyvem/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace polyvem {
namespace {

constexpr int kNone = -1;
constexpr int kSquareSides = 4;

inline int nx(int i) { return i == 2 ? 0 : i + 1; }
inline int pv(int i) { return i == 0 ? 2 : i - 1; }

// Edge i of a triangle runs from v[i] to v[nx(i)]; n[i] is the triangle
// across it and seg[i] the segment it belongs to (kNone if unconstrained).
struct Tri {
  std::array<int, 3> v{};
  std::array<int, 3> n{kNone, kNone, kNone};
  std::array<int, 3> seg{kNone, kNone, kNone};
  bool domain = true;
};

double incircle(Point2 a, Point2 b, Point2 c, Point2 d) {
  double adx = a.x - d.x, ady = a.y - d.y;
  double bdx = b.x - d.x, bdy = b.y - d.y;
  double cdx = c.x - d.x, cdy = c.y - d.y;
  double ad = adx * adx + ady * ady, bd = bdx * bdx + bdy * bdy, cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

Point2 circumcenter(Point2 a, Point2 b, Point2 c) {
  Point2 ba = b - a, ca = c - a;
  double d = 2 * cross(ba, ca);
  double b2 = dot(ba, ba), c2 = dot(ca, ca);
  return {a.x + (ca.y * b2 - ba.y * c2) / d, a.y + (ba.x * c2 - ca.x * b2) / d};
}

struct Location {
  int tri = kNone;
  int edge = kNone;    // point lies on this edge of tri
  int vertex = kNone;  // point coincides with this vertex
};

struct WalkResult {
  Location loc;
  int blocked_tri = kNone;  // walk hit a constrained edge
  int blocked_edge = kNone;
};

class Mesher {
 public:
  std::vector<Point2> pts;
  std::vector<Tri> tris;
  std::vector<int> vtri;
  std::vector<std::vector<int>> vseg;
  std::vector<bool> input_vertex;
  std::vector<std::array<int, 2>> segs;

  Mesher() {
    pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    vtri = {0, 0, 0, 1};
    vseg = {{3, 0}, {0, 1}, {1, 2}, {2, 3}};
    input_vertex = {true, true, true, true};
    segs = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    Tri t0, t1;
    t0.v = {0, 1, 2};
    t0.seg = {0, 1, kNone};
    t0.n = {kNone, kNone, 1};
    t1.v = {0, 2, 3};
    t1.seg = {kNone, 2, 3};
    t1.n = {0, kNone, kNone};
    tris = {t0, t1};
  }

  int index_of(int t, int v) const {
    for (int i = 0; i < 3; ++i)
      if (tris[t].v[i] == v) return i;
    return kNone;
  }

  int edge_index(int t, int a, int b) const {
    for (int i = 0; i < 3; ++i)
      if (tris[t].v[i] == a && tris[t].v[nx(i)] == b) return i;
    return kNone;
  }

  void set_neighbor(int nb, int a, int b, int t) {
    if (nb == kNone) return;
    int i = edge_index(nb, a, b);
    if (i == kNone) throw std::logic_error("triangulation adjacency broken");
    tris[nb].n[i] = t;
  }

  std::vector<int> around(int v) const {
    std::vector<int> out;
    const int start = vtri[v];
    int t = start;
    while (true) {
      out.push_back(t);
      int nt = tris[t].n[pv(index_of(t, v))];
      if (nt == kNone) break;
      if (nt == start) return out;
      t = nt;
    }
    t = start;
    while (true) {
      int nt = tris[t].n[index_of(t, v)];
      if (nt == kNone) break;
      out.push_back(nt);
      t = nt;
    }
    return out;
  }

  /// Triangle and edge index of the directed edge a->b, or of b->a.
  std::pair<int, int> find_edge(int a, int b) const {
    for (int t : around(a)) {
      int i = edge_index(t, a, b);
      if (i != kNone) return {t, i};
      i = edge_index(t, b, a);
      if (i != kNone) return {t, i};
    }
    return {kNone, kNone};
  }

  Location classify(int t, Point2 p) const {
    const Tri& T = tris[t];
    Location loc;
    loc.tri = t;
    for (int i = 0; i < 3; ++i) {
      if (distance(pts[T.v[i]], p) <= 1e-13) {
        loc.vertex = T.v[i];
        return loc;
      }
    }
    for (int i = 0; i < 3; ++i)
      if (orient2d(pts[T.v[i]], pts[T.v[nx(i)]], p) == 0.0) loc.edge = i;
    return loc;
  }

  /// Visibility walk; returns tri = kNone if p is outside the square.
  Location locate(Point2 p, int start) const {
    int t = start;
    const std::size_t limit = 4 * tris.size() + 100;
    for (std::size_t step = 0; step < limit; ++step) {
      const Tri& T = tris[t];
      int next = kNone;
      bool outside = false;
      for (int j = 0; j < 3; ++j) {
        int i = (static_cast<int>(step) + j) % 3;
        if (orient2d(pts[T.v[i]], pts[T.v[nx(i)]], p) < 0) {
          if (T.n[i] == kNone) {
            outside = true;
            continue;
          }
          next = T.n[i];
          break;
        }
      }
      if (next == kNone) {
        if (outside) return {};
        return classify(t, p);
      }
      t = next;
    }
    throw std::runtime_error("point location did not terminate");
  }

  /// Straight walk from the centroid of t towards p, stopping at segments.
  WalkResult walk(int t, Point2 p) const {
    const Tri& T0 = tris[t];
    Point2 g = (1.0 / 3.0) * (pts[T0.v[0]] + pts[T0.v[1]] + pts[T0.v[2]]);
    WalkResult r;
    const std::size_t limit = tris.size() + 10;
    for (std::size_t step = 0; step < limit; ++step) {
      const Tri& T = tris[t];
      int exit = kNone;
      double worst = 0;
      for (int i = 0; i < 3; ++i) {
        Point2 a = pts[T.v[i]], b = pts[T.v[nx(i)]];
        double o = orient2d(a, b, p);
        if (o >= 0) continue;
        if (segments_intersect(g, p, a, b)) {
          exit = i;
          break;
        }
        if (o < worst) {
          worst = o;
          exit = i;
        }
      }
      if (exit == kNone) {
        r.loc = classify(t, p);
        if (r.loc.edge != kNone && T.seg[r.loc.edge] != kNone) {
          r.blocked_tri = t;
          r.blocked_edge = r.loc.edge;
        }
        return r;
      }
      if (T.seg[exit] != kNone || T.n[exit] == kNone) {
        r.blocked_tri = t;
        r.blocked_edge = exit;
        return r;
      }
      t = T.n[exit];
    }
    throw std::runtime_error("triangulation walk did not terminate");
  }

  int add_point(Point2 p, bool input) {
    pts.push_back(p);
    vtri.push_back(kNone);
    vseg.emplace_back();
    input_vertex.push_back(input);
    return static_cast<int>(pts.size()) - 1;
  }

  void legalize(std::vector<int>& stack) {
    // Every triangle on the stack has the new vertex at index 2.
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      const Tri T = tris[t];
      if (T.seg[0] != kNone || T.n[0] == kNone) continue;
      int u = T.n[0];
      int a = T.v[0], b = T.v[1], p = T.v[2];
      int j = edge_index(u, b, a);
      const Tri U = tris[u];
      int d = U.v[pv(j)];
      if (incircle(pts[a], pts[b], pts[p], pts[d]) <= 0) continue;

      Tri nt, nu;
      nt.v = {a, d, p};
      nt.n = {U.n[nx(j)], u, T.n[2]};
      nt.seg = {U.seg[nx(j)], kNone, T.seg[2]};
      nt.domain = T.domain;
      nu.v = {d, b, p};
      nu.n = {U.n[pv(j)], T.n[1], t};
      nu.seg = {U.seg[pv(j)], T.seg[1], kNone};
      nu.domain = T.domain;
      tris[t] = nt;
      tris[u] = nu;
      set_neighbor(U.n[nx(j)], d, a, t);
      set_neighbor(T.n[1], p, b, u);
      vtri[a] = t;
      vtri[d] = t;
      vtri[p] = t;
      vtri[b] = u;
      stack.push_back(t);
      stack.push_back(u);
    }
  }

  void insert_in_triangle(int t, int q) {
    const Tri T = tris[t];
    int a = T.v[0], b = T.v[1], c = T.v[2];
    int t1 = static_cast<int>(tris.size()), t2 = t1 + 1;
    Tri A, B, C;
    A.v = {a, b, q};
    A.n = {T.n[0], t1, t2};
    A.seg = {T.seg[0], kNone, kNone};
    B.v = {b, c, q};
    B.n = {T.n[1], t2, t};
    B.seg = {T.seg[1], kNone, kNone};
    C.v = {c, a, q};
    C.n = {T.n[2], t, t1};
    C.seg = {T.seg[2], kNone, kNone};
    A.domain = B.domain = C.domain = T.domain;
    tris[t] = A;
    tris.push_back(B);
    tris.push_back(C);
    set_neighbor(T.n[1], c, b, t1);
    set_neighbor(T.n[2], a, c, t2);
    vtri[a] = t;
    vtri[q] = t;
    vtri[b] = t1;
    vtri[c] = t2;
    std::vector<int> stack = {t, t1, t2};
    legalize(stack);
  }

  void split_edge(int t, int i, int q) {
    const Tri T = tris[t];
    int a = T.v[i], b = T.v[nx(i)], c = T.v[pv(i)];
    int u = T.n[i], s = T.seg[i];
    int tb = static_cast<int>(tris.size());
    int ub = u == kNone ? kNone : tb + 1;
    Tri TA, TB;
    TA.v = {c, a, q};
    TA.n = {T.n[pv(i)], ub, tb};
    TA.seg = {T.seg[pv(i)], s, kNone};
    TB.v = {b, c, q};
    TB.n = {T.n[nx(i)], t, u};
    TB.seg = {T.seg[nx(i)], kNone, s};
    TA.domain = TB.domain = T.domain;
    tris[t] = TA;
    tris.push_back(TB);
    set_neighbor(T.n[nx(i)], c, b, tb);
    vtri[c] = t;
    vtri[a] = t;
    vtri[q] = t;
    vtri[b] = tb;
    std::vector<int> stack = {t, tb};
    if (u != kNone) {
      const Tri U = tris[u];
      int j = edge_index(u, b, a);
      int d = U.v[pv(j)];
      Tri UA, UB;
      UA.v = {d, b, q};
      UA.n = {U.n[pv(j)], tb, ub};
      UA.seg = {U.seg[pv(j)], s, kNone};
      UB.v = {a, d, q};
      UB.n = {U.n[nx(j)], u, t};
      UB.seg = {U.seg[nx(j)], kNone, s};
      UA.domain = UB.domain = U.domain;
      tris[u] = UA;
      tris.push_back(UB);
      set_neighbor(U.n[nx(j)], d, a, ub);
      vtri[d] = u;
      vtri[a] = ub;
      stack.push_back(u);
      stack.push_back(ub);
    }
    if (s != kNone) vseg[q].push_back(s);
    legalize(stack);
  }

  /// Inserts p (Delaunay). Returns the vertex id, which may be an existing
  /// vertex, or kNone if p is outside the square.
  int insert(Point2 p, int hint, bool input) {
    Location loc = locate(p, hint);
    if (loc.tri == kNone) return kNone;
    if (loc.vertex != kNone) {
      if (input) input_vertex[loc.vertex] = true;
      return loc.vertex;
    }
    int q = add_point(p, input);
    if (loc.edge != kNone)
      split_edge(loc.tri, loc.edge, q);
    else
      insert_in_triangle(loc.tri, q);
    return q;
  }

  void mark_segment(int t, int i, int s) {
    tris[t].seg[i] = s;
    int u = tris[t].n[i];
    if (u != kNone) tris[u].seg[edge_index(u, tris[t].v[nx(i)], tris[t].v[i])] = s;
  }

  void recover(int s, int a, int b, int depth) {
    auto [t, i] = find_edge(a, b);
    if (t != kNone) {
      mark_segment(t, i, s);
      return;
    }
    if (depth > 60) throw std::runtime_error("segment recovery failed");
    int m = insert(0.5 * (pts[a] + pts[b]), vtri[a], false);
    if (m == kNone || m == a || m == b) throw std::runtime_error("segment recovery failed");
    if (std::find(vseg[m].begin(), vseg[m].end(), s) == vseg[m].end()) vseg[m].push_back(s);
    recover(s, a, m, depth + 1);
    recover(s, m, b, depth + 1);
  }

  void flood_domain() {
    for (auto& t : tris) t.domain = false;
    std::vector<int> stack;
    for (std::size_t t = 0; t < tris.size(); ++t) {
      const Tri& T = tris[t];
      if (T.n[0] == kNone || T.n[1] == kNone || T.n[2] == kNone) {
        tris[t].domain = true;
        stack.push_back(static_cast<int>(t));
      }
    }
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (int i = 0; i < 3; ++i) {
        int u = tris[t].n[i];
        if (u == kNone || tris[t].seg[i] != kNone || tris[u].domain) continue;
        tris[u].domain = true;
        stack.push_back(u);
      }
    }
  }

  std::vector<std::vector<std::size_t>> chains(std::size_t first, std::size_t count) const {
    std::vector<std::vector<std::pair<double, std::size_t>>> on(count);
    for (std::size_t v = 0; v < pts.size(); ++v) {
      for (int s : vseg[v]) {
        if (s < static_cast<int>(first) || s >= static_cast<int>(first + count)) continue;
        Point2 a = pts[segs[s][0]], b = pts[segs[s][1]];
        double par = dot(pts[v] - a, b - a) / dot(b - a, b - a);
        on[s - first].emplace_back(par, v);
      }
    }
    std::vector<std::vector<std::size_t>> out(count);
    for (std::size_t s = 0; s < count; ++s) {
      std::sort(on[s].begin(), on[s].end());
      for (auto& pv_ : on[s]) out[s].push_back(pv_.second);
    }
    return out;
  }
};

double triangle_min_angle(Point2 a, Point2 b, Point2 c) {
  auto ang = [](Point2 p, Point2 q, Point2 r) {
    Point2 u = q - p, v = r - p;
    return std::atan2(std::abs(cross(u, v)), dot(u, v));
  };
  return std::min({ang(a, b, c), ang(b, c, a), ang(c, a, b)}) * 180.0 / M_PI;
}

class Refiner {
 public:
  Refiner(Mesher& m, const RefineOptions& opt) : m_(m), opt_(opt) {}

  void run(TriangulationResult& res) {
    for (std::size_t t = 0; t < m_.tris.size(); ++t)
      for (int i = 0; i < 3; ++i) check_subsegment(static_cast<int>(t), i);
    for (std::size_t t = 0; t < m_.tris.size(); ++t) consider(static_cast<int>(t));

    while (true) {
      if (!split_queued_segments(res)) break;
      if (bad_.empty()) break;
      Bad b = bad_.front();
      bad_.pop_front();
      if (!still_current(b) || !is_bad(b.t)) continue;
      const Tri& T = m_.tris[b.t];
      Point2 c = circumcenter(m_.pts[T.v[0]], m_.pts[T.v[1]], m_.pts[T.v[2]]);
      WalkResult w = m_.walk(b.t, c);
      if (w.blocked_tri != kNone) {
        if (queue_forced(w.blocked_tri, w.blocked_edge)) bad_.push_back(b);
        continue;
      }
      if (w.loc.vertex != kNone || !m_.tris[w.loc.tri].domain) continue;
      if (cavity_encroaches(w.loc.tri, c)) {
        bad_.push_back(b);
        continue;
      }
      int q = m_.add_point(c, false);
      if (w.loc.edge != kNone)
        m_.split_edge(w.loc.tri, w.loc.edge, q);
      else
        m_.insert_in_triangle(w.loc.tri, q);
      after_insert(q);
      if (++res.steiner_points >= opt_.max_steiner) {
        res.cap_reached = true;
        break;
      }
    }
  }

  bool exempt(int t) const {
    const Tri& T = m_.tris[t];
    Point2 p[3] = {m_.pts[T.v[0]], m_.pts[T.v[1]], m_.pts[T.v[2]]};
    // shortest edge, opposite the smallest angle
    int e = 0;
    double best = distance(p[0], p[1]);
    for (int i = 1; i < 3; ++i) {
      double l = distance(p[i], p[nx(i)]);
      if (l < best) {
        best = l;
        e = i;
      }
    }
    int a = T.v[e], b = T.v[nx(e)];
    for (int s1 : m_.vseg[a]) {
      for (int s2 : m_.vseg[b]) {
        if (s1 == s2) continue;
        for (int x : m_.segs[s1]) {
          if (x != m_.segs[s2][0] && x != m_.segs[s2][1]) continue;
          double da = distance(m_.pts[a], m_.pts[x]), db = distance(m_.pts[b], m_.pts[x]);
          if (da > 0 && db > 0 && std::abs(da - db) <= 1e-9 * std::max(da, db)) return true;
        }
      }
    }
    // both edges at the smallest angle are segments meeting at an input vertex
    int apex = T.v[pv(e)];
    int i = m_.index_of(t, apex);
    return m_.input_vertex[apex] && T.seg[i] != kNone && T.seg[pv(i)] != kNone && T.seg[i] != T.seg[pv(i)];
  }

  bool left_skinny(int t) const { return opt_.min_angle_deg > 0 && min_angle(t) < opt_.min_angle_deg && exempt(t); }

  double min_angle(int t) const {
    const Tri& T = m_.tris[t];
    return triangle_min_angle(m_.pts[T.v[0]], m_.pts[T.v[1]], m_.pts[T.v[2]]);
  }

 private:
  struct Bad {
    int t;
    std::array<int, 3> v;
  };
  struct SegTask {
    int a, b;
    bool forced;
  };

  Mesher& m_;
  const RefineOptions& opt_;
  std::deque<Bad> bad_;
  std::deque<SegTask> segq_;

  double area(int t) const {
    const Tri& T = m_.tris[t];
    return 0.5 * orient2d(m_.pts[T.v[0]], m_.pts[T.v[1]], m_.pts[T.v[2]]);
  }

  bool is_bad(int t) const {
    if (!m_.tris[t].domain) return false;
    if (area(t) > opt_.max_area) return true;
    return opt_.min_angle_deg > 0 && min_angle(t) < opt_.min_angle_deg && !exempt(t);
  }

  void consider(int t) {
    if (is_bad(t)) bad_.push_back({t, m_.tris[t].v});
  }

  bool still_current(const Bad& b) const { return m_.tris[b.t].v == b.v; }

  bool encroached(int t, int i) const {
    const Tri& T = m_.tris[t];
    Point2 a = m_.pts[T.v[i]], b = m_.pts[T.v[nx(i)]];
    auto inside = [&](Point2 x) { return dot(a - x, b - x) < 0; };
    if (T.domain && inside(m_.pts[T.v[pv(i)]])) return true;
    int u = T.n[i];
    if (u != kNone && m_.tris[u].domain) {
      int j = m_.edge_index(u, T.v[nx(i)], T.v[i]);
      if (inside(m_.pts[m_.tris[u].v[pv(j)]])) return true;
    }
    return false;
  }

  void check_subsegment(int t, int i) {
    const Tri& T = m_.tris[t];
    if (T.seg[i] == kNone) return;
    if (encroached(t, i)) segq_.push_back({T.v[i], T.v[nx(i)], false});
  }

  bool queue_forced(int t, int i) {
    const Tri& T = m_.tris[t];
    Point2 a = m_.pts[T.v[i]], b = m_.pts[T.v[nx(i)]];
    if (distance(a, b) < 1e-12) return false;
    segq_.push_back({T.v[i], T.v[nx(i)], true});
    return true;
  }

  bool cavity_encroaches(int start, Point2 c) {
    std::vector<int> stack = {start}, seen = {start};
    bool hit = false;
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      const Tri& T = m_.tris[t];
      for (int i = 0; i < 3; ++i) {
        if (T.seg[i] != kNone) {
          Point2 a = m_.pts[T.v[i]], b = m_.pts[T.v[nx(i)]];
          if (dot(a - c, b - c) < 0 && queue_forced(t, i)) hit = true;
          continue;
        }
        int u = T.n[i];
        if (u == kNone || std::find(seen.begin(), seen.end(), u) != seen.end()) continue;
        const Tri& U = m_.tris[u];
        if (incircle(m_.pts[U.v[0]], m_.pts[U.v[1]], m_.pts[U.v[2]], c) <= 0) continue;
        seen.push_back(u);
        stack.push_back(u);
      }
    }
    return hit;
  }

  /// Returns false when the Steiner cap was reached.
  bool split_queued_segments(TriangulationResult& res) {
    while (!segq_.empty()) {
      SegTask task = segq_.front();
      segq_.pop_front();
      auto [t, i] = m_.find_edge(task.a, task.b);
      if (t == kNone || m_.tris[t].seg[i] == kNone) continue;
      if (!task.forced && !encroached(t, i)) continue;
      const Tri& T = m_.tris[t];
      int a = T.v[i], b = T.v[nx(i)];
      Point2 A = m_.pts[a], B = m_.pts[b];
      double len = distance(A, B);
      if (len < 1e-12) continue;
      Point2 p = 0.5 * (A + B);
      if (m_.input_vertex[a] != m_.input_vertex[b]) {
        // concentric shells around input vertices
        Point2 anchor = m_.input_vertex[a] ? A : B, other = m_.input_vertex[a] ? B : A;
        double d = std::exp2(std::round(std::log2(0.5 * len)));
        p = anchor + (d / len) * (other - anchor);
      }
      int q = m_.add_point(p, false);
      m_.split_edge(t, i, q);
      after_insert(q);
      if (++res.steiner_points >= opt_.max_steiner) {
        res.cap_reached = true;
        segq_.clear();
        return false;
      }
    }
    return true;
  }

  void after_insert(int q) {
    for (int t : m_.around(q)) {
      for (int i = 0; i < 3; ++i) check_subsegment(t, i);
      consider(t);
    }
  }
};

TriangulationResult collect(const Mesher& m, const Refiner* r, std::size_t user_segments) {
  TriangulationResult res;
  res.points = m.pts;
  for (std::size_t t = 0; t < m.tris.size(); ++t) {
    const Tri& T = m.tris[t];
    if (!T.domain) continue;
    res.triangles.push_back({static_cast<std::size_t>(T.v[0]), static_cast<std::size_t>(T.v[1]),
                             static_cast<std::size_t>(T.v[2])});
    res.angle_exempt.push_back(r != nullptr && r->left_skinny(static_cast<int>(t)));
  }
  res.segment_chains = m.chains(kSquareSides, user_segments);
  return res;
}

std::vector<std::size_t> spatial_order(const std::vector<Point2>& points) {
  // snake order over a coarse grid keeps point location walks short
  const std::size_t n = points.size();
  const int g = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n) / 4)));
  auto cell = [&](Point2 p) {
    int cx = std::clamp(static_cast<int>(p.x * g), 0, g - 1);
    int cy = std::clamp(static_cast<int>(p.y * g), 0, g - 1);
    return std::make_pair(cy, cy % 2 ? g - 1 - cx : cx);
  };
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return cell(points[a]) < cell(points[b]); });
  return idx;
}

void check_inside(Point2 p) {
  if (!(p.x >= 0 && p.x <= 1 && p.y >= 0 && p.y <= 1)) throw std::invalid_argument("triangulation point outside the unit square");
}

}  // namespace

double min_angle_deg(Point2 a, Point2 b, Point2 c) { return triangle_min_angle(a, b, c); }

TriangulationResult delaunay_unit_square(const std::vector<Point2>& points) {
  Mesher m;
  for (std::size_t i : spatial_order(points)) {
    check_inside(points[i]);
    int hint = m.vtri[m.pts.size() - 1];
    m.insert(points[i], hint, true);
  }
  return collect(m, nullptr, 0);
}

TriangulationResult constrained_delaunay_refine(const std::vector<Point2>& points,
                                                const std::vector<std::array<std::size_t, 2>>& segments,
                                                const RefineOptions& opt) {
  Mesher m;
  std::vector<int> id(points.size(), kNone);
  for (std::size_t i : spatial_order(points)) {
    check_inside(points[i]);
    int hint = m.vtri[m.pts.size() - 1];
    id[i] = m.insert(points[i], hint, true);
  }
  for (const auto& s : segments) {
    if (s[0] >= points.size() || s[1] >= points.size() || id[s[0]] == id[s[1]])
      throw std::invalid_argument("invalid segment");
    int sid = static_cast<int>(m.segs.size());
    m.segs.push_back({id[s[0]], id[s[1]]});
    m.vseg[id[s[0]]].push_back(sid);
    m.vseg[id[s[1]]].push_back(sid);
  }
  for (std::size_t s = kSquareSides; s < m.segs.size(); ++s) m.recover(static_cast<int>(s), m.segs[s][0], m.segs[s][1], 0);
  m.flood_domain();
  Refiner r(m, opt);
  TriangulationResult head;
  r.run(head);
  TriangulationResult res = collect(m, &r, segments.size());
  res.steiner_points = head.steiner_points;
  res.cap_reached = head.cap_reached;
  return res;
}

}  // namespace polyvem
