#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "polyvem/geometry.hpp"

using namespace polyvem;

namespace {

Polygon unit_square() { return Polygon{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}; }
Polygon equilateral() { return Polygon{{{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}}; }
Polygon maze0() { return Polygon{oracle::maze_vertices(0.0)}; }

double total_area(const std::vector<Triangle>& ts) {
  double s = 0;
  for (const auto& t : ts) s += t.area();
  return s;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("metrics of the unit square") {
    PolygonMetrics m = polygon_metrics(unit_square());
    CHECK(m.area == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m.centroid.x == doctest::Approx(0.5));
    CHECK(m.centroid.y == doctest::Approx(0.5));
    CHECK(m.diameter == doctest::Approx(std::sqrt(2.0)));
    CHECK(m.shortest_edge == doctest::Approx(1.0));
    CHECK(m.longest_edge == doctest::Approx(1.0));
  }

  TEST_CASE("metrics of the equilateral triangle") {
    PolygonMetrics m = polygon_metrics(equilateral());
    CHECK(m.area == doctest::Approx(std::sqrt(3.0) / 4).epsilon(1e-14));
    CHECK(m.diameter == doctest::Approx(1.0));
  }

  TEST_CASE("maze area matches the trapezoid oracle") {
    for (double t : {0.0, 0.3, 0.95}) {
      auto v = oracle::maze_vertices(t);
      CHECK(polygon_metrics(Polygon{v}).area == doctest::Approx(oracle::trapezoid_area(v)).epsilon(1e-14));
    }
    CHECK(oracle::trapezoid_area(oracle::maze_vertices(0.0)) == doctest::Approx(0.625));
  }

  TEST_CASE("degenerate polygons are rejected") {
    CHECK_THROWS_AS(polygon_metrics(Polygon{{{0, 0}, {1, 0}, {2, 0}}}), InvalidPolygon);
    CHECK(check_polygon(Polygon{{{0, 0}, {0, 1}, {1, 1}, {1, 0}}}).rfind("orientation", 0) == 0);
    CHECK_FALSE(check_polygon(Polygon{{{0, 0}, {1, 0}, {1, 0}, {0, 1}}}).empty());
    // bow tie
    CHECK_FALSE(check_polygon(Polygon{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}}).empty());
    // collinear vertices are fine
    CHECK(check_polygon(Polygon{{{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}}}).empty());
  }

  TEST_CASE("kernel of convex polygons is the polygon") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Point2> pts(12);
      for (auto& p : pts) p = {u(rng), u(rng)};
      Polygon hull{convex_hull(pts)};
      KernelResult k = polygon_kernel(hull);
      CHECK(k.area == doctest::Approx(polygon_metrics(hull).area).epsilon(1e-10));
      CHECK(is_convex(hull));
    }
  }

  TEST_CASE("kernel of the maze is empty") {
    KernelResult k = polygon_kernel(maze0());
    CHECK(k.area == 0.0);
    CHECK(k.kernel.vertices.empty());
  }

  TEST_CASE("kernel of the L-shape is the unit square") {
    Polygon l{{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}};
    KernelResult k = polygon_kernel(l);
    CHECK(k.area == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& v : k.kernel.vertices) {
      CHECK(v.x >= -1e-12);
      CHECK(v.x <= 1 + 1e-12);
      CHECK(v.y >= -1e-12);
      CHECK(v.y <= 1 + 1e-12);
    }
    std::mt19937_64 rng(5);
    auto res = oracle::kernel_vs_visibility(l, 300, rng);
    CHECK(res.mismatches == 0);
    CHECK(res.kernel_hits > 0);
  }

  TEST_CASE("kernel area never exceeds the polygon area") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
      Polygon p = oracle::random_star_polygon(rng, 9, 0.05);
      double area = polygon_metrics(p).area;
      double ka = polygon_kernel(p).area;
      CHECK(ka <= area * (1 + 1e-12));
      if (!is_convex(p)) CHECK(ka < area);
    }
  }

  TEST_CASE("kernel agrees with visibility sampling") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
      Polygon p = oracle::random_star_polygon(rng, 10, 0.1);
      auto res = oracle::kernel_vs_visibility(p, 200, rng);
      CHECK(res.mismatches == 0);
    }
  }

  TEST_CASE("ear clipping") {
    CHECK(ear_clip(equilateral()).size() == 1);
    auto sq = ear_clip(unit_square());
    REQUIRE(sq.size() == 2);
    CHECK(sq[0].area() == doctest::Approx(0.5));
    CHECK(sq[1].area() == doctest::Approx(0.5));
    auto mz = ear_clip(maze0());
    CHECK(mz.size() == 8);
    CHECK(total_area(mz) == doctest::Approx(oracle::trapezoid_area(oracle::maze_vertices(0))).epsilon(1e-12));
    for (const auto& t : mz) CHECK(t.area() > 0);
  }

  TEST_CASE("ear clipping keeps collinear vertices") {
    Polygon bar{{{0, 0.75}, {0.125, 0.75}, {0.25, 0.75}, {1, 0.75}, {1, 1}, {0, 1}}};
    auto ts = ear_clip(bar);
    CHECK(total_area(ts) == doctest::Approx(0.25).epsilon(1e-12));
    auto idx = ear_clip_indices(bar);
    CHECK(idx.size() == ts.size());
  }

  TEST_CASE("ear clipping conserves area on random polygons") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
      Polygon p = oracle::random_star_polygon(rng, 5 + trial % 20, 0.02);
      double a = polygon_metrics(p).area;
      CHECK(total_area(ear_clip(p)) == doctest::Approx(a).epsilon(1e-12));
    }
  }

  TEST_CASE("collinear groups") {
    auto g = collinear_submeshes(unit_square());
    CHECK(g.size() == 4);
    for (const auto& e : g) CHECK(e.count == 1);

    Polygon bar{{{0, 0.75}, {0.125, 0.75}, {0.25, 0.75}, {1, 0.75}, {1, 1}, {0, 1}}};
    auto gb = collinear_submeshes(bar);
    CHECK(gb.size() == 4);
    std::size_t largest = 0;
    for (const auto& e : gb) largest = std::max(largest, e.count);
    CHECK(largest == 3);

    Polygon hex;
    for (int i = 0; i < 6; ++i) hex.vertices.push_back({std::cos(i * M_PI / 3), std::sin(i * M_PI / 3)});
    CHECK(collinear_submeshes(hex).size() == 6);
  }

  TEST_CASE("collinear groups are invariant under cyclic relabeling") {
    Polygon bar{{{0, 0.75}, {0.125, 0.75}, {0.25, 0.75}, {1, 0.75}, {1, 0.875}, {1, 1}, {0.5, 1}, {0, 1}}};
    auto counts = [](const Polygon& p) {
      std::vector<std::size_t> c;
      for (const auto& g : collinear_submeshes(p)) c.push_back(g.count);
      std::sort(c.begin(), c.end());
      return c;
    };
    auto ref = counts(bar);
    CHECK(ref == std::vector<std::size_t>{1, 2, 2, 3});
    for (std::size_t s = 1; s < bar.size(); ++s) {
      Polygon r = bar;
      std::rotate(r.vertices.begin(), r.vertices.begin() + static_cast<long>(s), r.vertices.end());
      CHECK(counts(r) == ref);
    }
  }

  TEST_CASE("polygon intersection") {
    Polygon a = unit_square();
    CHECK(polygons_intersect(a, transformed(a, 0.5, {0, 0}, {0.25, 0.25})));
    CHECK(polygons_intersect(a, transformed(a, 1.0, {0, 0}, {0.5, 0.5})));
    CHECK_FALSE(polygons_intersect(a, transformed(a, 1.0, {0, 0}, {2, 0})));
  }
}
