#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "polyvem/quality.hpp"

using namespace polyvem;

namespace {

Polygon rotated_scaled(const Polygon& p, double angle, double scale, Point2 shift) {
  Polygon q;
  const double c = std::cos(angle), s = std::sin(angle);
  for (const auto& v : p.vertices) q.vertices.push_back({scale * (c * v.x - s * v.y) + shift.x, scale * (s * v.x + c * v.y) + shift.y});
  return q;
}

}  // namespace

TEST_SUITE("quality") {
  TEST_CASE("unit square") {
    ElementQuality q = element_quality(Polygon{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}});
    CHECK(q.rho1 == doctest::Approx(1.0));
    CHECK(q.rho2 == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(q.rho3 == 0.75);
    CHECK(q.rho4 == 1.0);
    CHECK(mesh_quality(square_grid(1, 1)).rho == doctest::Approx(0.905006).epsilon(1e-5));
  }

  TEST_CASE("equilateral triangle") {
    Polygon p{{{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}};
    ElementQuality q = element_quality(p);
    CHECK(q.rho1 == doctest::Approx(1.0));
    CHECK(q.rho2 == doctest::Approx(std::sqrt(std::sqrt(3.0) / 4)));
    CHECK(q.rho2 == doctest::Approx(0.65804).epsilon(1e-5));
    CHECK(q.rho3 == 1.0);
    CHECK(q.rho4 == 1.0);
    CHECK(combine_quality({q}) == doctest::Approx(0.941282).epsilon(1e-5));
  }

  TEST_CASE("non-star-shaped elements score zero") {
    ElementQuality q = element_quality(Polygon{oracle::maze_vertices(0.0)});
    CHECK(q.rho1 == 0.0);
    CHECK(q.combined() == 0.0);
    // the maze and its complement tile the square; neither has a kernel
    PolygonalMesh m;
    m.vertices = oracle::maze_vertices(0.0);
    m.elements.push_back({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    std::vector<Point2> rest = {{0.75, 0.25}, {0.75, 0.5}, {0.5, 0.5}, {0.5, 0.75}, {1, 0.75}, {1, 1}, {0.25, 1}, {0.25, 0.25}};
    ElementLoop loop = {9, 8, 7, 6, 5, 4, 3};
    m.vertices.push_back({1, 1});
    loop.push_back(m.vertices.size() - 1);
    m.elements.push_back(loop);
    REQUIRE(validate(m).empty());
    QualityReport r = mesh_quality(m);
    CHECK(r.elements[1].rho1 == 0.0);
    CHECK(r.rho == 0.0);
  }

  TEST_CASE("collinear runs drive rho4") {
    // top bar of a jenga base mesh with one split at x = 1/4
    Polygon bar{{{0, 0.75}, {0.25, 0.75}, {0.5, 0.75}, {1, 0.75}, {1, 1}, {0, 1}}};
    ElementQuality q = element_quality(bar);
    CHECK(q.rho4 == doctest::Approx(0.5));
    CHECK(q.rho3 == doctest::Approx(0.5));
    CHECK(q.rho1 == doctest::Approx(1.0));
  }

  TEST_CASE("indicators are invariant under similarity transforms") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<Polygon> ps = {Polygon{oracle::maze_vertices(0.4)}, star_polygon(0.3), jenga_base(2).element_polygon(0)};
    for (int i = 0; i < 10; ++i) ps.push_back(oracle::random_star_polygon(rng, 5 + i, 0.15));
    for (const auto& p : ps) {
      ElementQuality a = element_quality(p);
      ElementQuality b = element_quality(rotated_scaled(p, 2 * M_PI * u(rng), 0.01 + 3 * u(rng), {u(rng), u(rng)}));
      CHECK(a.rho1 == doctest::Approx(b.rho1).epsilon(1e-9));
      CHECK(a.rho2 == doctest::Approx(b.rho2).epsilon(1e-9));
      CHECK(a.rho3 == b.rho3);
      CHECK(a.rho4 == doctest::Approx(b.rho4).epsilon(1e-9));
      for (double r : {a.rho1, a.rho2, a.rho3, a.rho4}) {
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
      }
    }
  }

  TEST_CASE("mesh indicator recomputes from the element values") {
    PolygonalMesh m = generate_level(DatasetSpec{DatasetKind::Maze}, 2).mesh;
    QualityReport r = mesh_quality(m);
    CHECK(r.elements.size() == m.num_elements());
    CHECK(combine_quality(r.elements) == r.rho);
    CHECK(r.rho > 0.0);
    CHECK(r.rho <= 1.0);
  }

  TEST_CASE("mirroring leaves the indicator unchanged") {
    for (const auto& m : {jenga_base(3), slices_base(2), ulike_base(2)}) {
      double a = mesh_quality(m).rho, b = mesh_quality(mirror_mesh(m)).rho;
      CHECK(std::abs(a - b) <= 1e-12);
    }
  }

  TEST_CASE("dataset report") {
    DatasetSpec s;
    s.kind = DatasetKind::Ulike;
    std::vector<PolygonalMesh> ms;
    for (int n = 0; n <= 3; ++n) ms.push_back(generate_level(s, n).mesh);
    auto rows = dataset_quality(ms);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].rho < rows[i - 1].rho);
    CHECK(rows[2].n_vertices == ms[2].num_vertices());
    std::string csv = quality_csv(rows);
    CHECK(csv.rfind("level,n_vertices,rho,A_ratio,e_ratio\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  }
}
