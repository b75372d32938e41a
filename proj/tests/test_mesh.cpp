#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "polyvem/mesh.hpp"

using namespace polyvem;

namespace {

bool has_kind(const std::vector<MeshViolation>& v, MeshViolation::Kind k) {
  return std::any_of(v.begin(), v.end(), [k](const MeshViolation& m) { return m.kind == k; });
}

}  // namespace

TEST_SUITE("mesh") {
  TEST_CASE("two triangles form a valid mesh") {
    PolygonalMesh m = two_triangle_mesh();
    CHECK(validate(m).empty());
    auto flags = m.boundary_vertex_flags();
    CHECK(std::count(flags.begin(), flags.end(), true) == 4);
  }

  TEST_CASE("flipped triangle is reported") {
    PolygonalMesh m = two_triangle_mesh();
    std::reverse(m.elements[1].begin(), m.elements[1].end());
    auto v = validate(m);
    CHECK(has_kind(v, MeshViolation::Kind::Orientation));
  }

  TEST_CASE("collinear vertex shared by both neighbours is conforming") {
    PolygonalMesh m;
    m.vertices = {{0, 0}, {0.5, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5}, {0, 0.5}, {1, 1}, {0, 1}};
    m.elements = {{0, 1, 4, 5}, {1, 2, 3, 4}, {5, 4, 3, 6, 7}};
    CHECK(validate(m).empty());
  }

  TEST_CASE("hanging vertex on one side only is nonconforming") {
    PolygonalMesh m;
    m.vertices = {{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 1}, {0.5, 0.5}};
    m.elements = {{0, 1, 6, 5, 4}, {1, 2, 3, 5}};
    auto v = validate(m);
    CHECK(has_kind(v, MeshViolation::Kind::Nonconforming));
  }

  TEST_CASE("gaps are detected") {
    PolygonalMesh m = square_grid(2, 2);
    m.elements.pop_back();
    auto v = validate(m);
    CHECK(has_kind(v, MeshViolation::Kind::AreaMismatch));
    CHECK(has_kind(v, MeshViolation::Kind::Nonconforming));
  }

  TEST_CASE("uniform grid stats") {
    MeshStats s = mesh_stats(square_grid(2, 2));
    CHECK(s.A_ratio == 1.0);
    CHECK(s.e_ratio == 1.0);
    CHECK(s.h == doctest::Approx(std::sqrt(0.5)));
    CHECK(s.n_vertices == 9);
    CHECK(s.n_elements == 4);
  }

  TEST_CASE("stats are invariant under permutation") {
    PolygonalMesh m = square_grid(3, 2);
    MeshStats a = mesh_stats(m);
    std::mt19937_64 rng(1);
    std::vector<Index> perm(m.vertices.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    PolygonalMesh p;
    p.vertices.resize(m.vertices.size());
    for (std::size_t i = 0; i < perm.size(); ++i) p.vertices[perm[i]] = m.vertices[i];
    for (auto loop : m.elements) {
      for (auto& v : loop) v = perm[v];
      std::rotate(loop.begin(), loop.begin() + 1, loop.end());
      p.elements.push_back(loop);
    }
    std::shuffle(p.elements.begin(), p.elements.end(), rng);
    MeshStats b = mesh_stats(p);
    CHECK(a.h == b.h);
    CHECK(a.A_ratio == b.A_ratio);
    CHECK(a.e_ratio == b.e_ratio);
    CHECK(validate(p).empty());
  }

  TEST_CASE("OFF round trip") {
    PolygonalMesh m = square_grid(3, 3);
    m.vertices[5].x += 1.0 / 3.0 * 1e-3;
    std::ostringstream a;
    write_off(m, a);
    std::istringstream in(a.str());
    PolygonalMesh r = read_off(in);
    CHECK(r.vertices.size() == m.vertices.size());
    for (std::size_t i = 0; i < m.vertices.size(); ++i) CHECK(r.vertices[i] == m.vertices[i]);
    CHECK(r.elements == m.elements);
    std::ostringstream b;
    write_off(r, b);
    CHECK(a.str() == b.str());
  }

  TEST_CASE("single triangle OFF") {
    std::istringstream in("OFF\n# comment\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n");
    PolygonalMesh m = read_off(in);
    CHECK(m.vertices.size() == 3);
    CHECK(m.elements.size() == 1);
  }

  TEST_CASE("OFF errors carry the line number") {
    auto line_of = [](const std::string& text) -> std::size_t {
      std::istringstream in(text);
      try {
        read_off(in);
      } catch (const MeshParseError& e) {
        return e.line();
      }
      return 0;
    };
    CHECK(line_of("OFX\n") == 1);
    CHECK(line_of("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 0 2\n") == 6);
    CHECK(line_of("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n") == 6);
    CHECK(line_of("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 2 1\n") == 6);
    CHECK(line_of("OFF\n3 1 0\n0 0 0\n1 0\n") == 4);
  }
}
