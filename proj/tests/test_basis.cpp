#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "polyvem/basis.hpp"
#include "polyvem/quadrature.hpp"

using namespace polyvem;

namespace {

Polygon unit_square() { return Polygon{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}; }
Polygon maze0() { return Polygon{oracle::maze_vertices(0.0)}; }

double integrate(const QuadratureRule2D& q, const std::function<double(Point2)>& f) {
  double s = 0;
  for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * f(q.nodes[i]);
  return s;
}

// Exact integral of x^a y^b over p via the divergence theorem with
// F = (x^{a+1} y^b / (a+1), 0); edge integrals use a Gauss rule exact for
// the edge polynomial.
double exact_monomial_integral(const Polygon& p, int a, int b) {
  QuadratureRule1D g = gauss_legendre(a + b + 2);
  double s = 0;
  for (std::size_t e = 0; e < p.size(); ++e) {
    Point2 u = p.vertex(e), v = p.vertex(e + 1);
    double nx = v.y - u.y;  // outward normal times edge length
    for (std::size_t i = 0; i < g.size(); ++i) {
      double t = 0.5 * (g.nodes[i] + 1);
      Point2 x = u + t * (v - u);
      s += 0.5 * g.weights[i] * nx * std::pow(x.x, a + 1) * std::pow(x.y, b) / (a + 1);
    }
  }
  return s;
}

}  // namespace

TEST_SUITE("basis") {
  TEST_CASE("Gauss-Lobatto rules") {
    auto r2 = gauss_lobatto(2);
    CHECK(r2.nodes[0] == -1.0);
    CHECK(r2.nodes[1] == 1.0);
    CHECK(r2.weights[0] == doctest::Approx(1.0));
    CHECK(r2.weights[1] == doctest::Approx(1.0));

    auto r3 = gauss_lobatto(3);
    CHECK(r3.nodes[1] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r3.weights[0] == doctest::Approx(1.0 / 3));
    CHECK(r3.weights[1] == doctest::Approx(4.0 / 3));
    double x2 = 0;
    for (std::size_t i = 0; i < r3.size(); ++i) x2 += r3.weights[i] * r3.nodes[i] * r3.nodes[i];
    CHECK(x2 == doctest::Approx(2.0 / 3).epsilon(1e-15));

    auto r4 = gauss_lobatto(4);
    CHECK(r4.nodes[1] == doctest::Approx(-1 / std::sqrt(5.0)).epsilon(1e-15));
    CHECK(r4.nodes[2] == doctest::Approx(1 / std::sqrt(5.0)).epsilon(1e-15));
    double x4 = 0;
    for (std::size_t i = 0; i < r4.size(); ++i) x4 += r4.weights[i] * std::pow(r4.nodes[i], 4);
    CHECK(std::abs(x4 - 0.4) < 1e-14);

    CHECK_THROWS_AS(gauss_lobatto(1), std::invalid_argument);
  }

  TEST_CASE("Gauss-Lobatto exactness degree 2n-3") {
    for (int n = 2; n <= 8; ++n) {
      auto r = gauss_lobatto(n);
      for (int d = 0; d <= 2 * n - 3; ++d) {
        double s = 0;
        for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], d);
        double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
        CHECK(std::abs(s - exact) < 1e-13);
      }
    }
  }

  TEST_CASE("polygon quadrature basics") {
    auto q = polygon_quadrature(unit_square(), 3);
    CHECK(integrate(q, [](Point2) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(integrate(q, [](Point2 x) { return x.x; }) == doctest::Approx(0.5).epsilon(1e-14));
  }

  TEST_CASE("polygon quadrature exactness on random polynomials") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<Polygon> polys = {unit_square(), maze0(), Polygon{oracle::maze_vertices(0.9)}};
    for (int t = 0; t < 5; ++t) polys.push_back(oracle::random_star_polygon(rng, 12, 0.05));
    for (const auto& p : polys) {
      for (int deg = 0; deg <= 10; ++deg) {
        auto q = polygon_quadrature(p, deg);
        // random polynomial of total degree deg
        double got = 0, exact = 0, scale = 0;
        for (int a = 0; a <= deg; ++a) {
          int b = deg - a;
          double c = u(rng);
          exact += c * exact_monomial_integral(p, a, b);
          got += c * integrate(q, [&](Point2 x) { return std::pow(x.x, a) * std::pow(x.y, b); });
          scale += std::abs(c) * exact_monomial_integral(p, 0, 0);
        }
        CHECK(std::abs(got - exact) <= 1e-12 * scale);
      }
    }
  }

  TEST_CASE("maze quadrature agrees with Monte Carlo") {
    Polygon p = maze0();
    CellBasis cb = scaled_monomials(p, 3);
    auto f = [&](Point2 x) {
      Eigen::VectorXd m = cb.monomials(x);
      return m[2] * m[3];
    };
    double rule = integrate(polygon_quadrature(p, 6), f);
    auto mc = oracle::monte_carlo(p, f, 2'000'000, 99);
    CHECK(std::abs(rule - mc.mean) <= 3 * mc.stderr_);
  }

  TEST_CASE("scaled monomials are bounded by one at the vertices") {
    Polygon p = maze0();
    CellBasis cb = scaled_monomials(p, 3);
    CHECK(cb.dim() == 10);
    for (const auto& v : p.vertices) CHECK(cb.monomials(v).cwiseAbs().maxCoeff() <= 1.0 + 1e-14);
  }

  TEST_CASE("scaled monomial values at a square corner") {
    CellBasis cb = scaled_monomials(unit_square(), 1);
    Eigen::VectorXd m = cb.monomials({0, 0});
    CHECK(m[0] == 1.0);
    CHECK(m[1] == doctest::Approx(-0.35355339059327373));
    CHECK(m[2] == doctest::Approx(-0.35355339059327373));
  }

  TEST_CASE("orthonormal bases") {
    CellBasis c0 = orthonormalize(maze0(), 0);
    CHECK(c0.values({0.1, 0.1})[0] == doctest::Approx(1.0).epsilon(1e-13));

    auto gram = [](const Polygon& p, const CellBasis& cb) -> Eigen::MatrixXd {
      auto q = polygon_quadrature(p, 2 * cb.k);
      Eigen::MatrixXd g = Eigen::MatrixXd::Zero(cb.dim(), cb.dim());
      for (std::size_t i = 0; i < q.size(); ++i) {
        Eigen::VectorXd v = cb.values(q.nodes[i]);
        g += q.weights[i] * v * v.transpose();
      }
      return g / polygon_metrics(p).area;
    };
    CellBasis c1 = orthonormalize(unit_square(), 1);
    CHECK(c1.dim() == 3);
    CHECK((gram(unit_square(), c1) - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
    CellBasis c2 = orthonormalize(maze0(), 2);
    CHECK(c2.dim() == 6);
    CHECK((gram(maze0(), c2) - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-10);
    // lower triangular change of basis
    CHECK(c2.L.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("Laplacian coefficients") {
    CellBasis cb = scaled_monomials(Point2{0.2, 0.3}, 0.5, 3);
    Eigen::MatrixXd lap = cb.laplacian_coefficients();
    CHECK(lap.rows() == 10);
    CHECK(lap.cols() == 3);
    // m_(2,0) = ((x-0.2)/0.5)^2, Laplacian 2/0.25 = 8
    CHECK(lap(3, 0) == doctest::Approx(8.0));
    // m_(2,1): Laplacian = 2 eta / h^2 -> coefficient 8 on m_(0,1)
    CHECK(lap(7, 2) == doctest::Approx(8.0));
    CHECK(lap(7, 1) == 0.0);
  }

  TEST_CASE("edge Legendre basis is orthogonal") {
    EdgeBasis eb{4, {0.1, 0.2}, {0.7, -0.3}};
    auto g = gauss_legendre(6);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(5, 5);
    for (std::size_t i = 0; i < g.size(); ++i) {
      Eigen::VectorXd v = eb.values(g.nodes[i]);
      m += 0.5 * eb.length() * g.weights[i] * v * v.transpose();
    }
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (i != j) CHECK(std::abs(m(i, j)) < 1e-12);
  }
}
