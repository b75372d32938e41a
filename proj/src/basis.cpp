#include "polyvem/basis.hpp"

#include <cmath>
#include <string>

#include "polyvem/quadrature.hpp"

namespace polyvem {

namespace {

constexpr int kMaxDegree = 12;

int monomial_index(int a, int b) {
  int d = a + b;
  return d * (d + 1) / 2 + b;
}

}  // namespace

const std::vector<std::array<int, 2>>& monomial_exponents(int k) {
  static const auto table = [] {
    std::vector<std::vector<std::array<int, 2>>> t(kMaxDegree + 1);
    for (int kk = 0; kk <= kMaxDegree; ++kk)
      for (int d = 0; d <= kk; ++d)
        for (int b = 0; b <= d; ++b) t[kk].push_back({d - b, b});
    return t;
  }();
  if (k < 0 || k > kMaxDegree) throw std::invalid_argument("unsupported polynomial degree " + std::to_string(k));
  return table[k];
}

Eigen::VectorXd CellBasis::monomials(Point2 x) const {
  const double xi = (x.x - centroid.x) / h, eta = (x.y - centroid.y) / h;
  Eigen::VectorXd m(dim());
  int idx = 0;
  double xpow[kMaxDegree + 1], ypow[kMaxDegree + 1];
  xpow[0] = ypow[0] = 1.0;
  for (int i = 1; i <= k; ++i) {
    xpow[i] = xpow[i - 1] * xi;
    ypow[i] = ypow[i - 1] * eta;
  }
  for (int d = 0; d <= k; ++d)
    for (int b = 0; b <= d; ++b) m[idx++] = xpow[d - b] * ypow[b];
  return m;
}

Eigen::MatrixXd CellBasis::monomial_gradients(Point2 x) const {
  const double xi = (x.x - centroid.x) / h, eta = (x.y - centroid.y) / h;
  Eigen::MatrixXd g(dim(), 2);
  double xpow[kMaxDegree + 1], ypow[kMaxDegree + 1];
  xpow[0] = ypow[0] = 1.0;
  for (int i = 1; i <= k; ++i) {
    xpow[i] = xpow[i - 1] * xi;
    ypow[i] = ypow[i - 1] * eta;
  }
  int idx = 0;
  for (int d = 0; d <= k; ++d) {
    for (int b = 0; b <= d; ++b, ++idx) {
      int a = d - b;
      g(idx, 0) = a > 0 ? a * xpow[a - 1] * ypow[b] / h : 0.0;
      g(idx, 1) = b > 0 ? b * xpow[a] * ypow[b - 1] / h : 0.0;
    }
  }
  return g;
}

Eigen::MatrixXd CellBasis::laplacian_coefficients() const {
  const int n = dim(), nl = poly_dim(k - 2);
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, nl);
  const double h2 = h * h;
  for (int d = 2; d <= k; ++d) {
    for (int b = 0; b <= d; ++b) {
      int a = d - b, row = monomial_index(a, b);
      if (a >= 2) lap(row, monomial_index(a - 2, b)) += a * (a - 1) / h2;
      if (b >= 2) lap(row, monomial_index(a, b - 2)) += b * (b - 1) / h2;
    }
  }
  return L * lap;
}

CellBasis scaled_monomials(Point2 centroid, double h, int k) {
  CellBasis c;
  c.k = k;
  c.kind = BasisKind::Monomial;
  c.centroid = centroid;
  c.h = h;
  c.L = Eigen::MatrixXd::Identity(c.dim(), c.dim());
  monomial_exponents(k);
  return c;
}

CellBasis scaled_monomials(const Polygon& p, int k) {
  PolygonMetrics m = polygon_metrics(p);
  return scaled_monomials(m.centroid, m.diameter, k);
}

CellBasis orthonormalize(const Polygon& p, int k) {
  CellBasis c = scaled_monomials(p, k);
  c.kind = BasisKind::Orthonormal;
  const int n = c.dim();
  QuadratureRule2D q = polygon_quadrature(p, 2 * k);
  const int nq = static_cast<int>(q.size());
  double area = 0;
  for (double w : q.weights) area += w;

  Eigen::MatrixXd A(nq, n);
  for (int i = 0; i < nq; ++i) A.row(i) = std::sqrt(q.weights[i] / area) * c.monomials(q.nodes[i]).transpose();

  Eigen::MatrixXd Q(nq, n);
  Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd v = A.col(j);
    Eigen::VectorXd cj = Eigen::VectorXd::Unit(n, j);
    const double original = v.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < j; ++i) {
        double r = Q.col(i).dot(v);
        v -= r * Q.col(i);
        cj -= r * coef.row(i).transpose();
      }
    }
    const double nv = v.norm();
    if (!(nv > 1e-12 * original)) {
      throw SingularBasis("Gram-Schmidt breakdown at basis function " + std::to_string(j));
    }
    Q.col(j) = v / nv;
    coef.row(j) = cj.transpose() / nv;
  }
  c.L = coef;
  return c;
}

Eigen::VectorXd EdgeBasis::values(double s) const {
  Eigen::VectorXd v(k + 1);
  for (int i = 0; i <= k; ++i) {
    double p = 0, dp = 0;
    legendre(i, s, p, dp);
    v[i] = p;
  }
  return v;
}

}  // namespace polyvem
