#include "polyvem/vem_local.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "polyvem/quadrature.hpp"

namespace polyvem {

namespace {

void check_order(int k) {
  if (k < 1 || k > 3) throw std::invalid_argument("VEM order must be 1, 2 or 3, got " + std::to_string(k));
}

// Element dof index of Gauss-Lobatto node j (0..k) on edge e.
int edge_node_dof(const DofLayout& l, int e, int j) {
  if (j == 0) return e;
  if (j == l.k) return (e + 1) % l.n_vertices;
  return l.edge_dof(e, j);
}

// dm(i, j) = derivative of the j-th Lagrange polynomial at node i.
Eigen::MatrixXd lagrange_derivatives(const std::vector<double>& s) {
  const int n = static_cast<int>(s.size());
  Eigen::VectorXd lambda(n);
  for (int j = 0; j < n; ++j) {
    double prod = 1.0;
    for (int m = 0; m < n; ++m)
      if (m != j) prod *= s[j] - s[m];
    lambda[j] = 1.0 / prod;
  }
  Eigen::MatrixXd dm = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      dm(i, j) = lambda[j] / lambda[i] / (s[i] - s[j]);
      dm(i, i) -= dm(i, j);
    }
  }
  return dm;
}

}  // namespace

DofLayout dof_layout(const Polygon& p, int k) {
  check_order(k);
  DofLayout l;
  l.k = k;
  l.n_vertices = static_cast<int>(p.size());
  for (int i = 0; i < l.n_vertices; ++i) l.dofs.push_back({DofKind::Vertex, i, 0});
  for (int e = 0; e < l.n_vertices; ++e)
    for (int j = 1; j < k; ++j) l.dofs.push_back({DofKind::EdgeInternal, e, j});
  for (int a = 0; a < poly_dim(k - 2); ++a) l.dofs.push_back({DofKind::Moment, a, 0});
  return l;
}

std::vector<Point2> boundary_dof_points(const Polygon& p, int k) {
  check_order(k);
  std::vector<Point2> pts(p.vertices);
  QuadratureRule1D gl = gauss_lobatto(k + 1);
  for (std::size_t e = 0; e < p.size(); ++e) {
    Point2 a = p.vertex(e), b = p.vertex(e + 1);
    for (int j = 1; j < k; ++j) {
      double s = gl.nodes[j];
      pts.push_back(0.5 * (1.0 - s) * a + 0.5 * (1.0 + s) * b);
    }
  }
  return pts;
}

double condition_number(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 1.0;
  double smin = sv[sv.size() - 1];
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return sv[0] / smin;
}

ElementMatrices build_element(const Polygon& p, int k, const ElementOptions& opt, const ScalarField& f) {
  check_order(k);
  ElementMatrices em;
  em.layout = dof_layout(p, k);
  const DofLayout& lay = em.layout;
  const int nv = lay.n_vertices, ndof = lay.size(), nk = poly_dim(k), nm = lay.n_moments();

  PolygonMetrics metrics = polygon_metrics(p);
  em.area = metrics.area;
  if (opt.basis == BasisKind::Orthonormal) {
    try {
      em.basis = orthonormalize(p, k);
    } catch (const SingularBasis&) {
      em.basis = scaled_monomials(metrics.centroid, metrics.diameter, k);
      em.basis_fallback = true;
    }
  } else {
    em.basis = scaled_monomials(metrics.centroid, metrics.diameter, k);
  }
  const CellBasis& basis = em.basis;

  const int qdeg = std::max(opt.load_degree < 0 ? 2 * k + 3 : opt.load_degree, 2 * k);
  QuadratureRule2D quad = polygon_quadrature(p, qdeg);
  const int nq = static_cast<int>(quad.size());
  Eigen::MatrixXd mono(nk, nq), phi(nk, nq);
  for (int q = 0; q < nq; ++q) {
    mono.col(q) = basis.monomials(quad.nodes[q]);
  }
  phi = basis.L * mono;

  QuadratureRule1D gl = gauss_lobatto(k + 1);

  // D: dof values of the basis polynomials.
  em.D.resize(ndof, nk);
  std::vector<Point2> bpts = boundary_dof_points(p, k);
  for (int i = 0; i < lay.n_boundary(); ++i) em.D.row(i) = basis.values(bpts[i]).transpose();
  for (int a = 0; a < nm; ++a) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(nk);
    for (int q = 0; q < nq; ++q) row += quad.weights[q] * mono(a, q) * phi.col(q);
    em.D.row(lay.moment_dof(a)) = row.transpose() / em.area;
  }

  // B: boundary flux term, volume term via moments, then the constant row
  // replaced by the boundary average.
  em.B = Eigen::MatrixXd::Zero(nk, ndof);
  Eigen::RowVectorXd avg = Eigen::RowVectorXd::Zero(ndof);
  for (int e = 0; e < nv; ++e) {
    Point2 a = p.vertex(e), b = p.vertex(e + 1);
    Point2 t = b - a;
    double len = norm(t);
    em.perimeter += len;
    Point2 n{t.y / len, -t.x / len};
    for (int j = 0; j <= k; ++j) {
      double s = gl.nodes[j];
      Point2 x = 0.5 * (1.0 - s) * a + 0.5 * (1.0 + s) * b;
      Eigen::MatrixXd grad = basis.gradients(x);
      int dof = edge_node_dof(lay, e, j);
      double w = 0.5 * len * gl.weights[j];
      em.B.col(dof) += w * (grad.col(0) * n.x + grad.col(1) * n.y);
      avg[dof] += w;
    }
  }
  if (nm > 0) {
    Eigen::MatrixXd lap = basis.laplacian_coefficients();
    for (int a = 0; a < nm; ++a) em.B.col(lay.moment_dof(a)) -= em.area * lap.col(a);
  }
  em.B.row(0) = avg / em.perimeter;

  em.G = em.B * em.D;
  Eigen::PartialPivLU<Eigen::MatrixXd> glu(em.G);
  em.PiNablaStar = glu.solve(em.B);
  if (!em.PiNablaStar.allFinite() || glu.determinant() == 0.0) throw ElementError("singular G matrix");
  em.PiNablaDof = em.D * em.PiNablaStar;

  Eigen::MatrixXd Gt = em.G;
  Gt.row(0).setZero();
  Gt = 0.5 * (Gt + Gt.transpose()).eval();
  em.Kc = em.PiNablaStar.transpose() * Gt * em.PiNablaStar;

  Eigen::MatrixXd R = Eigen::MatrixXd::Identity(ndof, ndof) - em.PiNablaDof;
  switch (opt.stab) {
    case StabKind::DofiDofi:
      em.S = Eigen::MatrixXd::Identity(ndof, ndof);
      break;
    case StabKind::DRecipe:
      em.S = em.Kc.diagonal().asDiagonal();
      break;
    case StabKind::Trace: {
      em.S = Eigen::MatrixXd::Zero(ndof, ndof);
      Eigen::MatrixXd dm = lagrange_derivatives(gl.nodes);
      Eigen::MatrixXd edge_stiff = Eigen::MatrixXd::Zero(k + 1, k + 1);
      for (int q = 0; q <= k; ++q) edge_stiff += gl.weights[q] * dm.row(q).transpose() * dm.row(q);
      for (int e = 0; e < nv; ++e) {
        double len = p.edge_length(e);
        double scale = metrics.diameter * 2.0 / len;
        for (int i = 0; i <= k; ++i)
          for (int j = 0; j <= k; ++j)
            em.S(edge_node_dof(lay, e, i), edge_node_dof(lay, e, j)) += scale * edge_stiff(i, j);
      }
      for (int a = 0; a < nm; ++a) em.S(lay.moment_dof(a), lay.moment_dof(a)) = 1.0;
      break;
    }
  }
  em.Kp = em.Kc + R.transpose() * em.S * R;
  em.Kp = 0.5 * (em.Kp + em.Kp.transpose()).eval();

  // H and C. C is formed against the scaled monomials first so that the
  // enhancement constraint (degrees k-1 and k) does not depend on the basis:
  // low-degree rows come straight from the moments, the rest from Pi-nabla.
  Eigen::MatrixXd Hm = Eigen::MatrixXd::Zero(nk, nk);
  for (int q = 0; q < nq; ++q) Hm.noalias() += quad.weights[q] * mono.col(q) * phi.col(q).transpose();
  em.H = basis.L * Hm;
  em.H = 0.5 * (em.H + em.H.transpose()).eval();
  Eigen::MatrixXd Cm = Hm * em.PiNablaStar;
  for (int a = 0; a < nm; ++a) {
    Cm.row(a).setZero();
    Cm(a, lay.moment_dof(a)) = em.area;
  }
  em.C = basis.L * Cm;
  em.Pi0Star = em.H.ldlt().solve(em.C);

  em.fp = Eigen::VectorXd::Zero(ndof);
  if (f) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nk);
    for (int q = 0; q < nq; ++q) rhs += quad.weights[q] * f(quad.nodes[q]) * phi.col(q);
    em.fp = em.Pi0Star.transpose() * rhs;
  }
  return em;
}

ElementDiagnostics element_diagnostics(const ElementMatrices& e) {
  ElementDiagnostics d;
  d.cond_G = condition_number(e.G);
  d.cond_H = condition_number(e.H);
  const int nk = static_cast<int>(e.G.rows());
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(nk, nk);
  d.pinabla_identity_err = (e.PiNablaStar * e.D - I).cwiseAbs().maxCoeff();
  d.pi0_identity_err = (e.Pi0Star * e.D - I).cwiseAbs().maxCoeff();
  return d;
}

Eigen::VectorXd interpolate(const Polygon& p, int k, const ScalarField& u, int degree) {
  DofLayout lay = dof_layout(p, k);
  Eigen::VectorXd v(lay.size());
  std::vector<Point2> pts = boundary_dof_points(p, k);
  for (int i = 0; i < lay.n_boundary(); ++i) v[i] = u(pts[i]);
  const int nm = lay.n_moments();
  if (nm > 0) {
    PolygonMetrics m = polygon_metrics(p);
    CellBasis mono = scaled_monomials(m.centroid, m.diameter, k - 2);
    QuadratureRule2D quad = polygon_quadrature(p, degree < 0 ? 2 * k + 3 : degree);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(nm);
    for (std::size_t q = 0; q < quad.size(); ++q) acc += quad.weights[q] * u(quad.nodes[q]) * mono.monomials(quad.nodes[q]);
    v.tail(nm) = acc / m.area;
  }
  return v;
}

StabKind parse_stab(const std::string& s) {
  if (s == "dd") return StabKind::DofiDofi;
  if (s == "drecipe") return StabKind::DRecipe;
  if (s == "trace") return StabKind::Trace;
  throw std::invalid_argument("unknown stabilization '" + s + "'");
}

BasisKind parse_basis(const std::string& s) {
  if (s == "monomial") return BasisKind::Monomial;
  if (s == "ortho") return BasisKind::Orthonormal;
  throw std::invalid_argument("unknown basis '" + s + "'");
}

std::string to_string(StabKind s) {
  switch (s) {
    case StabKind::DofiDofi: return "dd";
    case StabKind::DRecipe: return "drecipe";
    case StabKind::Trace: return "trace";
  }
  return "?";
}

std::string to_string(BasisKind b) { return b == BasisKind::Monomial ? "monomial" : "ortho"; }

}  // namespace polyvem
