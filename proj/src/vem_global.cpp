#include "polyvem/vem_global.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <cstdint>
#include <numbers>
#include <unordered_map>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "polyvem/parallel.hpp"
#include "polyvem/quadrature.hpp"

namespace polyvem {

ModelProblem sine_problem() {
  using std::numbers::pi;
  ModelProblem p;
  p.name = "sine";
  p.u = [](Point2 x) { return std::sin(pi * x.x) * std::sin(pi * x.y) / (2.0 * pi * pi); };
  p.grad_u = [](Point2 x) {
    return Point2{std::cos(pi * x.x) * std::sin(pi * x.y) / (2.0 * pi), std::sin(pi * x.x) * std::cos(pi * x.y) / (2.0 * pi)};
  };
  p.f = [](Point2 x) { return std::sin(pi * x.x) * std::sin(pi * x.y); };
  p.g = p.u;
  return p;
}

ModelProblem polynomial_problem(int k) {
  const double c2 = k >= 2 ? 1.0 : 0.0, c3 = k >= 3 ? 1.0 : 0.0;
  ModelProblem p;
  p.name = "poly" + std::to_string(k);
  p.u = [=](Point2 v) {
    double x = v.x, y = v.y;
    return 1.0 + 0.5 * x - 0.3 * y + c2 * (0.7 * x * x - 0.4 * x * y + 0.2 * y * y) +
           c3 * (0.3 * x * x * x - 0.6 * x * x * y + 0.25 * x * y * y - 0.15 * y * y * y);
  };
  p.grad_u = [=](Point2 v) {
    double x = v.x, y = v.y;
    return Point2{0.5 + c2 * (1.4 * x - 0.4 * y) + c3 * (0.9 * x * x - 1.2 * x * y + 0.25 * y * y),
                  -0.3 + c2 * (-0.4 * x + 0.4 * y) + c3 * (-0.6 * x * x + 0.5 * x * y - 0.45 * y * y)};
  };
  p.f = [=](Point2 v) { return -(c2 * 1.8 + c3 * (2.3 * v.x - 2.1 * v.y)); };
  p.g = p.u;
  return p;
}

DofMap build_dof_map(const PolygonalMesh& mesh, int k) {
  DofMap map;
  map.k = k;
  map.n_vertex_dofs = mesh.num_vertices();
  map.points = mesh.vertices;
  const std::size_t per_edge = static_cast<std::size_t>(k - 1);
  const std::size_t nm = static_cast<std::size_t>(poly_dim(k - 2));
  QuadratureRule1D gl = gauss_lobatto(k + 1);

  std::unordered_map<std::uint64_t, std::size_t> edge_id;
  std::vector<int> edge_use;
  std::vector<std::pair<Index, Index>> edges;
  for (const auto& loop : mesh.elements) {
    for (std::size_t i = 0; i < loop.size(); ++i) {
      Index a = loop[i], b = loop[(i + 1) % loop.size()];
      Index lo = std::min(a, b), hi = std::max(a, b);
      std::uint64_t key = (static_cast<std::uint64_t>(lo) << 32) | hi;
      auto [it, inserted] = edge_id.emplace(key, edges.size());
      if (inserted) {
        edges.push_back({lo, hi});
        edge_use.push_back(0);
      }
      ++edge_use[it->second];
    }
  }
  map.n_edges = edges.size();
  for (const auto& [lo, hi] : edges) {
    Point2 a = mesh.vertices[lo], b = mesh.vertices[hi];
    for (int j = 1; j < k; ++j) {
      double s = gl.nodes[j];
      map.points.push_back(0.5 * (1.0 - s) * a + 0.5 * (1.0 + s) * b);
    }
  }
  map.n_moment_dofs = nm * mesh.num_elements();
  map.is_boundary.assign(map.size(), false);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edge_use[e] != 1) continue;
    map.is_boundary[edges[e].first] = true;
    map.is_boundary[edges[e].second] = true;
    for (std::size_t j = 0; j < per_edge; ++j) map.is_boundary[map.n_vertex_dofs + e * per_edge + j] = true;
  }

  const std::size_t moment_base = map.n_point_dofs();
  map.element_dofs.resize(mesh.num_elements());
  for (std::size_t el = 0; el < mesh.num_elements(); ++el) {
    const auto& loop = mesh.elements[el];
    auto& dofs = map.element_dofs[el];
    dofs.assign(loop.begin(), loop.end());
    for (std::size_t i = 0; i < loop.size(); ++i) {
      Index a = loop[i], b = loop[(i + 1) % loop.size()];
      Index lo = std::min(a, b), hi = std::max(a, b);
      std::size_t id = edge_id.at((static_cast<std::uint64_t>(lo) << 32) | hi);
      for (int j = 1; j < k; ++j) {
        int gsub = a == lo ? j : k - j;
        dofs.push_back(map.n_vertex_dofs + id * per_edge + static_cast<std::size_t>(gsub - 1));
      }
    }
    for (std::size_t a = 0; a < nm; ++a) dofs.push_back(moment_base + el * nm + a);
  }
  return map;
}

Assembly assemble(const PolygonalMesh& mesh, int k, const ElementOptions& opt, const ScalarField& f) {
  Assembly as;
  as.map = build_dof_map(mesh, k);
  const std::size_t n = as.map.size();
  as.K.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  as.F = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  as.elements.resize(mesh.num_elements());

  // Elements are built in parallel chunk by chunk; the scatter runs in
  // element order so the result does not depend on the thread count.
  constexpr std::size_t chunk = 4096;
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t start = 0; start < mesh.num_elements(); start += chunk) {
    const std::size_t stop = std::min(mesh.num_elements(), start + chunk);
    std::vector<ElementMatrices> built(stop - start);
    parallel_for(stop - start, [&](std::size_t i) {
      const std::size_t el = start + i;
      try {
        built[i] = build_element(mesh.element_polygon(el), k, opt, f);
      } catch (const std::exception& ex) {
        throw ElementError("element " + std::to_string(el) + ": " + ex.what());
      }
    });
    for (std::size_t i = 0; i < built.size(); ++i) {
      const std::size_t el = start + i;
      ElementMatrices& em = built[i];
      const auto& dofs = as.map.element_dofs[el];
      for (std::size_t a = 0; a < dofs.size(); ++a) {
        as.F[static_cast<Eigen::Index>(dofs[a])] += em.fp[static_cast<Eigen::Index>(a)];
        for (std::size_t b = 0; b < dofs.size(); ++b)
          triplets.emplace_back(static_cast<int>(dofs[a]), static_cast<int>(dofs[b]), em.Kp(a, b));
      }
      ElementRecord& rec = as.elements[el];
      rec.diag = element_diagnostics(em);
      rec.basis = std::move(em.basis);
      rec.Pi0Star = std::move(em.Pi0Star);
      rec.Kp = std::move(em.Kp);
      rec.basis_fallback = em.basis_fallback;
    }
    if (triplets.size() > (std::size_t{1} << 22) || stop == mesh.num_elements()) {
      Eigen::SparseMatrix<double> part(as.K.rows(), as.K.cols());
      part.setFromTriplets(triplets.begin(), triplets.end());
      as.K += part;
      triplets.clear();
      triplets.shrink_to_fit();
    }
  }
  return as;
}

ReducedSystem apply_dirichlet(const Assembly& as, const ScalarField& g) {
  ReducedSystem rs;
  const std::size_t n = as.map.size();
  rs.reduced_index.assign(n, -1);
  rs.fixed = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  long nfree = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (as.map.is_boundary[i]) {
      rs.fixed[static_cast<Eigen::Index>(i)] = g(as.map.points[i]);
    } else {
      rs.reduced_index[i] = nfree++;
    }
  }
  rs.b = Eigen::VectorXd::Zero(nfree);
  for (std::size_t i = 0; i < n; ++i)
    if (rs.reduced_index[i] >= 0) rs.b[rs.reduced_index[i]] = as.F[static_cast<Eigen::Index>(i)];

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(as.K.nonZeros()));
  for (Eigen::Index c = 0; c < as.K.outerSize(); ++c) {
    const long rc = rs.reduced_index[static_cast<std::size_t>(c)];
    for (Eigen::SparseMatrix<double>::InnerIterator it(as.K, c); it; ++it) {
      const long rr = rs.reduced_index[static_cast<std::size_t>(it.row())];
      if (rr < 0) continue;
      if (rc >= 0) {
        trip.emplace_back(rr, rc, it.value());
      } else {
        rs.b[rr] -= it.value() * rs.fixed[c];
      }
    }
  }
  rs.A.resize(nfree, nfree);
  rs.A.setFromTriplets(trip.begin(), trip.end());
  return rs;
}

Eigen::VectorXd expand_solution(const ReducedSystem& rs, const Eigen::VectorXd& x) {
  Eigen::VectorXd u = rs.fixed;
  for (std::size_t i = 0; i < rs.reduced_index.size(); ++i)
    if (rs.reduced_index[i] >= 0) u[static_cast<Eigen::Index>(i)] = x[rs.reduced_index[i]];
  return u;
}

LinearSolveResult solve_linear(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b) {
  LinearSolveResult r;
  const double bnorm = b.norm();
  auto residual = [&](const Eigen::VectorXd& x) {
    if (!x.allFinite()) return std::numeric_limits<double>::infinity();
    double res = (A * x - b).norm();
    return bnorm > 0 ? res / bnorm : res;
  };
  if (A.rows() == 0) {
    r.converged = true;
    r.method = "none";
    return r;
  }

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
  if (ldlt.info() == Eigen::Success) {
    r.x = ldlt.solve(b);
    r.relative_residual = residual(r.x);
    r.method = "ldlt";
    for (int step = 0; step < 3 && r.relative_residual > 1e-10 && std::isfinite(r.relative_residual); ++step) {
      Eigen::VectorXd x = r.x + ldlt.solve(b - A * r.x);
      double res = residual(x);
      if (!(res < r.relative_residual)) break;
      r.x = std::move(x);
      r.relative_residual = res;
    }
    // a successful factorization with a large residual means the system
    // itself is ill-conditioned; CG would not do better
    r.converged = r.relative_residual <= 1e-10;
    if (std::isfinite(r.relative_residual)) return r;
  } else {
    r.relative_residual = std::numeric_limits<double>::infinity();
  }

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(1e-12);
  cg.setMaxIterations(std::max<Eigen::Index>(1000, 4 * A.rows()));
  cg.compute(A);
  Eigen::VectorXd x;
  if (r.x.size() == b.size() && r.x.allFinite()) {
    x = cg.solveWithGuess(b, r.x);
  } else {
    x = cg.solve(b);
  }
  double res = residual(x);
  if (res < r.relative_residual) {
    r.x = x;
    r.relative_residual = res;
    r.method = "cg";
  }
  r.converged = r.relative_residual <= 1e-10;
  if (r.x.size() != b.size()) r.x = Eigen::VectorXd::Zero(b.size());
  return r;
}

Eigen::VectorXd interpolate_global(const PolygonalMesh& mesh, const DofMap& map, const ScalarField& u) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(map.size()));
  for (std::size_t i = 0; i < map.n_point_dofs(); ++i) v[static_cast<Eigen::Index>(i)] = u(map.points[i]);
  const int nm = poly_dim(map.k - 2);
  if (nm > 0) {
    parallel_for(mesh.num_elements(), [&](std::size_t el) {
      Eigen::VectorXd local = interpolate(mesh.element_polygon(el), map.k, u);
      const auto& dofs = map.element_dofs[el];
      for (int a = 0; a < nm; ++a) {
        std::size_t local_index = dofs.size() - static_cast<std::size_t>(nm) + static_cast<std::size_t>(a);
        v[static_cast<Eigen::Index>(dofs[local_index])] = local[static_cast<Eigen::Index>(local_index)];
      }
    });
  }
  return v;
}

ErrorNorms error_norms(const PolygonalMesh& mesh, const Assembly& as, const Eigen::VectorXd& uh,
                       const ModelProblem& problem, int degree) {
  const int k = as.map.k;
  const int qdeg = degree < 0 ? 2 * k + 3 : degree;
  Eigen::VectorXd ui = interpolate_global(mesh, as.map, problem.u);

  const std::size_t ne = mesh.num_elements();
  std::vector<std::array<double, 4>> parts(ne);
  parallel_for(ne, [&](std::size_t el) {
    const ElementRecord& rec = as.elements[el];
    const auto& dofs = as.map.element_dofs[el];
    Eigen::VectorXd local(static_cast<Eigen::Index>(dofs.size())), diff(static_cast<Eigen::Index>(dofs.size()));
    for (std::size_t a = 0; a < dofs.size(); ++a) {
      local[static_cast<Eigen::Index>(a)] = uh[static_cast<Eigen::Index>(dofs[a])];
      diff[static_cast<Eigen::Index>(a)] = ui[static_cast<Eigen::Index>(dofs[a])] - local[static_cast<Eigen::Index>(a)];
    }
    Eigen::VectorXd coeffs = rec.Pi0Star * local;
    QuadratureRule2D quad = polygon_quadrature(mesh.element_polygon(el), qdeg);
    double e2 = 0, u2 = 0, g2 = 0;
    for (std::size_t q = 0; q < quad.size(); ++q) {
      Point2 x = quad.nodes[q];
      double u = problem.u(x);
      double d = u - rec.basis.values(x).dot(coeffs);
      Point2 g = problem.grad_u(x);
      e2 += quad.weights[q] * d * d;
      u2 += quad.weights[q] * u * u;
      g2 += quad.weights[q] * dot(g, g);
    }
    parts[el] = {e2, u2, g2, diff.dot(rec.Kp * diff)};
  });
  double e2 = 0, u2 = 0, g2 = 0, a2 = 0;
  for (const auto& p : parts) {
    e2 += p[0];
    u2 += p[1];
    g2 += p[2];
    a2 += p[3];
  }
  ErrorNorms out;
  out.l2_rel = std::sqrt(e2 / u2);
  out.h1_rel = std::sqrt(std::max(a2, 0.0) / g2);
  return out;
}

double safe_log10(double v) { return v > 0 ? std::log10(v) : -30.0; }

SolveReport solve_problem(const PolygonalMesh& mesh, int k, const ElementOptions& opt, const ModelProblem& problem) {
  SolveReport rep;
  Assembly as = assemble(mesh, k, opt, problem.f);
  rep.n_dof = as.map.size();
  rep.h = mesh_stats(mesh).h;
  double cg = 0, ch = 0, pn = 0, p0 = 0;
  for (const auto& rec : as.elements) {
    cg = std::max(cg, rec.diag.cond_G);
    ch = std::max(ch, rec.diag.cond_H);
    pn = std::max(pn, rec.diag.pinabla_identity_err);
    p0 = std::max(p0, rec.diag.pi0_identity_err);
    rep.basis_fallbacks += rec.basis_fallback ? 1 : 0;
  }
  rep.max_log10_cond_G = safe_log10(cg);
  rep.max_log10_cond_H = safe_log10(ch);
  rep.max_log10_pinabla_id = safe_log10(pn);
  rep.max_log10_pi0_id = safe_log10(p0);

  ReducedSystem rs = apply_dirichlet(as, problem.g);
  LinearSolveResult sol = solve_linear(rs.A, rs.b);
  rep.solver = sol.method;
  rep.relative_residual = sol.relative_residual;
  Eigen::VectorXd uh = expand_solution(rs, sol.x);
  ErrorNorms en = error_norms(mesh, as, uh, problem);
  rep.err_L2_rel = en.l2_rel;
  rep.err_H1_rel = en.h1_rel;

  std::vector<std::string> flags;
  if (!sol.converged) flags.push_back("inaccurate");
  if (!std::isfinite(en.l2_rel) || !std::isfinite(en.h1_rel)) flags.push_back("nonfinite");
  if (rep.basis_fallbacks > 0) flags.push_back("basis-fallback");
  if (flags.empty()) {
    rep.status = "ok";
  } else {
    for (std::size_t i = 0; i < flags.size(); ++i) rep.status += (i ? "+" : "") + flags[i];
  }
  return rep;
}

}  // namespace polyvem
