#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "polyvem/mesh.hpp"
#include "polyvem/vem_local.hpp"

namespace polyvem {

using VectorField = std::function<Point2(Point2)>;

/// -Laplace(u) = f in the unit square, u = g on the boundary.
struct ModelProblem {
  std::string name;
  ScalarField u;
  VectorField grad_u;
  ScalarField f;
  ScalarField g;
};

/// u = sin(pi x) sin(pi y) / (2 pi^2), f = sin(pi x) sin(pi y), g = 0.
ModelProblem sine_problem();

/// A fixed polynomial of total degree k with matching f and g; the
/// discrete solution must reproduce it (patch test).
ModelProblem polynomial_problem(int k);

/// Global numbering: mesh vertices, then k-1 nodes per edge (edges keyed by
/// their sorted vertex pair, nodes ordered from the smaller vertex index to
/// the larger), then N_{k-2} moments per element.
struct DofMap {
  int k = 1;
  std::size_t n_vertex_dofs = 0;
  std::size_t n_edges = 0;
  std::size_t n_moment_dofs = 0;
  std::vector<std::vector<std::size_t>> element_dofs;
  std::vector<Point2> points;     ///< coordinates of vertex and edge dofs
  std::vector<bool> is_boundary;  ///< size() entries, true on Dirichlet dofs

  std::size_t n_point_dofs() const { return points.size(); }
  std::size_t size() const { return points.size() + n_moment_dofs; }
};

DofMap build_dof_map(const PolygonalMesh& mesh, int k);

/// Per-element data retained after assembly for error evaluation.
struct ElementRecord {
  CellBasis basis;
  Eigen::MatrixXd Pi0Star;
  Eigen::MatrixXd Kp;
  ElementDiagnostics diag;
  bool basis_fallback = false;
};

struct Assembly {
  DofMap map;
  Eigen::SparseMatrix<double> K;
  Eigen::VectorXd F;
  std::vector<ElementRecord> elements;
};

/// Builds all element matrices (in parallel) and scatters them in element
/// order. Element failures are rethrown as ElementError naming the element.
Assembly assemble(const PolygonalMesh& mesh, int k, const ElementOptions& opt, const ScalarField& f);

struct ReducedSystem {
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  std::vector<long> reduced_index;  ///< global dof -> reduced row, -1 if fixed
  Eigen::VectorXd fixed;            ///< global vector holding the Dirichlet values
};

ReducedSystem apply_dirichlet(const Assembly& as, const ScalarField& g);

/// Global dof vector from a reduced solution.
Eigen::VectorXd expand_solution(const ReducedSystem& rs, const Eigen::VectorXd& x);

struct LinearSolveResult {
  Eigen::VectorXd x;
  bool converged = false;
  double relative_residual = 0.0;
  std::string method;  ///< "ldlt" or "cg"
};

/// Sparse LDLT; if it breaks down or leaves a relative residual above 1e-10,
/// falls back to Jacobi-preconditioned CG and keeps the better answer.
LinearSolveResult solve_linear(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b);

/// Global dof vector of the virtual element interpolant.
Eigen::VectorXd interpolate_global(const PolygonalMesh& mesh, const DofMap& map, const ScalarField& u);

struct ErrorNorms {
  double l2_rel = 0.0;
  double h1_rel = 0.0;
};

/// Relative L2 error of Pi0 u_h and relative energy error sqrt(a_h(u_I - u_h,
/// u_I - u_h)) / |u|_1.
ErrorNorms error_norms(const PolygonalMesh& mesh, const Assembly& as, const Eigen::VectorXd& uh,
                       const ModelProblem& problem, int degree = -1);

struct SolveReport {
  std::size_t n_dof = 0;
  double h = 0.0;
  double err_L2_rel = 0.0;
  double err_H1_rel = 0.0;
  double max_log10_cond_G = 0.0;
  double max_log10_cond_H = 0.0;
  double max_log10_pinabla_id = 0.0;
  double max_log10_pi0_id = 0.0;
  double relative_residual = 0.0;
  std::size_t basis_fallbacks = 0;
  std::string solver;
  std::string status;  ///< "ok", or '+'-joined flags such as "inaccurate"
};

/// log10 with identity errors of exactly zero mapped to -30.
double safe_log10(double v);

/// Full pipeline: assemble, impose g, solve, measure errors and diagnostics.
SolveReport solve_problem(const PolygonalMesh& mesh, int k, const ElementOptions& opt, const ModelProblem& problem);

}  // namespace polyvem
