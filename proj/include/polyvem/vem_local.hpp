#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polyvem/basis.hpp"
#include "polyvem/geometry.hpp"

namespace polyvem {

enum class StabKind { DofiDofi, DRecipe, Trace };

using ScalarField = std::function<double(Point2)>;

enum class DofKind { Vertex, EdgeInternal, Moment };

struct DofDescriptor {
  DofKind kind;
  int index;  ///< vertex index, edge index, or moment (monomial) index
  int sub;    ///< Gauss-Lobatto sub-index for edge dofs (1..k-1), else 0
};

/// Element dofs: vertices in loop order, then k-1 internal Gauss-Lobatto
/// nodes per edge (ordered from vertex i towards vertex i+1), then moments
/// (1/|P|) int v m_alpha for |alpha| <= k-2.
struct DofLayout {
  int k = 1;
  int n_vertices = 0;
  std::vector<DofDescriptor> dofs;

  int size() const { return static_cast<int>(dofs.size()); }
  int n_boundary() const { return n_vertices * k; }
  int n_moments() const { return poly_dim(k - 2); }
  int edge_dof(int edge, int sub) const { return n_vertices + edge * (k - 1) + (sub - 1); }
  int moment_dof(int alpha) const { return n_boundary() + alpha; }
};

DofLayout dof_layout(const Polygon& p, int k);

/// Coordinates of the boundary dofs (vertices, then edge nodes).
std::vector<Point2> boundary_dof_points(const Polygon& p, int k);

struct ElementOptions {
  BasisKind basis = BasisKind::Orthonormal;
  StabKind stab = StabKind::DRecipe;
  int load_degree = -1;  ///< quadrature degree for load and moments; -1 means 2k+3
};

struct ElementMatrices {
  DofLayout layout;
  CellBasis basis;
  bool basis_fallback = false;  ///< orthonormalization failed, monomials used
  double area = 0.0;
  double perimeter = 0.0;
  Eigen::MatrixXd D, B, G, H, C;
  Eigen::MatrixXd PiNablaStar, PiNablaDof, Pi0Star;
  Eigen::MatrixXd Kc;  ///< consistency part of the stiffness
  Eigen::MatrixXd S;   ///< stabilization matrix acting on dof vectors
  Eigen::MatrixXd Kp;
  Eigen::VectorXd fp;
};

struct ElementDiagnostics {
  double cond_G = 1.0;
  double cond_H = 1.0;
  double pinabla_identity_err = 0.0;
  double pi0_identity_err = 0.0;
};

class ElementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Builds all local matrices. `f` may be empty, in which case fp is zero.
ElementMatrices build_element(const Polygon& p, int k, const ElementOptions& opt = {},
                              const ScalarField& f = {});

ElementDiagnostics element_diagnostics(const ElementMatrices& e);

/// Dof vector of the virtual element interpolant of u.
Eigen::VectorXd interpolate(const Polygon& p, int k, const ScalarField& u, int degree = -1);

/// 2-norm condition number via singular values.
double condition_number(const Eigen::MatrixXd& m);

/// Maps the string forms used on the command line.
StabKind parse_stab(const std::string& s);
BasisKind parse_basis(const std::string& s);
std::string to_string(StabKind s);
std::string to_string(BasisKind b);

}  // namespace polyvem
