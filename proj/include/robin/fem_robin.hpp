#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "robin/mesh.hpp"
#include "robin/robin_basis.hpp"
#include "robin/sparse_linalg.hpp"

namespace robin {

struct Disc {
  Point2 center;
  double radius = 0.0;
};

/// Measurement region: union of open discs inside the unit square.
struct SubdomainSpec {
  std::vector<Disc> discs;

  bool contains(Point2 p) const;

  /// Discs around (0.8, 0.8) and (0.4, 0.2) with radii 0.05 and 0.1.
  static SubdomainSpec paper();
};

void validate(const SubdomainSpec& omega);

/// Interior source f from a fixed registry: "zero", "constant(c)" and
/// "paper" (f(x, y) = -10 x exp(sin(4 pi y))).
class SourceTerm {
 public:
  enum class Kind { zero, constant, paper };

  static SourceTerm zero() { return SourceTerm(Kind::zero, 0.0); }
  static SourceTerm constant(double c) { return SourceTerm(Kind::constant, c); }
  static SourceTerm paper() { return SourceTerm(Kind::paper, 0.0); }
  /// Throws std::invalid_argument for unknown ids.
  static SourceTerm parse(std::string_view id);

  Kind kind() const { return kind_; }
  std::string id() const;
  double operator()(Point2 p) const;

 private:
  SourceTerm(Kind kind, double value) : kind_(kind), value_(value) {}
  Kind kind_;
  double value_;
};

/// Boundary datum g as a function of arc length: "zero", "constant(c)" or a
/// trigonometric function given by a RobinParameter ("robin").
class BoundaryDatum {
 public:
  enum class Kind { zero, constant, robin };

  static BoundaryDatum zero() { return BoundaryDatum(Kind::zero, 0.0, {}); }
  static BoundaryDatum constant(double c) { return BoundaryDatum(Kind::constant, c, {}); }
  static BoundaryDatum robin(RobinParameter a) { return BoundaryDatum(Kind::robin, 0.0, std::move(a)); }
  /// "zero" or "constant(c)"; trigonometric data is built with robin().
  static BoundaryDatum parse(std::string_view id);

  Kind kind() const { return kind_; }
  std::string id() const;
  double operator()(double t) const;

 private:
  BoundaryDatum(Kind kind, double value, std::optional<RobinParameter> a)
      : kind_(kind), value_(value), a_(std::move(a)) {}
  Kind kind_;
  double value_;
  std::optional<RobinParameter> a_;
};

struct ProblemData {
  SourceTerm f = SourceTerm::zero();
  BoundaryDatum g = BoundaryDatum::zero();

  static ProblemData paper() { return {SourceTerm::paper(), BoundaryDatum::zero()}; }
};

/// Nodal values of a P1 function on the N x N unit-square mesh.
struct FemField {
  int n = 0;
  std::vector<double> values;

  static FemField zeros(int n);

  /// Barycentric interpolation in the containing triangle.
  double evaluate(Point2 p) const;
  double at_node(int i, int j) const { return values[static_cast<std::size_t>(j) * (n + 1) + i]; }
};

enum class LinearSolverKind { cholesky, cg };

struct LinearSolverOptions {
  LinearSolverKind kind = LinearSolverKind::cholesky;
  double cg_tol = 1e-12;
  int cg_max_iter = 0;  ///< 0 selects 10 n
  bool cg_jacobi = true;
};

SparseMatrix assemble_stiffness(const Mesh& mesh);

/// Stiffness plus Robin boundary mass (4-point Gauss per edge, a sampled at
/// the quadrature arc lengths). Rejects a that is not positive on the boundary.
SparseMatrix assemble_system(const Mesh& mesh, const RobinParameter& a);
SparseMatrix assemble_system(const Mesh& mesh, const SparseMatrix& stiffness,
                             const RobinParameter& a);

/// l_{f,g}(v_i) = int g v_i ds - int f v_i dx for every nodal hat function.
std::vector<double> assemble_load_fg(const Mesh& mesh, const ProblemData& data);

/// Assembled and factorized system for one Robin parameter; shared by all
/// solves that use the same a. The mesh must outlive the system.
class RobinSystem {
 public:
  RobinSystem(const Mesh& mesh, RobinParameter a, LinearSolverOptions options = {});
  RobinSystem(const Mesh& mesh, const SparseMatrix& stiffness, RobinParameter a,
              LinearSolverOptions options = {});

  const Mesh& mesh() const { return *mesh_; }
  const RobinParameter& robin() const { return a_; }
  const SparseMatrix& matrix() const { return matrix_; }

  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  void factorize();

  const Mesh* mesh_;
  RobinParameter a_;
  LinearSolverOptions options_;
  SparseMatrix matrix_;
  std::shared_ptr<const CholeskyFactor> factor_;
};

/// b(u_h, v) = l_{f,g}(v).
FemField solve_forward(const RobinSystem& system, const ProblemData& data);
FemField solve_forward(const Mesh& mesh, const RobinParameter& a, const ProblemData& data);

/// b(z_h, v) = -int 1_omega (q - u_h) v dx.
FemField solve_adjoint(const RobinSystem& system, const FemField& q, const FemField& u_h,
                       const SubdomainSpec& omega);
FemField solve_adjoint(const Mesh& mesh, const RobinParameter& a, const FemField& q,
                       const FemField& u_h, const SubdomainSpec& omega);

/// b(u_dot, v) = -int eta u_h v ds.
FemField solve_u_dot(const RobinSystem& system, const RobinParameter& eta, const FemField& u_h);
FemField solve_u_dot(const Mesh& mesh, const RobinParameter& a, const RobinParameter& eta,
                     const FemField& u_h);

/// b(z_dot, v) = int 1_omega u_dot v dx - int eta z_h v ds.
FemField solve_z_dot(const RobinSystem& system, const RobinParameter& eta, const FemField& u_dot,
                     const FemField& z_h, const SubdomainSpec& omega);
FemField solve_z_dot(const Mesh& mesh, const RobinParameter& a, const RobinParameter& eta,
                     const FemField& u_dot, const FemField& z_h, const SubdomainSpec& omega);

/// Nodal restriction to a nested coarse mesh (n_fine = k n_coarse, k >= 2).
FemField restrict_fine_to_coarse(const FemField& fine, int n_coarse);

// Lower-level load pieces, exposed for the Newton module and for tests.

/// Degree-4 quadrature points of the mesh that fall inside omega.
struct OmegaQuadrature {
  struct Point {
    int triangle;
    std::array<double, 3> lambda;
    double weight;  ///< quadrature weight times element area
  };
  std::vector<Point> points;
};

OmegaQuadrature omega_quadrature(const Mesh& mesh, const SubdomainSpec& omega);

/// load_i += scale * int_omega w v_i dx for a P1 field w.
void add_omega_load(const Mesh& mesh, const OmegaQuadrature& quad, const FemField& w, double scale,
                    std::span<double> load);

/// load_i += scale * int eta u v_i ds for a P1 field u.
void add_boundary_load(const Mesh& mesh, const RobinParameter& eta, const FemField& u, double scale,
                       std::span<double> load);

/// (int phi_j u z ds)_{j=1..J} over the basis of spec.
std::vector<double> boundary_moments(const Mesh& mesh, const BasisSpec& spec, const FemField& u,
                                     const FemField& z);

/// max_i |(A u - rhs)_i|.
double galerkin_residual(const SparseMatrix& a, const FemField& u, std::span<const double> rhs);

}  // namespace robin
