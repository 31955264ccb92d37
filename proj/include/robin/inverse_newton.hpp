#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "robin/fem_robin.hpp"

namespace robin {

/// Everything F_h needs besides the Robin parameter. q lives on the
/// reconstruction mesh. The mesh must outlive the problem.
class InverseProblem {
 public:
  InverseProblem(const Mesh& mesh, ProblemData data, FemField q, SubdomainSpec omega,
                 LinearSolverOptions solver = {});

  const Mesh& mesh() const { return *mesh_; }
  const ProblemData& data() const { return data_; }
  const FemField& q() const { return q_; }
  const SubdomainSpec& omega() const { return omega_; }
  const LinearSolverOptions& solver() const { return solver_; }
  const SparseMatrix& stiffness() const { return stiffness_; }
  const OmegaQuadrature& omega_quadrature() const { return omega_quad_; }

  /// Worker threads for the Jacobian columns; 0 picks the hardware count.
  void set_threads(int threads) { threads_ = threads; }
  int threads() const { return threads_; }

  RobinSystem system(const RobinParameter& a) const;

 private:
  const Mesh* mesh_;
  ProblemData data_;
  FemField q_;
  SubdomainSpec omega_;
  LinearSolverOptions solver_;
  SparseMatrix stiffness_;
  OmegaQuadrature omega_quad_;
  int threads_ = 1;
};

/// Forward state at one Robin parameter: system, u_h, z_h and F_h.
struct ForwardState {
  RobinSystem system;
  FemField u;
  FemField z;
  std::vector<double> F;
};

/// Forward and adjoint solve followed by F_{h,j} = int phi_j u_h z_h ds over
/// the functions of `basis` (defaults to the basis of a).
ForwardState evaluate_state(const InverseProblem& problem, const RobinParameter& a,
                            std::optional<BasisSpec> basis = std::nullopt);

std::vector<double> compute_F(const InverseProblem& problem, const RobinParameter& a,
                              std::optional<BasisSpec> basis = std::nullopt);

/// Column j holds dF_h[a] applied to the j-th basis function.
DenseMatrix compute_jacobian(const InverseProblem& problem, const ForwardState& state,
                             const BasisSpec& basis);
DenseMatrix compute_jacobian(const InverseProblem& problem, const RobinParameter& a,
                             std::optional<BasisSpec> basis = std::nullopt);

struct NewtonConfig {
  double tol = 1e-10;
  int max_iter = 300;
  int max_backtracks = 40;
  int positivity_samples = kDefaultBoundarySamples;
};

void validate(const NewtonConfig& cfg);

struct NewtonStep {
  int k = 0;                     ///< iteration number, starting at 1
  std::vector<double> x;         ///< accepted iterate x_k
  double residual_norm = 0.0;    ///< |F_h(a(x_k))|
  double step = 1.0;             ///< 0.5^kappa
  int backtracks = 0;            ///< kappa
  std::optional<double> c1_error;
};

struct NewtonTrace {
  std::vector<double> x0;
  double initial_residual = 0.0;
  std::vector<NewtonStep> steps;
};

enum class NewtonStatus { converged, max_iterations, backtrack_exhausted, singular_jacobian };

std::string to_string(NewtonStatus status);

struct ReconstructionResult {
  RobinParameter a_h;
  int iterations = 0;
  bool converged = false;
  NewtonStatus status = NewtonStatus::max_iterations;
  std::string message;
  NewtonTrace trace;
};

/// Damped Newton iteration for F_h(a) = 0 with backtracking on |F_h| and
/// boundary positivity. If reference is given, every trace row records the
/// C1 distance to it. Throws std::invalid_argument when a(x0) is not
/// positive on the boundary.
ReconstructionResult newton_reconstruct(const InverseProblem& problem, const BasisSpec& spec,
                                        std::span<const double> x0, const NewtonConfig& cfg = {},
                                        const RobinParameter* reference = nullptr);

/// e_{k+1} / e_k^2 along the trailing run of full steps, e_k = |x_k - x_star|.
/// Pairs whose e_k is at the rounding floor are skipped.
std::vector<double> local_quadratic_rate(const NewtonTrace& trace, std::span<const double> x_star);

}  // namespace robin
