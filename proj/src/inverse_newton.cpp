#include "robin/inverse_newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace robin {

namespace {

std::vector<double> axpy(std::span<const double> x, double s, std::span<const double> d) {
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * d[i];
  return out;
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

int resolve_threads(int requested, int work) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  return std::clamp(n, 1, std::max(1, work));
}

}  // namespace

InverseProblem::InverseProblem(const Mesh& mesh, ProblemData data, FemField q, SubdomainSpec omega,
                               LinearSolverOptions solver)
    : mesh_(&mesh),
      data_(std::move(data)),
      q_(std::move(q)),
      omega_(std::move(omega)),
      solver_(solver),
      stiffness_(assemble_stiffness(mesh)),
      omega_quad_(robin::omega_quadrature(mesh, omega_)) {
  if (q_.n != mesh.n_per_side() || q_.values.size() != mesh.num_nodes()) {
    throw std::invalid_argument("InverseProblem: measurement lives on a " + std::to_string(q_.n) +
                                "-mesh, expected " + std::to_string(mesh.n_per_side()));
  }
  validate(omega_);
}

RobinSystem InverseProblem::system(const RobinParameter& a) const {
  return RobinSystem(*mesh_, stiffness_, a, solver_);
}

ForwardState evaluate_state(const InverseProblem& problem, const RobinParameter& a,
                            std::optional<BasisSpec> basis) {
  const Mesh& mesh = problem.mesh();
  RobinSystem system = problem.system(a);
  FemField u = solve_forward(system, problem.data());

  FemField mismatch = problem.q();
  for (std::size_t i = 0; i < mismatch.values.size(); ++i) mismatch.values[i] -= u.values[i];
  std::vector<double> load(mesh.num_nodes(), 0.0);
  add_omega_load(mesh, problem.omega_quadrature(), mismatch, -1.0, load);
  FemField z{mesh.n_per_side(), system.solve(load)};

  auto F = boundary_moments(mesh, basis.value_or(a.spec()), u, z);
  return ForwardState{std::move(system), std::move(u), std::move(z), std::move(F)};
}

std::vector<double> compute_F(const InverseProblem& problem, const RobinParameter& a,
                              std::optional<BasisSpec> basis) {
  return evaluate_state(problem, a, basis).F;
}

DenseMatrix compute_jacobian(const InverseProblem& problem, const ForwardState& state,
                             const BasisSpec& basis) {
  const Mesh& mesh = problem.mesh();
  const int dim = basis.size();
  DenseMatrix jac(dim, dim);

  auto column = [&](int j) {
    const RobinParameter eta = RobinParameter::basis_mode(basis, j + 1);
    std::vector<double> load(mesh.num_nodes(), 0.0);
    add_boundary_load(mesh, eta, state.u, -1.0, load);
    const FemField u_dot{mesh.n_per_side(), state.system.solve(load)};

    std::fill(load.begin(), load.end(), 0.0);
    add_omega_load(mesh, problem.omega_quadrature(), u_dot, 1.0, load);
    add_boundary_load(mesh, eta, state.z, -1.0, load);
    const FemField z_dot{mesh.n_per_side(), state.system.solve(load)};

    const auto first = boundary_moments(mesh, basis, u_dot, state.z);
    const auto second = boundary_moments(mesh, basis, state.u, z_dot);
    for (int i = 0; i < dim; ++i) jac(i, j) = first[i] + second[i];
  };

  const int workers = resolve_threads(problem.threads(), dim);
  if (workers == 1) {
    for (int j = 0; j < dim; ++j) column(j);
    return jac;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int j = w; j < dim; j += workers) column(j);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return jac;
}

DenseMatrix compute_jacobian(const InverseProblem& problem, const RobinParameter& a,
                             std::optional<BasisSpec> basis) {
  const BasisSpec spec = basis.value_or(a.spec());
  return compute_jacobian(problem, evaluate_state(problem, a, spec), spec);
}

void validate(const NewtonConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("newton.tol must be positive");
  if (cfg.max_iter < 1) throw std::invalid_argument("newton.max_iter must be >= 1");
  if (cfg.max_backtracks < 0) throw std::invalid_argument("newton.max_backtracks must be >= 0");
  if (cfg.positivity_samples < 256) {
    throw std::invalid_argument("newton.positivity_samples must be >= 256");
  }
}

std::string to_string(NewtonStatus status) {
  switch (status) {
    case NewtonStatus::converged: return "converged";
    case NewtonStatus::max_iterations: return "max_iterations";
    case NewtonStatus::backtrack_exhausted: return "backtrack_exhausted";
    case NewtonStatus::singular_jacobian: return "singular_jacobian";
  }
  return "unknown";
}

ReconstructionResult newton_reconstruct(const InverseProblem& problem, const BasisSpec& spec,
                                        std::span<const double> x0, const NewtonConfig& cfg,
                                        const RobinParameter* reference) {
  validate(cfg);
  validate(spec);
  std::vector<double> x(x0.begin(), x0.end());
  RobinParameter a = RobinParameter::from_coefficients(spec, x);
  const double a_min = min_on_boundary(a, cfg.positivity_samples);
  if (!(a_min > 0.0)) {
    throw std::invalid_argument("initial guess violates positivity on the boundary (minimum " +
                                std::to_string(a_min) + ")");
  }

  ReconstructionResult result;
  result.trace.x0 = x;
  ForwardState state = evaluate_state(problem, a, spec);
  double residual = norm2(state.F);
  result.trace.initial_residual = residual;

  auto finish = [&](NewtonStatus status, std::string message) {
    result.a_h = a;
    result.status = status;
    result.converged = status == NewtonStatus::converged;
    result.message = std::move(message);
    return std::move(result);
  };

  for (int k = 1; k <= cfg.max_iter; ++k) {
    const DenseMatrix jac = compute_jacobian(problem, state, spec);
    std::vector<double> minus_f(state.F.size());
    for (std::size_t i = 0; i < minus_f.size(); ++i) minus_f[i] = -state.F[i];
    std::vector<double> d;
    try {
      d = dense_solve(jac, minus_f);
    } catch (const SingularMatrixError& e) {
      result.iterations = k - 1;
      return finish(NewtonStatus::singular_jacobian,
                    "singular Jacobian at iteration " + std::to_string(k) + ": " + e.what());
    }

    std::optional<ForwardState> accepted;
    std::vector<double> x_next;
    double step = 1.0;
    int kappa = 0;
    for (; kappa <= cfg.max_backtracks; ++kappa) {
      step = std::ldexp(1.0, -kappa);
      x_next = axpy(x, step, d);
      const RobinParameter trial = RobinParameter::from_coefficients(spec, x_next);
      if (!(min_on_boundary(trial, cfg.positivity_samples) > 0.0)) continue;
      ForwardState trial_state = evaluate_state(problem, trial, spec);
      if (norm2(trial_state.F) <= residual) {
        accepted.emplace(std::move(trial_state));
        break;
      }
    }
    if (!accepted) {
      result.iterations = k - 1;
      return finish(NewtonStatus::backtrack_exhausted,
                    "line search exhausted " + std::to_string(cfg.max_backtracks) +
                        " backtracks at iteration " + std::to_string(k));
    }

    const double change = distance(x_next, x);
    x = std::move(x_next);
    a = accepted->system.robin();
    state = std::move(*accepted);
    residual = norm2(state.F);
    result.iterations = k;

    NewtonStep row;
    row.k = k;
    row.x = x;
    row.residual_norm = residual;
    row.step = step;
    row.backtracks = kappa;
    if (reference) row.c1_error = c1_distance(a, *reference);
    result.trace.steps.push_back(std::move(row));

    if (change <= cfg.tol) {
      return finish(NewtonStatus::converged,
                    "converged after " + std::to_string(k) + " iterations");
    }
  }
  return finish(NewtonStatus::max_iterations,
                "no convergence within " + std::to_string(cfg.max_iter) + " iterations");
}

std::vector<double> local_quadratic_rate(const NewtonTrace& trace, std::span<const double> x_star) {
  const auto& steps = trace.steps;
  std::size_t first = steps.size();
  while (first > 0 && steps[first - 1].backtracks == 0) --first;
  if (first == steps.size()) {
    throw std::invalid_argument("local_quadratic_rate: trace ends without a full Newton step");
  }

  std::vector<std::span<const double>> iterates;
  iterates.push_back(first == 0 ? std::span<const double>(trace.x0)
                                : std::span<const double>(steps[first - 1].x));
  for (std::size_t i = first; i < steps.size(); ++i) iterates.push_back(steps[i].x);

  double scale = 1.0;
  for (double v : x_star) scale = std::max(scale, std::abs(v));
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * scale;

  std::vector<double> ratios;
  for (std::size_t i = 0; i + 1 < iterates.size(); ++i) {
    const double e = distance(iterates[i], x_star);
    if (e <= floor) continue;
    ratios.push_back(distance(iterates[i + 1], x_star) / (e * e));
  }
  if (ratios.empty()) {
    throw std::invalid_argument("local_quadratic_rate: insufficient trace above rounding level");
  }
  return ratios;
}

}  // namespace robin
