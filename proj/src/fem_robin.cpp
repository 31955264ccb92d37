#include "robin/fem_robin.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "robin/quadrature.hpp"

namespace robin {

namespace {

constexpr int kEdgePoints = 4;
constexpr int kLoadDegree = 4;

void check_field(const Mesh& mesh, const FemField& field, const char* what) {
  if (field.n != mesh.n_per_side() || field.values.size() != mesh.num_nodes()) {
    throw std::invalid_argument(std::string(what) + ": field lives on a " +
                                std::to_string(field.n) + "-mesh, expected " +
                                std::to_string(mesh.n_per_side()));
  }
}

std::optional<double> parse_constant(std::string_view id) {
  constexpr std::string_view prefix = "constant(";
  if (!id.starts_with(prefix) || !id.ends_with(")")) return std::nullopt;
  const std::string body(id.substr(prefix.size(), id.size() - prefix.size() - 1));
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(body, &used);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (used != body.size()) return std::nullopt;
  return value;
}

std::string format_constant(double c) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, c);
  return "constant(" + std::string(buf, res.ptr) + ")";
}

FemField as_field(const Mesh& mesh, std::vector<double> values) {
  return FemField{mesh.n_per_side(), std::move(values)};
}

}  // namespace

// ---------------------------------------------------------------------------
// Problem data

bool SubdomainSpec::contains(Point2 p) const {
  for (const Disc& d : discs) {
    const double dx = p.x - d.center.x;
    const double dy = p.y - d.center.y;
    if (dx * dx + dy * dy < d.radius * d.radius) return true;
  }
  return false;
}

SubdomainSpec SubdomainSpec::paper() { return {{{{0.8, 0.8}, 0.05}, {{0.4, 0.2}, 0.1}}}; }

void validate(const SubdomainSpec& omega) {
  for (std::size_t i = 0; i < omega.discs.size(); ++i) {
    const Disc& d = omega.discs[i];
    const std::string name = "omega disc " + std::to_string(i);
    if (!(d.radius >= 0.0)) throw std::invalid_argument(name + ": radius must be non-negative");
    if (d.center.x - d.radius < 0.0 || d.center.x + d.radius > 1.0 ||
        d.center.y - d.radius < 0.0 || d.center.y + d.radius > 1.0) {
      throw std::invalid_argument(name + ": disc must lie inside the unit square");
    }
  }
}

SourceTerm SourceTerm::parse(std::string_view id) {
  if (id == "zero") return zero();
  if (id == "paper") return paper();
  if (auto c = parse_constant(id)) return constant(*c);
  throw std::invalid_argument("unknown source id '" + std::string(id) + "'");
}

std::string SourceTerm::id() const {
  switch (kind_) {
    case Kind::zero: return "zero";
    case Kind::paper: return "paper";
    case Kind::constant: return format_constant(value_);
  }
  return {};
}

double SourceTerm::operator()(Point2 p) const {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::constant: return value_;
    case Kind::paper: return -10.0 * p.x * std::exp(std::sin(4.0 * std::numbers::pi * p.y));
  }
  return 0.0;
}

BoundaryDatum BoundaryDatum::parse(std::string_view id) {
  if (id == "zero") return zero();
  if (auto c = parse_constant(id)) return constant(*c);
  throw std::invalid_argument("unknown boundary datum id '" + std::string(id) + "'");
}

std::string BoundaryDatum::id() const {
  switch (kind_) {
    case Kind::zero: return "zero";
    case Kind::constant: return format_constant(value_);
    case Kind::robin: return "robin";
  }
  return {};
}

double BoundaryDatum::operator()(double t) const {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::constant: return value_;
    case Kind::robin: return a_->value(t);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// FemField

FemField FemField::zeros(int n) {
  return FemField{n, std::vector<double>(static_cast<std::size_t>(n + 1) * (n + 1), 0.0)};
}

double FemField::evaluate(Point2 p) const {
  const double x = std::clamp(p.x, 0.0, 1.0) * n;
  const double y = std::clamp(p.y, 0.0, 1.0) * n;
  const int i = std::min(static_cast<int>(std::floor(x)), n - 1);
  const int j = std::min(static_cast<int>(std::floor(y)), n - 1);
  const double xi = x - i;
  const double eta = y - j;
  const double v00 = at_node(i, j);
  const double v10 = at_node(i + 1, j);
  const double v11 = at_node(i + 1, j + 1);
  const double v01 = at_node(i, j + 1);
  if (xi >= eta) return v00 + xi * (v10 - v00) + eta * (v11 - v10);
  return v00 + eta * (v01 - v00) + xi * (v11 - v01);
}

// ---------------------------------------------------------------------------
// Assembly

SparseMatrix assemble_stiffness(const Mesh& mesh) {
  const auto nodes = mesh.nodes();
  std::vector<SparseMatrix::Entry> entries;
  entries.reserve(mesh.triangles().size() * 9);
  for (const Triangle& tri : mesh.triangles()) {
    const Point2 p0 = nodes[tri[0]];
    const Point2 p1 = nodes[tri[1]];
    const Point2 p2 = nodes[tri[2]];
    const double area = signed_area(mesh, tri);
    // Gradients of the barycentric coordinates, scaled by 2 * area.
    const double gx[3] = {p1.y - p2.y, p2.y - p0.y, p0.y - p1.y};
    const double gy[3] = {p2.x - p1.x, p0.x - p2.x, p1.x - p0.x};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double k = (gx[a] * gx[b] + gy[a] * gy[b]) / (4.0 * area);
        entries.push_back({tri[a], tri[b], k});
      }
    }
  }
  return SparseMatrix::from_entries(static_cast<int>(mesh.num_nodes()), std::move(entries));
}

SparseMatrix assemble_system(const Mesh& mesh, const RobinParameter& a) {
  return assemble_system(mesh, assemble_stiffness(mesh), a);
}

SparseMatrix assemble_system(const Mesh& mesh, const SparseMatrix& stiffness,
                             const RobinParameter& a) {
  const double a_min = min_on_boundary(a);
  if (!(a_min > 0.0)) {
    throw std::invalid_argument("assemble_system: Robin coefficient must be positive on the "
                                "boundary (minimum " + std::to_string(a_min) + ")");
  }
  SparseMatrix m = stiffness;
  const EdgeRule& rule = edge_rule(kEdgePoints);
  const double length = 1.0 / mesh.n_per_side();
  for (const BoundaryEdge& e : mesh.boundary_edges()) {
    double maa = 0.0;
    double mab = 0.0;
    double mbb = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double s = rule.points[q];
      const double w = rule.weights[q] * length * a.value(e.t_a + s * (e.t_b - e.t_a));
      maa += w * (1.0 - s) * (1.0 - s);
      mab += w * (1.0 - s) * s;
      mbb += w * s * s;
    }
    m.add(e.node_a, e.node_a, maa);
    m.add(e.node_a, e.node_b, mab);
    m.add(e.node_b, e.node_a, mab);
    m.add(e.node_b, e.node_b, mbb);
  }
  return m;
}

std::vector<double> assemble_load_fg(const Mesh& mesh, const ProblemData& data) {
  std::vector<double> load(mesh.num_nodes(), 0.0);
  const auto nodes = mesh.nodes();
  if (data.f.kind() != SourceTerm::Kind::zero) {
    const TriangleRule& rule = triangle_rule(kLoadDegree);
    for (const Triangle& tri : mesh.triangles()) {
      const double area = signed_area(mesh, tri);
      const Point2 p0 = nodes[tri[0]];
      const Point2 p1 = nodes[tri[1]];
      const Point2 p2 = nodes[tri[2]];
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const auto& l = rule.points[q];
        const Point2 x{l[0] * p0.x + l[1] * p1.x + l[2] * p2.x,
                       l[0] * p0.y + l[1] * p1.y + l[2] * p2.y};
        const double w = rule.weights[q] * area * data.f(x);
        for (int k = 0; k < 3; ++k) load[tri[k]] -= w * l[k];
      }
    }
  }
  if (data.g.kind() != BoundaryDatum::Kind::zero) {
    const EdgeRule& rule = edge_rule(kEdgePoints);
    const double length = 1.0 / mesh.n_per_side();
    for (const BoundaryEdge& e : mesh.boundary_edges()) {
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double s = rule.points[q];
        const double w = rule.weights[q] * length * data.g(e.t_a + s * (e.t_b - e.t_a));
        load[e.node_a] += w * (1.0 - s);
        load[e.node_b] += w * s;
      }
    }
  }
  return load;
}

OmegaQuadrature omega_quadrature(const Mesh& mesh, const SubdomainSpec& omega) {
  const int n = mesh.n_per_side();
  std::vector<int> candidates;
  for (const Disc& d : omega.discs) {
    if (!(d.radius > 0.0)) continue;
    const int i0 = std::max(0, static_cast<int>(std::floor((d.center.x - d.radius) * n)));
    const int i1 = std::min(n - 1, static_cast<int>(std::floor((d.center.x + d.radius) * n)));
    const int j0 = std::max(0, static_cast<int>(std::floor((d.center.y - d.radius) * n)));
    const int j1 = std::min(n - 1, static_cast<int>(std::floor((d.center.y + d.radius) * n)));
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        candidates.push_back(2 * (j * n + i));
        candidates.push_back(2 * (j * n + i) + 1);
      }
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const TriangleRule& rule = triangle_rule(kLoadDegree);
  const auto nodes = mesh.nodes();
  OmegaQuadrature quad;
  for (int t : candidates) {
    const Triangle& tri = mesh.triangles()[t];
    const double area = signed_area(mesh, tri);
    const Point2 p0 = nodes[tri[0]];
    const Point2 p1 = nodes[tri[1]];
    const Point2 p2 = nodes[tri[2]];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      const Point2 x{l[0] * p0.x + l[1] * p1.x + l[2] * p2.x,
                     l[0] * p0.y + l[1] * p1.y + l[2] * p2.y};
      if (omega.contains(x)) quad.points.push_back({t, l, rule.weights[q] * area});
    }
  }
  return quad;
}

void add_omega_load(const Mesh& mesh, const OmegaQuadrature& quad, const FemField& w, double scale,
                    std::span<double> load) {
  check_field(mesh, w, "add_omega_load");
  for (const auto& p : quad.points) {
    const Triangle& tri = mesh.triangles()[p.triangle];
    const double value = p.lambda[0] * w.values[tri[0]] + p.lambda[1] * w.values[tri[1]] +
                         p.lambda[2] * w.values[tri[2]];
    const double c = scale * p.weight * value;
    for (int k = 0; k < 3; ++k) load[tri[k]] += c * p.lambda[k];
  }
}

void add_boundary_load(const Mesh& mesh, const RobinParameter& eta, const FemField& u, double scale,
                       std::span<double> load) {
  check_field(mesh, u, "add_boundary_load");
  const EdgeRule& rule = edge_rule(kEdgePoints);
  const double length = 1.0 / mesh.n_per_side();
  for (const BoundaryEdge& e : mesh.boundary_edges()) {
    const double ua = u.values[e.node_a];
    const double ub = u.values[e.node_b];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double s = rule.points[q];
      const double us = (1.0 - s) * ua + s * ub;
      const double c = scale * rule.weights[q] * length * eta.value(e.t_a + s * (e.t_b - e.t_a)) * us;
      load[e.node_a] += c * (1.0 - s);
      load[e.node_b] += c * s;
    }
  }
}

std::vector<double> boundary_moments(const Mesh& mesh, const BasisSpec& spec, const FemField& u,
                                     const FemField& z) {
  check_field(mesh, u, "boundary_moments");
  check_field(mesh, z, "boundary_moments");
  validate(spec);
  const EdgeRule& rule = edge_rule(kEdgePoints);
  const double length = 1.0 / mesh.n_per_side();
  std::vector<double> out(static_cast<std::size_t>(spec.size()), 0.0);
  for (const BoundaryEdge& e : mesh.boundary_edges()) {
    const double ua = u.values[e.node_a];
    const double ub = u.values[e.node_b];
    const double za = z.values[e.node_a];
    const double zb = z.values[e.node_b];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double s = rule.points[q];
      const double t = e.t_a + s * (e.t_b - e.t_a);
      const double w = rule.weights[q] * length * ((1.0 - s) * ua + s * ub) * ((1.0 - s) * za + s * zb);
      if (w == 0.0) continue;
      for (int j = 1; j <= spec.size(); ++j) out[j - 1] += w * eval_basis(spec, j, t);
    }
  }
  return out;
}

double galerkin_residual(const SparseMatrix& a, const FemField& u, std::span<const double> rhs) {
  const auto au = a.multiply(u.values);
  double worst = 0.0;
  for (std::size_t i = 0; i < au.size(); ++i) worst = std::max(worst, std::abs(au[i] - rhs[i]));
  return worst;
}

// ---------------------------------------------------------------------------
// RobinSystem

RobinSystem::RobinSystem(const Mesh& mesh, RobinParameter a, LinearSolverOptions options)
    : mesh_(&mesh),
      a_(std::move(a)),
      options_(options),
      matrix_(assemble_system(mesh, a_)) {
  factorize();
}

RobinSystem::RobinSystem(const Mesh& mesh, const SparseMatrix& stiffness, RobinParameter a,
                         LinearSolverOptions options)
    : mesh_(&mesh),
      a_(std::move(a)),
      options_(options),
      matrix_(assemble_system(mesh, stiffness, a_)) {
  factorize();
}

void RobinSystem::factorize() {
  if (options_.kind == LinearSolverKind::cholesky) {
    factor_ = std::make_shared<const CholeskyFactor>(matrix_);
  }
}

std::vector<double> RobinSystem::solve(std::span<const double> rhs) const {
  if (factor_) return factor_->solve(rhs);
  return cg_solve(matrix_, rhs, options_.cg_tol, options_.cg_max_iter, options_.cg_jacobi).x;
}

// ---------------------------------------------------------------------------
// The four variational problems

FemField solve_forward(const RobinSystem& system, const ProblemData& data) {
  const auto load = assemble_load_fg(system.mesh(), data);
  return as_field(system.mesh(), system.solve(load));
}

FemField solve_forward(const Mesh& mesh, const RobinParameter& a, const ProblemData& data) {
  return solve_forward(RobinSystem(mesh, a), data);
}

FemField solve_adjoint(const RobinSystem& system, const FemField& q, const FemField& u_h,
                       const SubdomainSpec& omega) {
  const Mesh& mesh = system.mesh();
  check_field(mesh, q, "solve_adjoint");
  check_field(mesh, u_h, "solve_adjoint");
  FemField mismatch = q;
  for (std::size_t i = 0; i < mismatch.values.size(); ++i) mismatch.values[i] -= u_h.values[i];
  std::vector<double> load(mesh.num_nodes(), 0.0);
  add_omega_load(mesh, omega_quadrature(mesh, omega), mismatch, -1.0, load);
  return as_field(mesh, system.solve(load));
}

FemField solve_adjoint(const Mesh& mesh, const RobinParameter& a, const FemField& q,
                       const FemField& u_h, const SubdomainSpec& omega) {
  return solve_adjoint(RobinSystem(mesh, a), q, u_h, omega);
}

FemField solve_u_dot(const RobinSystem& system, const RobinParameter& eta, const FemField& u_h) {
  const Mesh& mesh = system.mesh();
  std::vector<double> load(mesh.num_nodes(), 0.0);
  add_boundary_load(mesh, eta, u_h, -1.0, load);
  return as_field(mesh, system.solve(load));
}

FemField solve_u_dot(const Mesh& mesh, const RobinParameter& a, const RobinParameter& eta,
                     const FemField& u_h) {
  return solve_u_dot(RobinSystem(mesh, a), eta, u_h);
}

FemField solve_z_dot(const RobinSystem& system, const RobinParameter& eta, const FemField& u_dot,
                     const FemField& z_h, const SubdomainSpec& omega) {
  const Mesh& mesh = system.mesh();
  std::vector<double> load(mesh.num_nodes(), 0.0);
  add_omega_load(mesh, omega_quadrature(mesh, omega), u_dot, 1.0, load);
  add_boundary_load(mesh, eta, z_h, -1.0, load);
  return as_field(mesh, system.solve(load));
}

FemField solve_z_dot(const Mesh& mesh, const RobinParameter& a, const RobinParameter& eta,
                     const FemField& u_dot, const FemField& z_h, const SubdomainSpec& omega) {
  return solve_z_dot(RobinSystem(mesh, a), eta, u_dot, z_h, omega);
}

FemField restrict_fine_to_coarse(const FemField& fine, int n_coarse) {
  if (n_coarse < 1 || fine.n % n_coarse != 0 || fine.n / n_coarse < 2) {
    throw std::invalid_argument("restrict_fine_to_coarse: mesh " + std::to_string(fine.n) +
                                " is not a refinement of " + std::to_string(n_coarse) +
                                " by an integer factor >= 2");
  }
  const int k = fine.n / n_coarse;
  FemField coarse = FemField::zeros(n_coarse);
  for (int j = 0; j <= n_coarse; ++j) {
    for (int i = 0; i <= n_coarse; ++i) {
      coarse.values[static_cast<std::size_t>(j) * (n_coarse + 1) + i] = fine.at_node(k * i, k * j);
    }
  }
  return coarse;
}

}  // namespace robin
