#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "robin/fem_robin.hpp"

using namespace robin;

namespace {

RobinParameter truth() {
  return RobinParameter({6, 6}, {10, 1, -0.5, 2, 1, -0.5}, {0.2, 1, -0.5, 2, 1, -0.5});
}

DenseMatrix to_dense(const SparseMatrix& a) {
  DenseMatrix d(a.size(), a.size());
  for (int r = 0; r < a.size(); ++r)
    for (int k = a.row_offsets()[r]; k < a.row_offsets()[r + 1]; ++k)
      d(r, a.column_indices()[k]) = a.values()[k];
  return d;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_diff(const FemField& a, const FemField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

FemField nodal(const Mesh& mesh, double (*fn)(Point2)) {
  FemField f = FemField::zeros(mesh.n_per_side());
  for (int i = 0; i < mesh.num_nodes(); ++i) f.values[i] = fn(mesh.nodes()[i]);
  return f;
}

SubdomainSpec single_disc() { return {{Disc{{0.5, 0.5}, 0.3}}}; }

}  // namespace

TEST_CASE("stiffness matrix") {
  const auto mesh = Mesh::unit_square(8);
  const auto k = assemble_stiffness(mesh);
  CHECK(k.asymmetry() == 0.0);
  const std::vector<double> ones(mesh.num_nodes(), 1.0);
  CHECK(max_abs(k.multiply(ones)) < 1e-12);
  for (double d : k.diagonal()) CHECK(d > 0.0);
}

TEST_CASE("Robin boundary mass") {
  const auto mesh = Mesh::unit_square(2);
  const auto k = assemble_stiffness(mesh);
  const auto a = assemble_system(mesh, RobinParameter::constant({1, 0}, 1.0));
  CHECK(a.asymmetry() == 0.0);
  double total = 0.0;
  for (int r = 0; r < a.size(); ++r)
    for (int c = 0; c < a.size(); ++c) total += a.at(r, c) - k.at(r, c);
  CHECK(total == doctest::Approx(4.0).epsilon(1e-14));

  // Interior nodes carry no boundary contribution.
  const int centre = mesh.node_index(1, 1);
  CHECK(a.at(centre, centre) == k.at(centre, centre));

  CHECK_THROWS_AS(assemble_system(mesh, RobinParameter::zero({1, 0})), std::invalid_argument);
  CHECK_THROWS_AS(assemble_system(mesh, RobinParameter({1, 1}, {1.0}, {1.0})),
                  std::invalid_argument);
}

TEST_CASE("load vector") {
  const auto mesh = Mesh::unit_square(8);
  const auto lf = assemble_load_fg(mesh, {SourceTerm::constant(-1.0), BoundaryDatum::zero()});
  double sum = 0.0;
  for (double v : lf) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));

  const auto lg = assemble_load_fg(mesh, {SourceTerm::zero(), BoundaryDatum::constant(1.0)});
  sum = 0.0;
  for (double v : lg) sum += v;
  CHECK(sum == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("problem data registry") {
  CHECK(SourceTerm::parse("zero").kind() == SourceTerm::Kind::zero);
  CHECK(SourceTerm::parse("paper")({0.5, 0.0}) == doctest::Approx(-5.0));
  CHECK(SourceTerm::parse("constant(2.5)")({0.1, 0.2}) == 2.5);
  CHECK(BoundaryDatum::parse("constant(-1)")(2.0) == -1.0);
  CHECK_THROWS_AS(SourceTerm::parse("sine"), std::invalid_argument);
  CHECK_THROWS_AS(BoundaryDatum::parse("paper"), std::invalid_argument);
  CHECK(ProblemData::paper().f.kind() == SourceTerm::Kind::paper);
}

TEST_CASE("subdomain") {
  const auto omega = SubdomainSpec::paper();
  CHECK(omega.contains({0.8, 0.8}));
  CHECK(omega.contains({0.45, 0.2}));
  CHECK_FALSE(omega.contains({0.5, 0.5}));
  CHECK_FALSE(omega.contains({0.86, 0.8}));
  CHECK_THROWS_AS(validate(SubdomainSpec{{Disc{{0.95, 0.5}, 0.1}}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(SubdomainSpec{{Disc{{0.5, 0.5}, -0.1}}}), std::invalid_argument);

  const auto mesh = Mesh::unit_square(256);
  const auto quad = omega_quadrature(mesh, omega);
  double area = 0.0;
  for (const auto& p : quad.points) area += p.weight;
  const double exact = std::numbers::pi * (0.05 * 0.05 + 0.1 * 0.1);
  CHECK(std::abs(area - exact) / exact < 0.02);
}

TEST_CASE("P1 field evaluation reproduces linear functions") {
  const auto mesh = Mesh::unit_square(5);
  const auto f = nodal(mesh, [](Point2 p) { return 1.0 + 2.0 * p.x - 3.0 * p.y; });
  for (double x : {0.0, 0.13, 0.5, 0.77, 1.0})
    for (double y : {0.0, 0.29, 0.61, 1.0})
      CHECK(f.evaluate({x, y}) == doctest::Approx(1.0 + 2.0 * x - 3.0 * y).epsilon(1e-13));
}

TEST_CASE("manufactured constant solution") {
  for (int n : {4, 16}) {
    const auto mesh = Mesh::unit_square(n);
    for (const auto& a : {RobinParameter::constant({1, 0}, 1.0), truth(),
                          RobinParameter({2, 1}, {3.0, 0.5}, {0.7})}) {
      const auto u = solve_forward(mesh, a, {SourceTerm::zero(), BoundaryDatum::robin(a)});
      for (double v : u.values) CHECK(std::abs(v - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("forward solve of the reference problem") {
  const auto mesh = Mesh::unit_square(64);
  const RobinSystem system(mesh, truth());
  const auto data = ProblemData::paper();
  const auto u = solve_forward(system, data);
  for (const auto& e : mesh.boundary_edges()) CHECK(u.values[e.node_a] > 0.0);

  const auto rhs = assemble_load_fg(mesh, data);
  CHECK(galerkin_residual(system.matrix(), u, rhs) < 1e-10 * max_abs(rhs));

  // The discrete energy stays bounded under refinement.
  auto energy = [&](int n) {
    const auto m = Mesh::unit_square(n);
    const RobinSystem s(m, truth());
    const auto uh = solve_forward(s, data);
    const auto au = s.matrix().multiply(uh.values);
    double e = 0.0;
    for (std::size_t i = 0; i < au.size(); ++i) e += au[i] * uh.values[i];
    return e;
  };
  const double e16 = energy(16), e32 = energy(32), e64 = energy(64);
  CHECK(std::abs(e64 - e32) < std::abs(e32 - e16));
  CHECK(e64 < 2.0 * e16);

  // Both linear solvers agree.
  LinearSolverOptions cg;
  cg.kind = LinearSolverKind::cg;
  const auto u_cg = solve_forward(RobinSystem(mesh, truth(), cg), data);
  CHECK(max_diff(u, u_cg) < 1e-8 * max_abs(u.values));
}

TEST_CASE("adjoint solve") {
  const auto mesh = Mesh::unit_square(4);
  const auto a = RobinParameter::constant({1, 0}, 2.0);
  const auto omega = single_disc();
  const auto data = ProblemData::paper();
  const auto u = solve_forward(mesh, a, data);

  SUBCASE("exact data gives zero adjoint") {
    const auto z = solve_adjoint(mesh, a, u, u, omega);
    for (double v : z.values) CHECK(v == 0.0);
  }
  SUBCASE("empty measurement region gives zero adjoint") {
    auto q = u;
    for (double& v : q.values) v += 1.0;
    const auto z = solve_adjoint(mesh, a, q, u, SubdomainSpec{{Disc{{0.5, 0.5}, 0.0}}});
    for (double v : z.values) CHECK(v == 0.0);
  }
  SUBCASE("dense oracle and sign") {
    auto q = u;
    for (double& v : q.values) v += 1.0;
    const auto z = solve_adjoint(mesh, a, q, u, omega);

    std::vector<double> rhs(mesh.num_nodes(), 0.0);
    const auto quad = omega_quadrature(mesh, omega);
    FemField diff = FemField::zeros(4);
    for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] = q.values[i] - u.values[i];
    add_omega_load(mesh, quad, diff, -1.0, rhs);
    const auto oracle = dense_solve(to_dense(assemble_system(mesh, a)), rhs);
    for (std::size_t i = 0; i < oracle.size(); ++i)
      CHECK(z.values[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
    CHECK(*std::max_element(z.values.begin(), z.values.end()) < 0.0);
  }
  SUBCASE("mesh mismatch") {
    CHECK_THROWS_AS(solve_adjoint(mesh, a, FemField::zeros(8), u, omega), std::invalid_argument);
  }
}

TEST_CASE("parameter derivatives of the state") {
  const auto mesh = Mesh::unit_square(16);
  const auto a = truth();
  const auto data = ProblemData::paper();
  const auto omega = SubdomainSpec::paper();
  const RobinSystem system(mesh, a);
  const auto u = solve_forward(system, data);
  auto q = u;
  for (std::size_t i = 0; i < q.values.size(); ++i)
    q.values[i] += 0.1 * std::sin(3.0 * static_cast<double>(i));
  const auto z = solve_adjoint(system, q, u, omega);

  const auto eta = RobinParameter({6, 6}, {0.3, 0, 0.2, 0, 0, 0}, {0, 0.5, 0, 0, 0, -0.1});
  const auto ud = solve_u_dot(system, eta, u);
  const auto zd = solve_z_dot(system, eta, ud, z, omega);

  auto fd_error = [&](double s) {
    const auto as = a + s * eta;
    const auto us = solve_forward(mesh, as, data);
    const auto zs = solve_adjoint(mesh, as, q, us, omega);
    double eu = 0.0, ez = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      eu = std::max(eu, std::abs((us.values[i] - u.values[i]) / s - ud.values[i]));
      ez = std::max(ez, std::abs((zs.values[i] - z.values[i]) / s - zd.values[i]));
    }
    return std::pair{eu, ez};
  };
  const auto [eu1, ez1] = fd_error(1e-3);
  const auto [eu2, ez2] = fd_error(5e-4);
  CHECK(eu1 < 1e-3 * max_abs(ud.values) * 10.0);
  CHECK(ez1 < 1e-3 * max_abs(zd.values) * 10.0);
  // First-order finite differences halve their error with the step.
  CHECK(eu1 / eu2 == doctest::Approx(2.0).epsilon(0.05));
  CHECK(ez1 / ez2 == doctest::Approx(2.0).epsilon(0.05));

  // Linearity in eta.
  const auto eta2 = RobinParameter::basis_mode({6, 6}, 9);
  const auto sum = solve_u_dot(system, eta + eta2, u);
  const auto part = solve_u_dot(system, eta2, u);
  for (std::size_t i = 0; i < sum.values.size(); ++i)
    CHECK(std::abs(sum.values[i] - ud.values[i] - part.values[i]) < 1e-12 * max_abs(sum.values));
}

TEST_CASE("fine-to-coarse restriction") {
  const auto fine = nodal(Mesh::unit_square(8), [](Point2 p) { return p.x + 2.0 * p.y * p.y; });
  const auto coarse = restrict_fine_to_coarse(fine, 4);
  REQUIRE(coarse.n == 4);
  for (int j = 0; j <= 4; ++j)
    for (int i = 0; i <= 4; ++i) CHECK(coarse.at_node(i, j) == fine.at_node(2 * i, 2 * j));
  CHECK_THROWS_AS(restrict_fine_to_coarse(fine, 3), std::invalid_argument);
  CHECK_THROWS_AS(restrict_fine_to_coarse(fine, 8), std::invalid_argument);
}

TEST_CASE("boundary moments") {
  const auto mesh = Mesh::unit_square(8);
  FemField one = FemField::zeros(8);
  std::fill(one.values.begin(), one.values.end(), 1.0);
  const auto m = boundary_moments(mesh, {2, 1}, one, one);
  REQUIRE(m.size() == 3);
  CHECK(m[0] == doctest::Approx(2.0).epsilon(1e-14));  // int 1/2 over length 4
  CHECK(std::abs(m[1]) < 1e-14);
  CHECK(std::abs(m[2]) < 1e-14);
}
