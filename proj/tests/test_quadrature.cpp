#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include "robin/quadrature.hpp"

using namespace robin;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Integral of x^a y^b over the reference triangle divided by its area.
double reference_moment(int a, int b) {
  return 2.0 * factorial(a) * factorial(b) / factorial(a + b + 2);
}

double apply_rule(const TriangleRule& rule, int a, int b) {
  double s = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double x = rule.points[q][1];
    const double y = rule.points[q][2];
    s += rule.weights[q] * std::pow(x, a) * std::pow(y, b);
  }
  return s;
}

}  // namespace

TEST_CASE("triangle rules: weights and monomial exactness") {
  const TriangleRule& centroid = triangle_rule(1);
  REQUIRE(centroid.points.size() == 1);
  CHECK(centroid.points[0][0] == doctest::Approx(1.0 / 3.0));
  CHECK(centroid.weights[0] == 1.0);

  for (int degree : {1, 2, 4}) {
    const TriangleRule& rule = triangle_rule(degree);
    CHECK(rule.degree == degree);
    double sum = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
    for (const auto& p : rule.points) CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0));
    for (int a = 0; a <= degree; ++a) {
      for (int b = 0; a + b <= degree; ++b) {
        CAPTURE(degree);
        CAPTURE(a);
        CAPTURE(b);
        CHECK(std::abs(apply_rule(rule, a, b) - reference_moment(a, b)) < 1e-15);
      }
    }
  }
  // The 3-point rule is not exact beyond degree 2.
  CHECK(std::abs(apply_rule(triangle_rule(2), 3, 0) - reference_moment(3, 0)) > 1e-3);
  CHECK_THROWS_AS(triangle_rule(3), std::invalid_argument);
}

TEST_CASE("degree-4 rule integrates x^2 y^2 over the unit square") {
  const TriangleRule& rule = triangle_rule(4);
  const double tris[2][3][2] = {{{0, 0}, {1, 0}, {1, 1}}, {{0, 0}, {1, 1}, {0, 1}}};
  double total = 0.0;
  for (const auto& t : tris) {
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      const double x = l[0] * t[0][0] + l[1] * t[1][0] + l[2] * t[2][0];
      const double y = l[0] * t[0][1] + l[1] * t[1][1] + l[2] * t[2][1];
      total += 0.5 * rule.weights[q] * x * x * y * y;
    }
  }
  CHECK(std::abs(total - 1.0 / 9.0) < 1e-14);
}

TEST_CASE("Gauss-Legendre edge rules") {
  const EdgeRule& two = edge_rule(2);
  REQUIRE(two.points.size() == 2);
  CHECK(two.points[0] == doctest::Approx(0.5 - 0.5 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(two.points[1] == doctest::Approx(0.5 + 0.5 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(two.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(two.weights[1] == doctest::Approx(0.5).epsilon(1e-15));

  double cubic = 0.0;
  for (int q = 0; q < 2; ++q) cubic += two.weights[q] * std::pow(two.points[q], 3);
  CHECK(std::abs(cubic - 0.25) < 1e-16);

  for (int n = 2; n <= 5; ++n) {
    const EdgeRule& rule = edge_rule(n);
    double sum = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double s = 0.0;
      for (int q = 0; q < n; ++q) s += rule.weights[q] * std::pow(rule.points[q], deg);
      CHECK(std::abs(s - 1.0 / (deg + 1)) < 1e-15);
    }
    double s = 0.0;
    for (int q = 0; q < n; ++q) s += rule.weights[q] * std::pow(rule.points[q], 2 * n);
    CHECK(std::abs(s - 1.0 / (2 * n + 1)) > 1e-8);
  }
  CHECK_THROWS_AS(edge_rule(1), std::invalid_argument);
  CHECK_THROWS_AS(edge_rule(6), std::invalid_argument);
}

TEST_CASE("edge rules on a smooth integrand") {
  // Closed form 2/pi. The n-point remainder bound is
  // (n!)^4 / ((2n+1) ((2n)!)^3) * (pi/2)^(2n), about 2.1e-8 for n = 4.
  auto integrate = [](int n) {
    const EdgeRule& rule = edge_rule(n);
    double s = 0.0;
    for (int q = 0; q < n; ++q) s += rule.weights[q] * std::cos(0.5 * std::numbers::pi * rule.points[q]);
    return s;
  };
  CHECK(std::abs(integrate(4) - 2.0 / std::numbers::pi) < 2e-8);
  CHECK(std::abs(integrate(5) - 2.0 / std::numbers::pi) < 1e-10);
}
