#include "robin/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace robin {

namespace {

TriangleRule make_triangle_rule(int degree) {
  TriangleRule rule;
  rule.degree = degree;
  switch (degree) {
    case 1:
      rule.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
      rule.weights = {1.0};
      break;
    case 2:
      rule.points = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
      rule.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
      break;
    case 4: {
      const double a1 = 0.4459484909159648863183292538830519883991;
      const double w1 = 0.2233815896780114656950070084331228043703;
      const double a2 = 0.09157621350977074345957146340220150785433;
      const double w2 = 0.1099517436553218676383263249002105289631;
      const double b1 = 1.0 - 2.0 * a1;
      const double b2 = 1.0 - 2.0 * a2;
      rule.points = {{a1, a1, b1}, {a1, b1, a1}, {b1, a1, a1},
                     {a2, a2, b2}, {a2, b2, a2}, {b2, a2, a2}};
      rule.weights = {w1, w1, w1, w2, w2, w2};
      break;
    }
    default:
      throw std::invalid_argument("triangle_rule: unsupported degree " + std::to_string(degree));
  }
  return rule;
}

// Newton iteration on the Legendre polynomial, then mapped from (-1, 1) to (0, 1).
EdgeRule make_edge_rule(int n) {
  if (n < 2 || n > 5) {
    throw std::invalid_argument("edge_rule: unsupported point count " + std::to_string(n));
  }
  EdgeRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Ascending order on (0, 1).
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const TriangleRule& triangle_rule(int degree) {
  static const TriangleRule rule1 = make_triangle_rule(1);
  static const TriangleRule rule2 = make_triangle_rule(2);
  static const TriangleRule rule4 = make_triangle_rule(4);
  switch (degree) {
    case 1: return rule1;
    case 2: return rule2;
    case 4: return rule4;
    default:
      throw std::invalid_argument("triangle_rule: unsupported degree " + std::to_string(degree));
  }
}

const EdgeRule& edge_rule(int n_points) {
  static const EdgeRule rules[4] = {make_edge_rule(2), make_edge_rule(3), make_edge_rule(4),
                                    make_edge_rule(5)};
  if (n_points < 2 || n_points > 5) {
    throw std::invalid_argument("edge_rule: unsupported point count " + std::to_string(n_points));
  }
  return rules[n_points - 2];
}

}  // namespace robin
