#pragma once

#include <array>
#include <vector>

namespace robin {

/// Symmetric rule on the reference triangle. Points are barycentric, weights
/// are normalized to sum to one (multiply by the element area).
struct TriangleRule {
  int degree = 0;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on (0, 1), weights sum to one.
struct EdgeRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// degree in {1, 2, 4}: centroid, edge midpoints, 6-point degree-4 rule.
const TriangleRule& triangle_rule(int degree);

/// n_points in {2, 3, 4, 5}.
const EdgeRule& edge_rule(int n_points);

}  // namespace robin
