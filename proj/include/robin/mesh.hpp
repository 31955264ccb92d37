#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace robin {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Boundary segment between two lattice nodes with the arc-length parameter
/// of both endpoints. The last segment ends at t = 4.
struct BoundaryEdge {
  int node_a = 0;
  int node_b = 0;
  double t_a = 0.0;
  double t_b = 0.0;
};

using Triangle = std::array<int, 3>;

/// Structured triangulation of the unit square with N subdivisions per side.
///
/// Nodes are stored row-major, node (i, j) at index j * (N + 1) + i with
/// coordinates (i / N, j / N). Every lattice cell is split along the diagonal
/// from (i, j) to (i + 1, j + 1); both triangles are counterclockwise.
/// Boundary edges are listed in the order of the arc-length parametrization,
/// starting at the bottom-left corner and running counterclockwise.
class Mesh {
 public:
  static Mesh unit_square(int n_per_side);

  int n_per_side() const { return n_; }
  std::size_t num_nodes() const { return nodes_.size(); }
  double h() const;

  std::span<const Point2> nodes() const { return nodes_; }
  std::span<const Triangle> triangles() const { return triangles_; }
  std::span<const BoundaryEdge> boundary_edges() const { return boundary_edges_; }

  int node_index(int i, int j) const { return j * (n_ + 1) + i; }

  /// Index of the triangle containing p (points on shared edges are assigned
  /// to one of the neighbours). p is clamped to the closed square.
  int locate(Point2 p) const;

 private:
  Mesh() = default;

  int n_ = 0;
  std::vector<Point2> nodes_;
  std::vector<Triangle> triangles_;
  std::vector<BoundaryEdge> boundary_edges_;
};

double signed_area(const Mesh& mesh, const Triangle& tri);

/// Counterclockwise arc-length parametrization of the boundary of [0,1]^2,
/// starting at the origin. t is reduced modulo 4.
Point2 boundary_param(double t);

/// Inverse of boundary_param. Corners map to the smaller of the two
/// incident-edge parameters, the origin maps to 0. Throws
/// std::invalid_argument for points farther than 1e-12 from the boundary.
double boundary_inverse_param(Point2 p);

}  // namespace robin
