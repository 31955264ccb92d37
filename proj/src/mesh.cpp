#include "robin/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace robin {

namespace {

constexpr double kBoundaryTol = 1e-12;

}  // namespace

Mesh Mesh::unit_square(int n_per_side) {
  if (n_per_side < 2) {
    throw std::invalid_argument("unit_square: n_per_side must be >= 2, got " +
                                std::to_string(n_per_side));
  }
  const int n = n_per_side;
  Mesh mesh;
  mesh.n_ = n;

  const auto side = static_cast<std::size_t>(n + 1);
  mesh.nodes_.reserve(side * side);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      // i / N evaluated directly so nested meshes share bitwise coordinates.
      mesh.nodes_.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
  }

  mesh.triangles_.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = mesh.node_index(i, j);
      const int v10 = mesh.node_index(i + 1, j);
      const int v11 = mesh.node_index(i + 1, j + 1);
      const int v01 = mesh.node_index(i, j + 1);
      mesh.triangles_.push_back({v00, v10, v11});
      mesh.triangles_.push_back({v00, v11, v01});
    }
  }

  mesh.boundary_edges_.reserve(4 * static_cast<std::size_t>(n));
  auto param = [n](int side_index, int k) {
    return side_index + static_cast<double>(k) / n;
  };
  for (int k = 0; k < n; ++k) {  // bottom, left to right
    mesh.boundary_edges_.push_back(
        {mesh.node_index(k, 0), mesh.node_index(k + 1, 0), param(0, k), param(0, k + 1)});
  }
  for (int k = 0; k < n; ++k) {  // right, bottom to top
    mesh.boundary_edges_.push_back(
        {mesh.node_index(n, k), mesh.node_index(n, k + 1), param(1, k), param(1, k + 1)});
  }
  for (int k = 0; k < n; ++k) {  // top, right to left
    mesh.boundary_edges_.push_back({mesh.node_index(n - k, n), mesh.node_index(n - k - 1, n),
                                    param(2, k), param(2, k + 1)});
  }
  for (int k = 0; k < n; ++k) {  // left, top to bottom
    mesh.boundary_edges_.push_back({mesh.node_index(0, n - k), mesh.node_index(0, n - k - 1),
                                    param(3, k), param(3, k + 1)});
  }
  return mesh;
}

double Mesh::h() const { return std::sqrt(2.0) / n_; }

int Mesh::locate(Point2 p) const {
  const double x = std::clamp(p.x, 0.0, 1.0) * n_;
  const double y = std::clamp(p.y, 0.0, 1.0) * n_;
  const int i = std::min(static_cast<int>(std::floor(x)), n_ - 1);
  const int j = std::min(static_cast<int>(std::floor(y)), n_ - 1);
  const int cell = j * n_ + i;
  // Lower triangle (v00, v10, v11) lies below the diagonal.
  return (x - i >= y - j) ? 2 * cell : 2 * cell + 1;
}

double signed_area(const Mesh& mesh, const Triangle& tri) {
  const auto nodes = mesh.nodes();
  const Point2 a = nodes[tri[0]];
  const Point2 b = nodes[tri[1]];
  const Point2 c = nodes[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Point2 boundary_param(double t) {
  double s = std::fmod(t, 4.0);
  if (s < 0.0) s += 4.0;
  if (s < 1.0) return {s, 0.0};
  if (s < 2.0) return {1.0, s - 1.0};
  if (s < 3.0) return {3.0 - s, 1.0};
  return {0.0, 4.0 - s};
}

double boundary_inverse_param(Point2 p) {
  const bool in_box = p.x >= -kBoundaryTol && p.x <= 1.0 + kBoundaryTol &&
                      p.y >= -kBoundaryTol && p.y <= 1.0 + kBoundaryTol;
  if (in_box) {
    const double x = std::clamp(p.x, 0.0, 1.0);
    const double y = std::clamp(p.y, 0.0, 1.0);
    if (std::abs(p.y) <= kBoundaryTol) return x;
    if (std::abs(p.x - 1.0) <= kBoundaryTol) return 1.0 + y;
    if (std::abs(p.y - 1.0) <= kBoundaryTol) return 3.0 - x;
    if (std::abs(p.x) <= kBoundaryTol) {
      const double t = 4.0 - y;
      return t >= 4.0 ? 0.0 : t;
    }
  }
  throw std::invalid_argument("boundary_inverse_param: point (" + std::to_string(p.x) + ", " +
                              std::to_string(p.y) + ") is not on the boundary");
}

}  // namespace robin
