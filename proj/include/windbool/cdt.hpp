#pragma once

#include <array>
#include <utility>
#include <vector>

#include "windbool/exact.hpp"

namespace windbool::cdt {

/// A planar straight-line graph inside one triangle, in exact coordinates.
/// Points live in 3D on a common plane and are triangulated in the plane's
/// (u, v) projection.
struct PlanarInput {
  std::vector<exact::ExactPoint> points;
  /// Indices of the enclosing triangle's corners, counter-clockwise in (u, v).
  std::array<int, 3> corners{0, 1, 2};
  /// Constraint edges. Must not cross each other and must not contain a
  /// point in their relative interior.
  std::vector<std::pair<int, int>> constraints;
  int u = 0;
  int v = 1;
};

/// Constrained Delaunay triangulation of the input, counter-clockwise in
/// (u, v). Cocircular ties are broken by symbolic perturbation of the lifted
/// points ranked by lexicographic 3D position, so the triangulation of a
/// region fenced by constraints depends only on the points and constraints
/// inside it (and is invariant under swapping u and v).
std::vector<std::array<int, 3>> triangulate(const PlanarInput& input);

/// Perturbed in-circle predicate: true when d is inside the circle through
/// counter-clockwise (a, b, c). Exposed for testing.
bool in_circle(const exact::ExactPoint& a, const exact::ExactPoint& b, const exact::ExactPoint& c,
               const exact::ExactPoint& d, int u, int v);

}  // namespace windbool::cdt
