#pragma once

// Test-only oracles and corpus builders. Nothing here calls into the
// corefinement or winding code paths it is used to check.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "windbool/boolean.hpp"
#include "windbool/corefine.hpp"
#include "windbool/mesh.hpp"

namespace windbool::testing {

/// Solid angle by L'Huilier's spherical-excess formula, signed by orientation.
double solid_angle_excess(const Point3& p, const Point3& a, const Point3& b, const Point3& c);

/// Plain sum of excess solid angles / 4pi.
double winding_excess(const TriMesh& mesh, const Point3& p);

/// Number of directed edges without a matching opposite edge, by brute force
/// over all face pairs.
std::size_t count_unmatched_edges(const TriMesh& mesh);

/// Integer winding of a closed mesh by signed ray crossings (Moller-Trumbore),
/// retrying other directions when a ray grazes an edge. Independent of the
/// solid-angle code.
int ray_crossing_winding(const TriMesh& mesh, const Point3& p);

double point_triangle_distance(const Point3& p, const Point3& a, const Point3& b, const Point3& c);
double distance_to_mesh(const TriMesh& mesh, const Point3& p);

/// Halton point in [0,1)^3 for index i (bases 2, 3, 5).
Point3 halton(std::size_t i);

struct BoxSpec {
  Point3 min, max;
  double volume() const;
};

double box_overlap_volume(const BoxSpec& a, const BoxSpec& b);

struct CubePairCase {
  std::string name;
  BoxSpec a, b;
};

/// Axis-aligned overlap configurations: corner, edge, face, tunnel,
/// containment both ways, disjoint, shared face, partial face contact,
/// identical, coplanar overlap, edge contact.
std::vector<CubePairCase> cube_corpus();

/// Volume of op(a, b) for axis-aligned boxes.
double analytic_volume(const BoxSpec& a, const BoxSpec& b, BoolOp op);

/// Pairs of refined faces whose contact is not through shared vertices or a
/// shared edge and that are not a registered coplanar duplicate. Uses an
/// exact segment/triangle narrow phase written independently of corefine.
std::size_t residual_intersections(const RefinedPair& pair);

/// Points whose convex hull is the intersection of two closed triangles:
/// every edge of each clipped against the other.
std::vector<exact::ExactPoint> contact_points(const std::array<exact::ExactPoint, 3>& a,
                                              const std::array<exact::ExactPoint, 3>& b);

/// Largest relative difference between an original face's area and the sum
/// of its refined pieces.
double worst_area_defect(const TriMesh& original, const TriMesh& refined);

/// Set-algebra membership for a boolean op.
bool combine(bool in_a, bool in_b, BoolOp op);

}  // namespace windbool::testing
