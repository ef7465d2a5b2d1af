#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "windbool/exact.hpp"
#include "windbool/mesh.hpp"

namespace windbool {

/// Where an intersection endpoint sits on one of the two triangles.
enum class FeatureKind : std::uint8_t { Interior, Edge, Vertex };

struct IntersectionSegment {
  std::array<exact::ExactPoint, 2> endpoints;
  std::array<Point3, 2> rounded;
  /// [endpoint][0 = first triangle, 1 = second triangle]
  std::array<std::array<FeatureKind, 2>, 2> features{};
  /// Single-point contact (both endpoints equal).
  bool degenerate = false;
};

enum class TriTriKind : std::uint8_t { None, Segment, Coplanar, DegenerateInput };

struct TriTriResult {
  TriTriKind kind = TriTriKind::None;
  std::optional<IntersectionSegment> segment;
  /// Coplanar contact polygon in exact coordinates, convex, without repeated
  /// or collinear vertices. Two vertices when the triangles only touch along
  /// a segment; three to six for an overlap with area.
  std::vector<exact::ExactPoint> overlap;

  bool has_area() const { return kind == TriTriKind::Coplanar && overlap.size() >= 3; }
};

/// Exact triangle-triangle intersection. Symmetric in the two triangles up
/// to endpoint order.
TriTriResult tri_tri_intersect(const std::array<exact::ExactPoint, 3>& a, const std::array<exact::ExactPoint, 3>& b);
TriTriResult tri_tri_intersect(const Point3& a0, const Point3& a1, const Point3& a2, const Point3& b0,
                               const Point3& b1, const Point3& b2);

/// Face pairs whose bounding boxes overlap; a superset of intersecting pairs.
std::vector<std::pair<std::uint32_t, std::uint32_t>> candidate_pairs(const TriMesh& a, const TriMesh& b);

struct CoplanarPair {
  std::uint32_t face_a = 0;
  std::uint32_t face_b = 0;
  bool same_orientation = false;

  friend bool operator==(const CoplanarPair&, const CoplanarPair&) = default;
};

struct CorefineDiagnostics {
  std::size_t candidate_pairs = 0;
  std::size_t intersecting_pairs = 0;
  std::size_t coplanar_overlaps = 0;
  std::size_t skipped_degenerate_pairs = 0;
  std::size_t new_vertices = 0;
  std::size_t refined_faces_a = 0;
  std::size_t refined_faces_b = 0;
};

/// Two mutually refined meshes. Face provenance of refined_a / refined_b
/// gives each refined face's original face; exact_a / exact_b hold the exact
/// position of every refined vertex before rounding.
struct RefinedPair {
  TriMesh refined_a;
  TriMesh refined_b;
  std::vector<exact::ExactPoint> exact_a;
  std::vector<exact::ExactPoint> exact_b;
  std::vector<CoplanarPair> coplanar_pairs;
  CorefineDiagnostics diagnostics;
};

/// Splits every face of `a` and `b` along their mutual intersections so that
/// all contact between the results is through shared vertices and edges or
/// through identical coplanar faces. Self-intersections within one input are
/// left alone.
RefinedPair corefine(const TriMesh& a, const TriMesh& b);

/// Fills coplanar_pairs with every (face_a, face_b) having identical exact
/// vertex sets.
RefinedPair detect_coplanar_duplicates(RefinedPair pair);

}  // namespace windbool
