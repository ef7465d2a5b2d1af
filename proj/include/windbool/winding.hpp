#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "windbool/mesh.hpp"

namespace windbool {

/// Generalized winding number at a point, in units of full windings.
/// `on_surface` is set when the point lies exactly on the mesh; `value` is
/// then meaningless.
struct WindingValue {
  double value = 0.0;
  bool on_surface = false;
};

/// Signed solid angle subtended by triangle (a, b, c) at p, via the
/// Van Oosterom-Strackee arctangent form. Empty when p coincides with a
/// corner or lies in the closed triangle.
std::optional<double> solid_angle(const Point3& p, const Point3& a, const Point3& b, const Point3& c);

/// Sum of solid angles over all faces / 4pi, with compensated summation.
WindingValue winding_number(const TriMesh& mesh, const Point3& p);

/// Same as winding_number with a plain running sum; kept for round-off comparisons.
WindingValue winding_number_naive(const TriMesh& mesh, const Point3& p);

/// Bounding volume hierarchy over mesh faces, used for exact batch winding
/// evaluation and for box-overlap broad phases.
///
/// Besides its box, each node stores the oriented boundary of its face patch
/// (directed edges whose reverse is not also in the patch, by welded vertex
/// position). Closing that boundary with a fan gives a closed surface inside
/// the node's box, so for points outside the box the patch winding equals the
/// winding of the fan. This is an identity, not an approximation.
class WindingBvh {
 public:
  struct Node {
    Box3 box;
    std::uint32_t first = 0;  // range into face_order()
    std::uint32_t count = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t cap_first = 0;  // range into cap_triangles()
    std::uint32_t cap_count = 0;

    static constexpr std::uint32_t kNoCap = 0xFFFFFFFFu;

    bool is_leaf() const { return left < 0; }
    /// False when the patch boundary is not smaller than the patch itself.
    bool has_cap() const { return cap_first != kNoCap; }
  };

  /// Fan triangle closing part of a node's boundary, in welded coordinates.
  struct CapTriangle {
    Point3 a, b, apex;
  };

  static constexpr std::uint32_t kLeafSize = 8;

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<std::uint32_t>& face_order() const { return face_order_; }
  const std::vector<CapTriangle>& cap_triangles() const { return caps_; }
  std::size_t face_count() const { return face_order_.size(); }
  const Node& root() const { return nodes_.front(); }

  /// Box of a single face.
  static Box3 face_box(const TriMesh& mesh, std::size_t face);

 private:
  friend WindingBvh build_bvh(const TriMesh& mesh);

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> face_order_;
  std::vector<CapTriangle> caps_;
};

/// Median split on the longest box axis. Throws std::invalid_argument on an
/// empty mesh.
WindingBvh build_bvh(const TriMesh& mesh);

/// Number of worker threads when the caller passes 0: WIND_BOOL_THREADS if set
/// to a positive integer, otherwise the hardware concurrency.
unsigned default_thread_count();

/// Evaluates winding numbers for many points. Results are bitwise independent
/// of `threads` (0 selects default_thread_count()).
std::vector<WindingValue> winding_number_batch(const TriMesh& mesh, const WindingBvh& bvh,
                                               std::span<const Point3> points, unsigned threads = 0);

/// Single-point evaluation through the hierarchy.
WindingValue winding_number(const TriMesh& mesh, const WindingBvh& bvh, const Point3& p);

/// All face pairs (fa, fb) whose boxes overlap (inclusive), sorted.
std::vector<std::pair<std::uint32_t, std::uint32_t>> overlapping_pairs(const TriMesh& a, const WindingBvh& bvh_a,
                                                                       const TriMesh& b, const WindingBvh& bvh_b);

}  // namespace windbool
