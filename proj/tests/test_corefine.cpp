#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "support.hpp"
#include "windbool/corefine.hpp"
#include "windbool/shapes.hpp"

using namespace windbool;
using exact::ExactPoint;

namespace {

std::array<ExactPoint, 3> tri(Point3 a, Point3 b, Point3 c) { return {ExactPoint(a), ExactPoint(b), ExactPoint(c)}; }

bool on_plane(const std::array<ExactPoint, 3>& t, const ExactPoint& p) {
  return exact::orient3d(t[0], t[1], t[2], p) == 0;
}

std::set<ExactPoint> new_points(const RefinedPair& r, const TriMesh& a, const TriMesh& b) {
  std::set<ExactPoint> original;
  for (const Point3& p : a.vertices()) original.insert(ExactPoint(p));
  for (const Point3& p : b.vertices()) original.insert(ExactPoint(p));
  std::set<ExactPoint> out;
  for (const auto* list : {&r.exact_a, &r.exact_b}) {
    for (const ExactPoint& p : *list) {
      if (!original.count(p)) out.insert(p);
    }
  }
  return out;
}

void check_plane_fidelity(const TriMesh& original, const TriMesh& refined, const std::vector<ExactPoint>& pos) {
  REQUIRE(refined.provenance().size() == refined.face_count());
  REQUIRE(pos.size() == refined.vertex_count());
  for (std::size_t f = 0; f < refined.face_count(); ++f) {
    const std::uint32_t g = refined.provenance()[f].original_face;
    REQUIRE(g < original.face_count());
    const auto [a, b, c] = original.corners(g);
    const auto t = tri(a, b, c);
    const Triangle& r = refined.faces()[f];
    CHECK(on_plane(t, pos[r.v0]));
    CHECK(on_plane(t, pos[r.v1]));
    CHECK(on_plane(t, pos[r.v2]));
    CHECK(exact::round_to_double(pos[r.v0]) == refined.vertices()[r.v0]);
  }
}

TriMesh box(Point3 lo, Point3 hi) { return shapes::box(lo, hi); }

}  // namespace

TEST_CASE("tri-tri: parallel planes do not intersect") {
  const auto r = tri_tri_intersect(Point3{0, 0, 0}, Point3{2, 0, 0}, Point3{0, 2, 0}, Point3{0, 0, 1},
                                   Point3{2, 0, 1}, Point3{0, 2, 1});
  CHECK(r.kind == TriTriKind::None);
}

TEST_CASE("tri-tri: crossing pair gives a segment on both planes") {
  const auto a = tri({-1, -1, 0}, {1, -1, 0}, {0, 1, 0});
  const auto b = tri({0, -2, -1}, {0, 2, -1}, {0, 0, 1});
  const auto r = tri_tri_intersect(a, b);
  REQUIRE(r.kind == TriTriKind::Segment);
  REQUIRE(r.segment);
  CHECK_FALSE(r.segment->degenerate);
  for (const ExactPoint& p : r.segment->endpoints) {
    CHECK(on_plane(a, p));
    CHECK(on_plane(b, p));
    CHECK(p[2] == 0);
  }
  const auto swapped = tri_tri_intersect(b, a);
  REQUIRE(swapped.segment);
  CHECK(swapped.segment->endpoints == r.segment->endpoints);
}

TEST_CASE("tri-tri: identical triangles overlap in the whole triangle") {
  const auto a = tri({0, 0, 0}, {1, 0, 0}, {0, 1, 0});
  const auto r = tri_tri_intersect(a, a);
  REQUIRE(r.kind == TriTriKind::Coplanar);
  CHECK(r.has_area());
  std::vector<ExactPoint> expected(a.begin(), a.end()), got = r.overlap;
  std::sort(expected.begin(), expected.end());
  std::sort(got.begin(), got.end());
  CHECK(got == expected);
}

TEST_CASE("tri-tri: touching contacts") {
  // Shared vertex only, non-coplanar.
  auto r = tri_tri_intersect(Point3{0, 0, 0}, Point3{1, 0, 0}, Point3{0, 1, 0}, Point3{0, 0, 0}, Point3{-1, 0, 1},
                             Point3{0, -1, 1});
  REQUIRE(r.kind == TriTriKind::Segment);
  CHECK(r.segment->degenerate);
  // Coplanar, sharing an edge from opposite sides: contact without area.
  r = tri_tri_intersect(Point3{0, 0, 0}, Point3{1, 0, 0}, Point3{0, 1, 0}, Point3{1, 0, 0}, Point3{0, 0, 0},
                        Point3{0, -1, 0});
  CHECK(r.kind == TriTriKind::Coplanar);
  CHECK_FALSE(r.has_area());
  CHECK(r.overlap.size() == 2);
  // Degenerate input.
  r = tri_tri_intersect(Point3{0, 0, 1}, Point3{0, 0, 2}, Point3{0, 0, 3}, Point3{0, 0, 0}, Point3{1, 0, 0},
                        Point3{0, 1, 0});
  CHECK(r.kind == TriTriKind::DegenerateInput);
}

TEST_CASE("tri-tri agrees with an independent edge-clipping oracle") {
  std::mt19937 rng(43);
  std::uniform_int_distribution<int> grid(-3, 3);
  std::uniform_real_distribution<double> real(-1, 1);
  int segments = 0, coplanar = 0;
  for (int i = 0; i < 4000; ++i) {
    std::array<Point3, 6> p;
    for (auto& q : p) {
      // Small integer grid forces many coplanar and touching cases.
      q = i % 2 ? Point3{double(grid(rng)), double(grid(rng)), double(grid(rng))}
                : Point3{real(rng), real(rng), real(rng)};
    }
    if (i % 4 == 0) {
      for (int k = 3; k < 6; ++k) p[k].z = 0, p[k - 3].z = 0;
    }
    const auto a = tri(p[0], p[1], p[2]), b = tri(p[3], p[4], p[5]);
    if (exact::collinear(a[0], a[1], a[2]) || exact::collinear(b[0], b[1], b[2])) continue;
    const auto r = tri_tri_intersect(a, b);
    const auto oracle = testing::contact_points(a, b);
    auto in_oracle = [&](const ExactPoint& x) { return std::binary_search(oracle.begin(), oracle.end(), x); };
    switch (r.kind) {
      case TriTriKind::None:
        CHECK(oracle.empty());
        break;
      case TriTriKind::Segment:
        ++segments;
        REQUIRE(r.segment);
        CHECK(in_oracle(r.segment->endpoints[0]));
        CHECK(in_oracle(r.segment->endpoints[1]));
        for (const ExactPoint& x : oracle) {
          CHECK(exact::on_closed_segment(x, r.segment->endpoints[0], r.segment->endpoints[1]));
        }
        break;
      case TriTriKind::Coplanar:
        ++coplanar;
        CHECK_FALSE(r.overlap.empty());
        for (const ExactPoint& x : r.overlap) CHECK(in_oracle(x));
        break;
      case TriTriKind::DegenerateInput:
        FAIL("unexpected degenerate input");
    }
    // Symmetry.
    const auto s = tri_tri_intersect(b, a);
    CHECK(s.kind == r.kind);
    if (r.segment && s.segment) CHECK(s.segment->endpoints == r.segment->endpoints);
  }
  CHECK(segments > 100);
  CHECK(coplanar > 50);
}

TEST_CASE("candidate pairs") {
  CHECK(candidate_pairs(box({0, 0, 0}, {1, 1, 1}), box({2, 2, 2}, {3, 3, 3})).empty());
  CHECK(candidate_pairs(box({0, 0, 0}, {1, 1, 1}), TriMesh({}, {})).empty());

  const TriMesh cube = box({0, 0, 0}, {1, 1, 1});
  const auto same = candidate_pairs(cube, cube);
  for (std::uint32_t f = 0; f < cube.face_count(); ++f) {
    CHECK(std::count(same.begin(), same.end(), std::pair<std::uint32_t, std::uint32_t>{f, f}) == 1);
  }

  const TriMesh a = shapes::icosphere(2);
  const TriMesh b = shapes::icosphere(2, {0.7, 0.2, 0.1}, 0.8);
  const auto pairs = candidate_pairs(a, b);
  const std::set<std::pair<std::uint32_t, std::uint32_t>> found(pairs.begin(), pairs.end());
  std::size_t intersecting = 0;
  for (std::uint32_t i = 0; i < a.face_count(); ++i) {
    for (std::uint32_t j = 0; j < b.face_count(); ++j) {
      const auto [a0, a1, a2] = a.corners(i);
      const auto [b0, b1, b2] = b.corners(j);
      if (testing::contact_points(tri(a0, a1, a2), tri(b0, b1, b2)).empty()) continue;
      ++intersecting;
      CHECK(found.count({i, j}) == 1);
    }
  }
  CHECK(intersecting > 0);
}

TEST_CASE("corefine of disjoint cubes is a no-op") {
  const TriMesh a = box({0, 0, 0}, {1, 1, 1});
  const TriMesh b = box({2, 2, 2}, {3, 3, 3});
  const RefinedPair r = corefine(a, b);
  CHECK(r.refined_a.vertices() == a.vertices());
  CHECK(r.refined_a.faces() == a.faces());
  CHECK(r.refined_b.vertices() == b.vertices());
  CHECK(r.refined_b.faces() == b.faces());
  CHECK(r.coplanar_pairs.empty());
}

TEST_CASE("corefine of a corner overlap") {
  const TriMesh a = box({0, 0, 0}, {1, 1, 1});
  const TriMesh b = box({0.5, 0.5, 0.5}, {1.5, 1.5, 1.5});
  const RefinedPair r = corefine(a, b);
  CHECK(r.refined_a.face_count() > a.face_count());
  CHECK(r.refined_b.face_count() > b.face_count());
  CHECK(r.coplanar_pairs.empty());
  CHECK(testing::residual_intersections(r) == 0);
  CHECK(testing::worst_area_defect(a, r.refined_a) <= 1e-9);
  CHECK(testing::worst_area_defect(b, r.refined_b) <= 1e-9);
  check_plane_fidelity(a, r.refined_a, r.exact_a);
  check_plane_fidelity(b, r.refined_b, r.exact_b);
  CHECK(audit(r.refined_a).is_closed);
  CHECK(audit(r.refined_b).is_closed);
  // The three intersection rectangles meet A's boundary in these points.
  const auto fresh = new_points(r, a, b);
  CHECK(fresh.count(ExactPoint(Point3{1, 1, 0.5})) == 1);
  CHECK(fresh.count(ExactPoint(Point3{0.5, 1, 1})) == 1);
  CHECK(fresh.count(ExactPoint(Point3{1, 0.5, 1})) == 1);
}

TEST_CASE("corefine of identical cubes pairs every face") {
  const TriMesh a = box({0, 0, 0}, {1, 1, 1});
  const RefinedPair r = corefine(a, a);
  CHECK(r.coplanar_pairs.size() == r.refined_a.face_count());
  CHECK(r.refined_a.face_count() == r.refined_b.face_count());
  for (const CoplanarPair& cp : r.coplanar_pairs) CHECK(cp.same_orientation);
  CHECK(testing::residual_intersections(r) == 0);
}

TEST_CASE("corefine of externally face-sharing cubes pairs the shared face with opposite orientation") {
  const TriMesh a = box({0, 0, 0}, {1, 1, 1});
  const TriMesh b = box({1, 0, 0}, {2, 1, 1});
  const RefinedPair r = corefine(a, b);
  REQUIRE_FALSE(r.coplanar_pairs.empty());
  double area = 0;
  for (const CoplanarPair& cp : r.coplanar_pairs) {
    CHECK_FALSE(cp.same_orientation);
    const auto [p, q, s] = r.refined_a.corners(cp.face_a);
    CHECK(p.x == 1.0);
    CHECK(q.x == 1.0);
    CHECK(s.x == 1.0);
    // Normals oppose: A's points +x, B's points -x.
    const Point3 na = cross(q - p, s - p);
    const auto [p2, q2, s2] = r.refined_b.corners(cp.face_b);
    CHECK(na.x > 0);
    CHECK(cross(q2 - p2, s2 - p2).x < 0);
    area += face_area(r.refined_a, cp.face_a);
  }
  CHECK(area == doctest::Approx(1.0));
  CHECK(testing::residual_intersections(r) == 0);
}

TEST_CASE("partially overlapping coplanar faces become whole duplicates") {
  const TriMesh a = box({0, 0, 0}, {1, 1, 1});
  const TriMesh b = box({0.5, 0.5, 0}, {1.5, 1.5, 1});
  const RefinedPair r = corefine(a, b);
  double same_area = 0;
  for (const CoplanarPair& cp : r.coplanar_pairs) {
    CHECK(cp.same_orientation);
    same_area += face_area(r.refined_a, cp.face_a);
  }
  // Overlap squares on z = 0 and z = 1.
  CHECK(same_area == doctest::Approx(0.5));
  CHECK(testing::residual_intersections(r) == 0);
  CHECK(testing::worst_area_defect(a, r.refined_a) <= 1e-9);
  CHECK(testing::worst_area_defect(b, r.refined_b) <= 1e-9);
}

TEST_CASE("corefine of general-position spheres") {
  const TriMesh a = shapes::icosphere(2);
  const TriMesh b = shapes::icosphere(2, {0.61, 0.23, -0.17}, 0.83);
  const RefinedPair r = corefine(a, b);
  CHECK(r.diagnostics.intersecting_pairs > 0);
  CHECK(testing::residual_intersections(r) == 0);
  CHECK(testing::worst_area_defect(a, r.refined_a) <= 1e-9);
  CHECK(testing::worst_area_defect(b, r.refined_b) <= 1e-9);
  check_plane_fidelity(a, r.refined_a, r.exact_a);
  check_plane_fidelity(b, r.refined_b, r.exact_b);
  CHECK(audit(r.refined_a).is_closed);
  CHECK(audit(r.refined_b).is_closed);
}

TEST_CASE("corefine intersection points are symmetric in the operands") {
  const TriMesh a = box({0, 0, 0}, {1, 1, 1});
  for (const TriMesh& b : {box({0.5, -0.5, 0.25}, {1.5, 0.5, 1.25}), shapes::icosphere(1, {1, 1, 1}, 0.6),
                           box({0.5, 0.5, 0}, {1.5, 1.5, 1})}) {
    const RefinedPair ab = corefine(a, b);
    const RefinedPair ba = corefine(b, a);
    CHECK(new_points(ab, a, b) == new_points(ba, b, a));
    CHECK(ab.coplanar_pairs.size() == ba.coplanar_pairs.size());
  }
}

TEST_CASE("corefine with an open mesh") {
  TriMesh cube = box({0, 0, 0}, {1, 1, 1});
  std::vector<Triangle> faces(cube.faces().begin() + 1, cube.faces().end());
  const TriMesh open(cube.vertices(), faces);
  const TriMesh b = box({0.3, 0.4, -0.5}, {1.7, 1.2, 0.6});
  const RefinedPair r = corefine(open, b);
  CHECK(testing::residual_intersections(r) == 0);
  CHECK(testing::worst_area_defect(open, r.refined_a) <= 1e-9);
  CHECK(audit(r.refined_a).boundary_edge_count > 0);
  CHECK(audit(r.refined_b).is_closed);
}

TEST_CASE("detect_coplanar_duplicates is idempotent") {
  const TriMesh a = box({0, 0, 0}, {1, 1, 1});
  const RefinedPair r = corefine(a, box({0, 0.5, 0}, {1, 1.5, 1}));
  const RefinedPair again = detect_coplanar_duplicates(r);
  CHECK(again.coplanar_pairs == r.coplanar_pairs);
  CHECK_FALSE(r.coplanar_pairs.empty());
}
