#include "windbool/shapes.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace windbool::shapes {

TriMesh box(const Point3& min, const Point3& max) {
  std::vector<Point3> v;
  for (int i = 0; i < 8; ++i) {
    v.push_back({(i & 1) ? max.x : min.x, (i & 2) ? max.y : min.y, (i & 4) ? max.z : min.z});
  }
  // Two triangles per side, counter-clockwise seen from outside.
  std::vector<Triangle> f = {
      {0, 2, 3}, {0, 3, 1},  // z = min
      {4, 5, 7}, {4, 7, 6},  // z = max
      {0, 1, 5}, {0, 5, 4},  // y = min
      {2, 6, 7}, {2, 7, 3},  // y = max
      {0, 4, 6}, {0, 6, 2},  // x = min
      {1, 3, 7}, {1, 7, 5},  // x = max
  };
  return TriMesh(std::move(v), std::move(f));
}

TriMesh octahedron(const Point3& center, double radius) {
  std::vector<Point3> v = {
      center + Point3{radius, 0, 0}, center + Point3{-radius, 0, 0}, center + Point3{0, radius, 0},
      center + Point3{0, -radius, 0}, center + Point3{0, 0, radius}, center + Point3{0, 0, -radius},
  };
  std::vector<Triangle> f = {
      {0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5},
  };
  return TriMesh(std::move(v), std::move(f));
}

TriMesh icosphere(int subdivisions, const Point3& center, double radius) {
  if (subdivisions < 0) throw std::invalid_argument("icosphere: negative subdivision count");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Point3> unit = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
      {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1},
  };
  for (Point3& p : unit) p = p * (1.0 / norm(p));
  std::vector<Triangle> faces = {
      {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
      {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1},
  };
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoints;
    auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = midpoints.find(key);
      if (it != midpoints.end()) return it->second;
      const Point3 m = (unit[a] + unit[b]) * 0.5;
      unit.push_back(m * (1.0 / norm(m)));
      const auto idx = static_cast<std::uint32_t>(unit.size() - 1);
      midpoints.emplace(key, idx);
      return idx;
    };
    std::vector<Triangle> next;
    next.reserve(faces.size() * 4);
    for (const Triangle& f : faces) {
      const auto ab = midpoint(f.v0, f.v1);
      const auto bc = midpoint(f.v1, f.v2);
      const auto ca = midpoint(f.v2, f.v0);
      next.push_back({f.v0, ab, ca});
      next.push_back({f.v1, bc, ab});
      next.push_back({f.v2, ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }
  for (Point3& p : unit) p = center + p * radius;
  return TriMesh(std::move(unit), std::move(faces));
}

}  // namespace windbool::shapes
