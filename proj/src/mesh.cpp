#include "windbool/mesh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "windbool/exact.hpp"
#include "windbool/summation.hpp"

namespace windbool {

double norm(const Point3& a) { return std::sqrt(dot(a, a)); }

TriMesh::TriMesh(std::vector<Point3> vertices, std::vector<Triangle> faces,
                 std::vector<FaceProvenance> provenance)
    : vertices_(std::move(vertices)), faces_(std::move(faces)), provenance_(std::move(provenance)) {
  for (const Point3& p : vertices_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw std::invalid_argument("TriMesh: non-finite vertex coordinate");
    }
  }
  const auto n = vertices_.size();
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const Triangle& t = faces_[f];
    if (t.v0 >= n || t.v1 >= n || t.v2 >= n) {
      throw std::invalid_argument("TriMesh: face " + std::to_string(f) + " has an out-of-range index");
    }
    if (t.v0 == t.v1 || t.v1 == t.v2 || t.v2 == t.v0) {
      throw std::invalid_argument("TriMesh: face " + std::to_string(f) + " repeats a vertex index");
    }
  }
  if (!provenance_.empty() && provenance_.size() != faces_.size()) {
    throw std::invalid_argument("TriMesh: provenance size does not match face count");
  }
}

std::array<Point3, 3> TriMesh::corners(std::size_t face) const {
  const Triangle& t = faces_.at(face);
  return {vertices_[t.v0], vertices_[t.v1], vertices_[t.v2]};
}

void Box3::extend(const Point3& p) {
  min = {std::min(min.x, p.x), std::min(min.y, p.y), std::min(min.z, p.z)};
  max = {std::max(max.x, p.x), std::max(max.y, p.y), std::max(max.z, p.z)};
}

void Box3::extend(const Box3& b) {
  extend(b.min);
  extend(b.max);
}

bool Box3::contains(const Point3& p) const {
  return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z && p.z <= max.z;
}

bool Box3::contains(const Box3& b) const { return contains(b.min) && contains(b.max); }

bool Box3::overlaps(const Box3& b) const {
  return min.x <= b.max.x && b.min.x <= max.x && min.y <= b.max.y && b.min.y <= max.y &&
         min.z <= b.max.z && b.min.z <= max.z;
}

int Box3::longest_axis() const {
  const Point3 d = max - min;
  if (d.x >= d.y && d.x >= d.z) return 0;
  return d.y >= d.z ? 1 : 2;
}

Point3 barycenter(const TriMesh& mesh, std::size_t face) {
  if (face >= mesh.face_count()) throw std::invalid_argument("barycenter: face index out of range");
  const auto [a, b, c] = mesh.corners(face);
  return {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0, (a.z + b.z + c.z) / 3.0};
}

TriMesh flip_face(const TriMesh& mesh, std::size_t face) {
  if (face >= mesh.face_count()) throw std::invalid_argument("flip_face: face index out of range");
  std::vector<Triangle> faces = mesh.faces();
  std::swap(faces[face].v1, faces[face].v2);
  return TriMesh(mesh.vertices(), std::move(faces), mesh.provenance());
}

TriMesh flip_all(const TriMesh& mesh) {
  std::vector<Triangle> faces = mesh.faces();
  for (Triangle& t : faces) std::swap(t.v1, t.v2);
  return TriMesh(mesh.vertices(), std::move(faces), mesh.provenance());
}

double signed_volume(const TriMesh& mesh) {
  // p0 . (p1 x p2) negates bit-exactly when p1 and p2 swap.
  CompensatedSum sum;
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const auto [a, b, c] = mesh.corners(f);
    sum.add(dot(a, cross(b, c)));
  }
  return sum.value() / 6.0;
}

double face_area(const TriMesh& mesh, std::size_t face) {
  const auto [a, b, c] = mesh.corners(face);
  return 0.5 * norm(cross(b - a, c - a));
}

double total_area(const TriMesh& mesh) {
  CompensatedSum sum;
  for (std::size_t f = 0; f < mesh.face_count(); ++f) sum.add(face_area(mesh, f));
  return sum.value();
}

bool is_degenerate(const Point3& a, const Point3& b, const Point3& c) { return exact::collinear(a, b, c); }

MeshAudit audit(const TriMesh& mesh) {
  MeshAudit out;
  // Undirected edge (lo, hi) -> (count lo->hi, count hi->lo).
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const Triangle& t = mesh.faces()[f];
    const auto [a, b, c] = mesh.corners(f);
    if (is_degenerate(a, b, c)) ++out.degenerate_face_count;
    for (int i = 0; i < 3; ++i) {
      const std::uint32_t u = t[i];
      const std::uint32_t v = t[(i + 1) % 3];
      auto& counts = edges[{std::min(u, v), std::max(u, v)}];
      if (u < v) {
        ++counts.first;
      } else {
        ++counts.second;
      }
    }
  }
  for (const auto& [edge, counts] : edges) {
    const auto [forward, backward] = counts;
    if (forward + backward > 2) out.is_edge_manifold = false;
    out.boundary_edge_count += forward > backward ? forward - backward : backward - forward;
  }
  out.is_closed = out.boundary_edge_count == 0;
  return out;
}

Box3 bounding_box(const TriMesh& mesh) {
  Box3 box;
  for (const Point3& p : mesh.vertices()) box.extend(p);
  return box;
}

TriMesh concatenate(std::span<const TriMesh> parts) {
  std::vector<Point3> vertices;
  std::vector<Triangle> faces;
  std::vector<FaceProvenance> provenance;
  bool all_tagged = !parts.empty();
  for (const TriMesh& m : parts) all_tagged = all_tagged && (m.provenance().size() == m.face_count());
  for (const TriMesh& m : parts) {
    const auto offset = static_cast<std::uint32_t>(vertices.size());
    vertices.insert(vertices.end(), m.vertices().begin(), m.vertices().end());
    for (const Triangle& t : m.faces()) faces.push_back({t.v0 + offset, t.v1 + offset, t.v2 + offset});
    if (all_tagged) provenance.insert(provenance.end(), m.provenance().begin(), m.provenance().end());
  }
  return TriMesh(std::move(vertices), std::move(faces), std::move(provenance));
}

TriMesh translated(const TriMesh& mesh, const Point3& offset) {
  std::vector<Point3> vertices = mesh.vertices();
  for (Point3& p : vertices) p = p + offset;
  return TriMesh(std::move(vertices), mesh.faces(), mesh.provenance());
}

namespace {

struct BitKey {
  std::uint64_t x, y, z;
  friend bool operator==(const BitKey&, const BitKey&) = default;
};

struct BitKeyHash {
  std::size_t operator()(const BitKey& k) const {
    std::size_t h = k.x * 0x9E3779B97F4A7C15ull;
    h ^= k.y + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    h ^= k.z + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    return h;
  }
};

BitKey bit_key(const Point3& p) {
  auto bits = [](double d) { return std::bit_cast<std::uint64_t>(d == 0.0 ? 0.0 : d); };
  return {bits(p.x), bits(p.y), bits(p.z)};
}

}  // namespace

TriMesh weld_exact(const TriMesh& mesh) {
  std::unordered_map<BitKey, std::uint32_t, BitKeyHash> index;
  std::vector<Point3> vertices;
  std::vector<std::uint32_t> remap(mesh.vertex_count());
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
    const Point3& p = mesh.vertices()[i];
    auto [it, inserted] = index.try_emplace(bit_key(p), static_cast<std::uint32_t>(vertices.size()));
    if (inserted) vertices.push_back(p);
    remap[i] = it->second;
  }
  std::vector<Triangle> faces;
  std::vector<FaceProvenance> provenance;
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const Triangle& t = mesh.faces()[f];
    const Triangle w{remap[t.v0], remap[t.v1], remap[t.v2]};
    if (w.v0 == w.v1 || w.v1 == w.v2 || w.v2 == w.v0) continue;
    faces.push_back(w);
    if (!mesh.provenance().empty()) provenance.push_back(mesh.provenance()[f]);
  }
  return TriMesh(std::move(vertices), std::move(faces), std::move(provenance));
}

TriMesh with_provenance(const TriMesh& mesh, MeshSource source) {
  std::vector<FaceProvenance> provenance(mesh.face_count());
  for (std::size_t f = 0; f < provenance.size(); ++f) {
    provenance[f] = {static_cast<std::uint32_t>(f), source};
  }
  return TriMesh(mesh.vertices(), mesh.faces(), std::move(provenance));
}

}  // namespace windbool
