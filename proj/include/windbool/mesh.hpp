#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace windbool {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point3&, const Point3&) = default;

  Point3 operator+(const Point3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Point3 operator-(const Point3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Point3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
};

inline double dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Point3 cross(const Point3& a, const Point3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(const Point3& a);

/// Oriented triangle: the cyclic order (v0, v1, v2) defines the orientation.
struct Triangle {
  std::uint32_t v0 = 0;
  std::uint32_t v1 = 0;
  std::uint32_t v2 = 0;

  friend bool operator==(const Triangle&, const Triangle&) = default;
  std::uint32_t operator[](int i) const { return i == 0 ? v0 : (i == 1 ? v1 : v2); }
};

enum class MeshSource : std::uint8_t { Unknown, A, B };

/// Where a face came from: an index into the face list of the source mesh.
struct FaceProvenance {
  std::uint32_t original_face = 0;
  MeshSource source = MeshSource::Unknown;

  friend bool operator==(const FaceProvenance&, const FaceProvenance&) = default;
};

/// Indexed triangle mesh. Faces reference the shared vertex list.
class TriMesh {
 public:
  TriMesh() = default;

  /// Validates indices and coordinates; throws std::invalid_argument on
  /// out-of-range or repeated indices and on non-finite coordinates.
  TriMesh(std::vector<Point3> vertices, std::vector<Triangle> faces,
          std::vector<FaceProvenance> provenance = {});

  const std::vector<Point3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& faces() const { return faces_; }
  /// Empty when the mesh carries no provenance tags.
  const std::vector<FaceProvenance>& provenance() const { return provenance_; }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t face_count() const { return faces_.size(); }
  bool empty() const { return faces_.empty(); }

  std::array<Point3, 3> corners(std::size_t face) const;

  friend bool operator==(const TriMesh&, const TriMesh&) = default;

 private:
  std::vector<Point3> vertices_;
  std::vector<Triangle> faces_;
  std::vector<FaceProvenance> provenance_;
};

struct MeshAudit {
  bool is_edge_manifold = true;
  bool is_closed = true;
  std::size_t degenerate_face_count = 0;
  std::size_t boundary_edge_count = 0;
};

/// Axis-aligned box.
struct Box3 {
  Point3 min{1.0 / 0.0, 1.0 / 0.0, 1.0 / 0.0};
  Point3 max{-1.0 / 0.0, -1.0 / 0.0, -1.0 / 0.0};

  void extend(const Point3& p);
  void extend(const Box3& b);
  bool contains(const Point3& p) const;
  bool contains(const Box3& b) const;
  bool overlaps(const Box3& b) const;
  int longest_axis() const;
  Point3 center() const { return (min + max) * 0.5; }
};

Point3 barycenter(const TriMesh& mesh, std::size_t face);
TriMesh flip_face(const TriMesh& mesh, std::size_t face);
TriMesh flip_all(const TriMesh& mesh);

/// (1/6) * sum of det(p0, p1, p2) over faces.
double signed_volume(const TriMesh& mesh);

double face_area(const TriMesh& mesh, std::size_t face);
double total_area(const TriMesh& mesh);

/// True when the three vertices are exactly collinear (or repeated).
bool is_degenerate(const Point3& a, const Point3& b, const Point3& c);

MeshAudit audit(const TriMesh& mesh);

Box3 bounding_box(const TriMesh& mesh);

/// Concatenates meshes; vertex indices of later meshes are offset. Provenance
/// is kept only if every part carries it.
TriMesh concatenate(std::span<const TriMesh> parts);

TriMesh translated(const TriMesh& mesh, const Point3& offset);

/// Merges vertices with bit-identical coordinates (after normalising -0.0).
/// Faces that collapse to repeated indices are dropped.
TriMesh weld_exact(const TriMesh& mesh);

/// Copy of `mesh` with every face's provenance set to (face index, source).
TriMesh with_provenance(const TriMesh& mesh, MeshSource source);

}  // namespace windbool
