#pragma once

#include "windbool/mesh.hpp"

namespace windbool::shapes {

/// Axis-aligned box with 8 vertices and 12 outward-oriented faces.
TriMesh box(const Point3& min, const Point3& max);

/// Regular octahedron with vertices at center +- radius along each axis.
TriMesh octahedron(const Point3& center = {}, double radius = 1.0);

/// Subdivided icosahedron projected to a sphere; 20 * 4^subdivisions faces.
TriMesh icosphere(int subdivisions, const Point3& center = {}, double radius = 1.0);

}  // namespace windbool::shapes
