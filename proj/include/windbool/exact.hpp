#pragma once

// Exact rational geometry. Every double is a dyadic rational, so predicates
// and constructions on input coordinates are computed without error; doubles
// are produced only by explicit rounding.

#include <gmpxx.h>

#include <array>
#include <compare>
#include <string>

#include "windbool/mesh.hpp"

namespace windbool::exact {

using Rational = mpq_class;

struct ExactPoint {
  std::array<Rational, 3> c;

  ExactPoint() = default;
  explicit ExactPoint(const Point3& p) : c{Rational(p.x), Rational(p.y), Rational(p.z)} {}
  ExactPoint(Rational x, Rational y, Rational z) : c{std::move(x), std::move(y), std::move(z)} {}

  const Rational& operator[](int axis) const { return c[static_cast<std::size_t>(axis)]; }
  Rational& operator[](int axis) { return c[static_cast<std::size_t>(axis)]; }
};

bool operator==(const ExactPoint& a, const ExactPoint& b);
/// Lexicographic (x, then y, then z).
std::strong_ordering operator<=>(const ExactPoint& a, const ExactPoint& b);

ExactPoint operator-(const ExactPoint& a, const ExactPoint& b);
ExactPoint operator+(const ExactPoint& a, const ExactPoint& b);
ExactPoint operator*(const ExactPoint& a, const Rational& s);
Rational dot(const ExactPoint& a, const ExactPoint& b);
ExactPoint cross(const ExactPoint& a, const ExactPoint& b);

/// Round-to-nearest-even conversion (single rounding).
double round_to_double(const Rational& q);
Point3 round_to_double(const ExactPoint& p);

std::string to_string(const ExactPoint& p);

/// Sign of ((b-a) x (c-a)) . (d-a): positive when d lies on the side the
/// right-handed normal of (a, b, c) points to.
int orient3d(const ExactPoint& a, const ExactPoint& b, const ExactPoint& c, const ExactPoint& d);
/// Floating-point filter with exact fallback; identical result to the exact version.
int orient3d(const Point3& a, const Point3& b, const Point3& c, const Point3& d);

/// Sign of the 2D orientation of (a, b, c) projected onto axes (u, v).
int orient2d(const ExactPoint& a, const ExactPoint& b, const ExactPoint& c, int u, int v);
int orient2d(const Point3& a, const Point3& b, const Point3& c, int u, int v);

/// Exact test for collinear (or coincident) points.
bool collinear(const Point3& a, const Point3& b, const Point3& c);
bool collinear(const ExactPoint& a, const ExactPoint& b, const ExactPoint& c);

/// Plane through three exact points: normal . x == offset.
struct Plane {
  ExactPoint normal;
  Rational offset;
  /// Axis with the largest |normal| component; dropped when projecting to 2D.
  int drop_axis = 2;
  /// Projection axes chosen so the defining triangle is counter-clockwise.
  int u = 0;
  int v = 1;

  static Plane through(const ExactPoint& a, const ExactPoint& b, const ExactPoint& c);
  int side(const ExactPoint& p) const;
  bool contains(const ExactPoint& p) const { return side(p) == 0; }
  /// Recovers the dropped coordinate of a point given its (u, v) coordinates.
  ExactPoint lift(const Rational& pu, const Rational& pv) const;
};

/// Closed-triangle containment for a point already known to be coplanar.
bool in_closed_triangle(const ExactPoint& p, const ExactPoint& a, const ExactPoint& b,
                        const ExactPoint& c, const Plane& plane);

/// True when p lies on the closed segment [a, b] (exact).
bool on_closed_segment(const ExactPoint& p, const ExactPoint& a, const ExactPoint& b);

}  // namespace windbool::exact
