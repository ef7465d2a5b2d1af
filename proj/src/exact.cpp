#include "windbool/exact.hpp"

#include <mpfr.h>

#include <cmath>
#include <sstream>

namespace windbool::exact {

namespace {

constexpr double kEpsilon = 0x1p-53;
constexpr double kOrient3dBound = (7.0 + 56.0 * kEpsilon) * kEpsilon;
constexpr double kOrient2dBound = (3.0 + 16.0 * kEpsilon) * kEpsilon;

int sign_of(const Rational& q) { return sgn(q); }

}  // namespace

bool operator==(const ExactPoint& a, const ExactPoint& b) {
  return a.c[0] == b.c[0] && a.c[1] == b.c[1] && a.c[2] == b.c[2];
}

std::strong_ordering operator<=>(const ExactPoint& a, const ExactPoint& b) {
  for (int i = 0; i < 3; ++i) {
    const int r = cmp(a[i], b[i]);
    if (r < 0) return std::strong_ordering::less;
    if (r > 0) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

ExactPoint operator-(const ExactPoint& a, const ExactPoint& b) {
  return {Rational(a[0] - b[0]), Rational(a[1] - b[1]), Rational(a[2] - b[2])};
}

ExactPoint operator+(const ExactPoint& a, const ExactPoint& b) {
  return {Rational(a[0] + b[0]), Rational(a[1] + b[1]), Rational(a[2] + b[2])};
}

ExactPoint operator*(const ExactPoint& a, const Rational& s) {
  return {Rational(a[0] * s), Rational(a[1] * s), Rational(a[2] * s)};
}

Rational dot(const ExactPoint& a, const ExactPoint& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

ExactPoint cross(const ExactPoint& a, const ExactPoint& b) {
  return {Rational(a[1] * b[2] - a[2] * b[1]), Rational(a[2] * b[0] - a[0] * b[2]),
          Rational(a[0] * b[1] - a[1] * b[0])};
}

double round_to_double(const Rational& q) {
  mpfr_t tmp;
  mpfr_init2(tmp, 53);
  mpfr_set_q(tmp, q.get_mpq_t(), MPFR_RNDN);
  const double d = mpfr_get_d(tmp, MPFR_RNDN);
  mpfr_clear(tmp);
  // Canonical zero so identical rationals always map to identical bit patterns.
  return d == 0.0 ? 0.0 : d;
}

Point3 round_to_double(const ExactPoint& p) {
  return {round_to_double(p[0]), round_to_double(p[1]), round_to_double(p[2])};
}

std::string to_string(const ExactPoint& p) {
  std::ostringstream os;
  os << '(' << p[0] << ", " << p[1] << ", " << p[2] << ')';
  return os.str();
}

int orient3d(const ExactPoint& a, const ExactPoint& b, const ExactPoint& c, const ExactPoint& d) {
  return sign_of(dot(cross(b - a, c - a), d - a));
}

int orient3d(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  // Shewchuk's stage-A filter on det[a-d, b-d, c-d], which is the negation of
  // the convention used here.
  const double adx = a.x - d.x, bdx = b.x - d.x, cdx = c.x - d.x;
  const double ady = a.y - d.y, bdy = b.y - d.y, cdy = c.y - d.y;
  const double adz = a.z - d.z, bdz = b.z - d.z, cdz = c.z - d.z;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;

  const double det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * std::abs(adz) +
                           (std::abs(cdxady) + std::abs(adxcdy)) * std::abs(bdz) +
                           (std::abs(adxbdy) + std::abs(bdxady)) * std::abs(cdz);
  const double bound = kOrient3dBound * permanent;
  if (det > bound) return -1;
  if (-det > bound) return 1;
  return orient3d(ExactPoint(a), ExactPoint(b), ExactPoint(c), ExactPoint(d));
}

int orient2d(const ExactPoint& a, const ExactPoint& b, const ExactPoint& c, int u, int v) {
  const Rational det = (b[u] - a[u]) * (c[v] - a[v]) - (b[v] - a[v]) * (c[u] - a[u]);
  return sign_of(det);
}

int orient2d(const Point3& a, const Point3& b, const Point3& c, int u, int v) {
  const double left = (a[u] - c[u]) * (b[v] - c[v]);
  const double right = (a[v] - c[v]) * (b[u] - c[u]);
  const double det = left - right;
  const double bound = kOrient2dBound * (std::abs(left) + std::abs(right));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return orient2d(ExactPoint(a), ExactPoint(b), ExactPoint(c), u, v);
}

bool collinear(const Point3& a, const Point3& b, const Point3& c) {
  return orient2d(a, b, c, 0, 1) == 0 && orient2d(a, b, c, 1, 2) == 0 && orient2d(a, b, c, 2, 0) == 0;
}

bool collinear(const ExactPoint& a, const ExactPoint& b, const ExactPoint& c) {
  const ExactPoint n = cross(b - a, c - a);
  return sgn(n[0]) == 0 && sgn(n[1]) == 0 && sgn(n[2]) == 0;
}

Plane Plane::through(const ExactPoint& a, const ExactPoint& b, const ExactPoint& c) {
  Plane plane;
  plane.normal = cross(b - a, c - a);
  plane.offset = dot(plane.normal, a);
  int axis = 0;
  for (int i = 1; i < 3; ++i) {
    if (cmp(abs(plane.normal[i]), abs(plane.normal[axis])) > 0) axis = i;
  }
  plane.drop_axis = axis;
  plane.u = (axis + 1) % 3;
  plane.v = (axis + 2) % 3;
  if (sgn(plane.normal[axis]) < 0) std::swap(plane.u, plane.v);
  return plane;
}

int Plane::side(const ExactPoint& p) const { return sign_of(dot(normal, p) - offset); }

ExactPoint Plane::lift(const Rational& pu, const Rational& pv) const {
  ExactPoint p;
  p[u] = pu;
  p[v] = pv;
  p[drop_axis] = (offset - normal[u] * pu - normal[v] * pv) / normal[drop_axis];
  return p;
}

bool in_closed_triangle(const ExactPoint& p, const ExactPoint& a, const ExactPoint& b,
                        const ExactPoint& c, const Plane& plane) {
  return orient2d(a, b, p, plane.u, plane.v) >= 0 && orient2d(b, c, p, plane.u, plane.v) >= 0 &&
         orient2d(c, a, p, plane.u, plane.v) >= 0;
}

bool on_closed_segment(const ExactPoint& p, const ExactPoint& a, const ExactPoint& b) {
  if (!collinear(a, b, p)) return false;
  for (int i = 0; i < 3; ++i) {
    const Rational& lo = cmp(a[i], b[i]) <= 0 ? a[i] : b[i];
    const Rational& hi = cmp(a[i], b[i]) <= 0 ? b[i] : a[i];
    if (cmp(p[i], lo) < 0 || cmp(p[i], hi) > 0) return false;
  }
  return true;
}

}  // namespace windbool::exact
