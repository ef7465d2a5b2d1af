#include "support.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <set>
#include <utility>

namespace windbool::testing {

double solid_angle_excess(const Point3& p, const Point3& a, const Point3& b, const Point3& c) {
  const Point3 ua = a - p, ub = b - p, uc = c - p;
  // Side lengths of the spherical triangle, as angles between the rays.
  auto angle = [](const Point3& x, const Point3& y) { return std::atan2(norm(cross(x, y)), dot(x, y)); };
  const double sa = angle(ub, uc);
  const double sb = angle(uc, ua);
  const double sc = angle(ua, ub);
  const double s = 0.5 * (sa + sb + sc);
  const double t = std::tan(s / 2) * std::tan((s - sa) / 2) * std::tan((s - sb) / 2) * std::tan((s - sc) / 2);
  const double excess = 4.0 * std::atan(std::sqrt(std::max(t, 0.0)));
  const double det = dot(ua, cross(ub, uc));
  if (det == 0.0) return 0.0;
  return det > 0 ? excess : -excess;
}

double winding_excess(const TriMesh& mesh, const Point3& p) {
  double sum = 0.0;
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const auto [a, b, c] = mesh.corners(f);
    sum += solid_angle_excess(p, a, b, c);
  }
  return sum / (4.0 * std::numbers::pi);
}

std::size_t count_unmatched_edges(const TriMesh& mesh) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> directed;
  for (const Triangle& t : mesh.faces()) {
    for (int i = 0; i < 3; ++i) directed.emplace_back(t[i], t[(i + 1) % 3]);
  }
  std::size_t unmatched = 0;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (const auto& [u, v] : directed) {
    const auto key = std::minmax(u, v);
    if (!seen.insert(key).second) continue;
    long fwd = 0, bwd = 0;
    for (const auto& [x, y] : directed) {
      if (x == key.first && y == key.second) ++fwd;
      if (x == key.second && y == key.first) ++bwd;
    }
    unmatched += static_cast<std::size_t>(std::labs(fwd - bwd));
  }
  return unmatched;
}

int ray_crossing_winding(const TriMesh& mesh, const Point3& p) {
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Point3 d{gauss(rng), gauss(rng), gauss(rng)};
    int winding = 0;
    bool ambiguous = false;
    for (std::size_t f = 0; f < mesh.face_count() && !ambiguous; ++f) {
      const auto [a, b, c] = mesh.corners(f);
      const Point3 e1 = b - a, e2 = c - a;
      const Point3 h = cross(d, e2);
      const double det = dot(e1, h);
      const double scale = norm(e1) * norm(e2) * norm(d);
      const Point3 s = p - a;
      if (std::abs(det) <= 1e-12 * scale) {
        // Ray parallel to the face; only a problem if it lies in its plane.
        ambiguous = std::abs(dot(s, cross(e1, e2))) <= 1e-12 * norm(s) * norm(e1) * norm(e2);
        continue;
      }
      const double u = dot(s, h) / det;
      const Point3 q = cross(s, e1);
      const double v = dot(d, q) / det;
      const double t = dot(e2, q) / det;
      const double w = 1.0 - u - v;
      if (u < -1e-9 || v < -1e-9 || w < -1e-9) continue;
      if (u < 1e-9 || v < 1e-9 || w < 1e-9 || std::abs(t) < 1e-12) {
        ambiguous = true;
        continue;
      }
      if (t > 0) winding += det < 0 ? 1 : -1;
    }
    if (!ambiguous) return winding;
  }
  throw std::runtime_error("ray_crossing_winding: no clean ray direction");
}

double point_triangle_distance(const Point3& p, const Point3& a, const Point3& b, const Point3& c) {
  // Closest point by Voronoi region of the triangle.
  const Point3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0 && d2 <= 0) return norm(p - a);
  const Point3 bp = p - b;
  const double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0 && d4 <= d3) return norm(p - b);
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return norm(p - (a + ab * (d1 / (d1 - d3))));
  const Point3 cp = p - c;
  const double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0 && d5 <= d6) return norm(p - c);
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return norm(p - (a + ac * (d2 / (d2 - d6))));
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    return norm(p - (b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)))));
  }
  const double denom = 1.0 / (va + vb + vc);
  return norm(p - (a + ab * (vb * denom) + ac * (vc * denom)));
}

double distance_to_mesh(const TriMesh& mesh, const Point3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const auto [a, b, c] = mesh.corners(f);
    best = std::min(best, point_triangle_distance(p, a, b, c));
  }
  return best;
}

namespace {

double radical_inverse(std::size_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

Point3 halton(std::size_t i) { return {radical_inverse(i + 1, 2), radical_inverse(i + 1, 3), radical_inverse(i + 1, 5)}; }

double BoxSpec::volume() const { return (max.x - min.x) * (max.y - min.y) * (max.z - min.z); }

double box_overlap_volume(const BoxSpec& a, const BoxSpec& b) {
  double v = 1.0;
  for (int k = 0; k < 3; ++k) v *= std::max(0.0, std::min(a.max[k], b.max[k]) - std::max(a.min[k], b.min[k]));
  return v;
}

std::vector<CubePairCase> cube_corpus() {
  const BoxSpec unit{{0, 0, 0}, {1, 1, 1}};
  auto box = [](Point3 lo, Point3 hi) { return BoxSpec{lo, hi}; };
  return {
      {"corner", unit, box({0.5, 0.5, 0.5}, {1.5, 1.5, 1.5})},
      {"edge", unit, box({0.5, 0.5, -0.5}, {1.5, 1.5, 1.5})},
      {"face-slab", unit, box({0.5, -0.5, -0.5}, {1.5, 1.5, 1.5})},
      {"tunnel", unit, box({-0.5, 0.25, 0.25}, {1.5, 0.75, 0.75})},
      {"contained", unit, box({0.25, 0.25, 0.25}, {0.75, 0.75, 0.75})},
      {"containing", unit, box({-1, -1, -1}, {2, 2, 2})},
      {"disjoint", unit, box({2, 2, 2}, {3, 3, 3})},
      {"shared-face", unit, box({1, 0, 0}, {2, 1, 1})},
      {"partial-face-contact", unit, box({1, 0.5, 0.25}, {2, 1.5, 0.75})},
      {"identical", unit, unit},
      {"coplanar-overlap", unit, box({0.5, 0.5, 0}, {1.5, 1.5, 1})},
      {"edge-contact", unit, box({1, 1, 0}, {2, 2, 1})},
  };
}

double analytic_volume(const BoxSpec& a, const BoxSpec& b, BoolOp op) {
  const double va = a.volume(), vb = b.volume(), vi = box_overlap_volume(a, b);
  switch (op) {
    case BoolOp::Union: return va + vb - vi;
    case BoolOp::Intersection: return vi;
    case BoolOp::DifferenceAB: return va - vi;
    case BoolOp::DifferenceBA: return vb - vi;
    case BoolOp::SymmetricDifference: return va + vb - 2 * vi;
  }
  return 0.0;
}

bool combine(bool in_a, bool in_b, BoolOp op) {
  switch (op) {
    case BoolOp::Union: return in_a || in_b;
    case BoolOp::Intersection: return in_a && in_b;
    case BoolOp::DifferenceAB: return in_a && !in_b;
    case BoolOp::DifferenceBA: return in_b && !in_a;
    case BoolOp::SymmetricDifference: return in_a != in_b;
  }
  return false;
}

namespace {

// Small self-contained rational vector arithmetic for the residual audit.
using Q = mpq_class;
struct V {
  Q x, y, z;
  const Q& operator[](int k) const { return k == 0 ? x : (k == 1 ? y : z); }
};
V sub(const V& a, const V& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
V add(const V& a, const V& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
V scale(const V& a, const Q& s) { return {a.x * s, a.y * s, a.z * s}; }
Q vdot(const V& a, const V& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
V vcross(const V& a, const V& b) { return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x}; }
bool same(const V& a, const V& b) { return a.x == b.x && a.y == b.y && a.z == b.z; }

V from(const exact::ExactPoint& p) { return {p[0], p[1], p[2]}; }

using Tri = std::array<V, 3>;

// Appends the points bounding segment [p, q] intersected with closed triangle t.
void segment_triangle(const V& p, const V& q, const Tri& t, std::vector<V>& out) {
  const V n = vcross(sub(t[1], t[0]), sub(t[2], t[0]));
  const Q sp = vdot(n, sub(p, t[0]));
  const Q sq = vdot(n, sub(q, t[0]));
  const int gp = sgn(sp), gq = sgn(sq);
  if (gp * gq > 0) return;
  if (gp == 0 && gq == 0) {
    int drop = 0;
    for (int k = 1; k < 3; ++k) {
      if (abs(n[k]) > abs(n[drop])) drop = k;
    }
    const int u = (drop + 1) % 3, v = (drop + 2) % 3;
    auto cross2 = [&](const V& a, const V& b) -> Q { return a[u] * b[v] - a[v] * b[u]; };
    const int s = sgn(cross2(sub(t[1], t[0]), sub(t[2], t[0])));
    Q t0 = 0, t1 = 1;
    const V d = sub(q, p);
    for (int i = 0; i < 3; ++i) {
      const V e = sub(t[(i + 1) % 3], t[i]);
      const Q f0 = s * cross2(e, sub(p, t[i]));
      const Q df = s * cross2(e, d);
      // f0 + t * df >= 0
      if (sgn(df) == 0) {
        if (sgn(f0) < 0) return;
      } else if (sgn(df) > 0) {
        t0 = std::max(t0, Q(-f0 / df));
      } else {
        t1 = std::min(t1, Q(-f0 / df));
      }
    }
    if (t0 > t1) return;
    out.push_back(add(p, scale(d, t0)));
    out.push_back(add(p, scale(d, t1)));
    return;
  }
  const Q s = sp / (sp - sq);
  const V x = add(p, scale(sub(q, p), s));
  for (int i = 0; i < 3; ++i) {
    if (sgn(vdot(n, vcross(sub(t[(i + 1) % 3], t[i]), sub(x, t[i])))) < 0) return;
  }
  out.push_back(x);
}

bool boxes_touch(const TriMesh& a, std::size_t fa, const TriMesh& b, std::size_t fb) {
  Box3 ba, bb;
  const auto [a0, a1, a2] = a.corners(fa);
  const auto [b0, b1, b2] = b.corners(fb);
  for (const Point3& p : {a0, a1, a2}) ba.extend(p);
  for (const Point3& p : {b0, b1, b2}) bb.extend(p);
  // Rounded coordinates are within an ulp of the exact ones.
  for (int k = 0; k < 3; ++k) {
    const double slack = 1e-9 * (1.0 + std::abs(ba.min[k]) + std::abs(ba.max[k]));
    if (ba.max[k] + slack < bb.min[k] || bb.max[k] + slack < ba.min[k]) return false;
  }
  return true;
}

}  // namespace

std::size_t residual_intersections(const RefinedPair& pair) {
  const TriMesh& ma = pair.refined_a;
  const TriMesh& mb = pair.refined_b;
  std::set<std::pair<std::uint32_t, std::uint32_t>> registered;
  for (const CoplanarPair& cp : pair.coplanar_pairs) registered.emplace(cp.face_a, cp.face_b);

  auto tri = [](const TriMesh& m, const std::vector<exact::ExactPoint>& pos, std::size_t f) {
    const Triangle& t = m.faces()[f];
    return Tri{from(pos[t.v0]), from(pos[t.v1]), from(pos[t.v2])};
  };
  auto degenerate = [](const Tri& t) {
    const V n = vcross(sub(t[1], t[0]), sub(t[2], t[0]));
    return sgn(n.x) == 0 && sgn(n.y) == 0 && sgn(n.z) == 0;
  };

  std::size_t bad = 0;
  for (std::size_t fa = 0; fa < ma.face_count(); ++fa) {
    std::optional<Tri> ta;
    for (std::size_t fb = 0; fb < mb.face_count(); ++fb) {
      if (!boxes_touch(ma, fa, mb, fb)) continue;
      if (!ta) ta = tri(ma, pair.exact_a, fa);
      const Tri tb = tri(mb, pair.exact_b, fb);
      if (degenerate(*ta) || degenerate(tb)) continue;

      std::vector<V> shared;
      for (const V& p : *ta) {
        for (const V& q : tb) {
          if (same(p, q)) shared.push_back(p);
        }
      }
      if (shared.size() == 3) {
        if (!registered.count({static_cast<std::uint32_t>(fa), static_cast<std::uint32_t>(fb)})) ++bad;
        continue;
      }
      std::vector<V> contact;
      for (int i = 0; i < 3; ++i) {
        segment_triangle((*ta)[i], (*ta)[(i + 1) % 3], tb, contact);
        segment_triangle(tb[i], tb[(i + 1) % 3], *ta, contact);
      }
      const bool ok = std::all_of(contact.begin(), contact.end(), [&](const V& x) {
        return std::any_of(shared.begin(), shared.end(), [&](const V& s) { return same(s, x); });
      });
      if (!ok) ++bad;
    }
  }
  return bad;
}

std::vector<exact::ExactPoint> contact_points(const std::array<exact::ExactPoint, 3>& a,
                                              const std::array<exact::ExactPoint, 3>& b) {
  const Tri ta{from(a[0]), from(a[1]), from(a[2])};
  const Tri tb{from(b[0]), from(b[1]), from(b[2])};
  std::vector<V> contact;
  for (int i = 0; i < 3; ++i) {
    segment_triangle(ta[i], ta[(i + 1) % 3], tb, contact);
    segment_triangle(tb[i], tb[(i + 1) % 3], ta, contact);
  }
  std::vector<exact::ExactPoint> out;
  for (const V& v : contact) out.emplace_back(v.x, v.y, v.z);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double worst_area_defect(const TriMesh& original, const TriMesh& refined) {
  std::vector<double> sums(original.face_count(), 0.0);
  for (std::size_t f = 0; f < refined.face_count(); ++f) {
    sums.at(refined.provenance().at(f).original_face) += face_area(refined, f);
  }
  double worst = 0.0;
  for (std::size_t f = 0; f < original.face_count(); ++f) {
    const double area = face_area(original, f);
    if (area == 0.0) continue;
    worst = std::max(worst, std::abs(sums[f] - area) / area);
  }
  return worst;
}

}  // namespace windbool::testing
