#include "windbool/corefine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "windbool/cdt.hpp"
#include "windbool/winding.hpp"

namespace windbool {

using exact::ExactPoint;
using exact::Plane;
using exact::Rational;

namespace {

using ExactTriangle = std::array<ExactPoint, 3>;

FeatureKind feature_on(const ExactPoint& p, const ExactTriangle& t) {
  for (const ExactPoint& c : t) {
    if (p == c) return FeatureKind::Vertex;
  }
  for (int i = 0; i < 3; ++i) {
    if (exact::on_closed_segment(p, t[i], t[(i + 1) % 3])) return FeatureKind::Edge;
  }
  return FeatureKind::Interior;
}

// Points where a triangle meets a plane it straddles or touches, given the
// signed plane values of its corners. At most two distinct points.
std::vector<ExactPoint> plane_section(const ExactTriangle& t, const std::array<Rational, 3>& value) {
  std::vector<ExactPoint> out;
  auto push = [&](ExactPoint p) {
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
  };
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int si = sgn(value[i]);
    const int sj = sgn(value[j]);
    if (si == 0) push(t[i]);
    if (si * sj < 0) {
      const Rational s = value[i] / (value[i] - value[j]);
      push(t[i] + (t[j] - t[i]) * s);
    }
  }
  return out;
}

Rational orient2d_value(const ExactPoint& a, const ExactPoint& b, const ExactPoint& c, int u, int v) {
  return (b[u] - a[u]) * (c[v] - a[v]) - (b[v] - a[v]) * (c[u] - a[u]);
}

TriTriResult coplanar_intersection(const ExactTriangle& a, const ExactTriangle& b) {
  const Plane plane = Plane::through(a[0], a[1], a[2]);
  const int u = plane.u;
  const int v = plane.v;

  // Clip b by the three inner half-planes of a (a is counter-clockwise in (u, v)).
  std::vector<ExactPoint> poly(b.begin(), b.end());
  for (int i = 0; i < 3 && !poly.empty(); ++i) {
    const ExactPoint& e0 = a[i];
    const ExactPoint& e1 = a[(i + 1) % 3];
    std::vector<ExactPoint> next;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const ExactPoint& p = poly[k];
      const ExactPoint& q = poly[(k + 1) % poly.size()];
      const Rational op = orient2d_value(e0, e1, p, u, v);
      const Rational oq = orient2d_value(e0, e1, q, u, v);
      if (sgn(op) >= 0) next.push_back(p);
      if (sgn(op) * sgn(oq) < 0) next.push_back(p + (q - p) * Rational(op / (op - oq)));
    }
    poly = std::move(next);
  }

  std::vector<ExactPoint> unique;
  for (const ExactPoint& p : poly) {
    if (std::find(unique.begin(), unique.end(), p) == unique.end()) unique.push_back(p);
  }
  TriTriResult out;
  if (unique.empty()) return out;

  bool all_collinear = true;
  for (std::size_t k = 2; k < unique.size() && all_collinear; ++k) {
    all_collinear = exact::orient2d(unique[0], unique[1], unique[k], u, v) == 0;
  }
  if (unique.size() < 3 || all_collinear) {
    const auto [lo, hi] = std::minmax_element(unique.begin(), unique.end());
    if (*lo == *hi) {
      IntersectionSegment seg;
      seg.endpoints = {*lo, *lo};
      seg.rounded = {exact::round_to_double(*lo), exact::round_to_double(*lo)};
      seg.features = {{{feature_on(*lo, a), feature_on(*lo, b)}, {feature_on(*lo, a), feature_on(*lo, b)}}};
      seg.degenerate = true;
      out.kind = TriTriKind::Segment;
      out.segment = std::move(seg);
      return out;
    }
    out.kind = TriTriKind::Coplanar;
    out.overlap = {*lo, *hi};
    return out;
  }

  // Drop consecutive duplicates and collinear middle vertices.
  std::vector<ExactPoint> ring;
  for (const ExactPoint& p : poly) {
    if (ring.empty() || !(ring.back() == p)) ring.push_back(p);
  }
  while (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  bool changed = true;
  while (changed && ring.size() > 3) {
    changed = false;
    for (std::size_t k = 0; k < ring.size(); ++k) {
      const ExactPoint& prev = ring[(k + ring.size() - 1) % ring.size()];
      const ExactPoint& next = ring[(k + 1) % ring.size()];
      if (exact::orient2d(prev, ring[k], next, u, v) == 0) {
        ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(k));
        changed = true;
        break;
      }
    }
  }
  out.kind = TriTriKind::Coplanar;
  out.overlap = std::move(ring);
  return out;
}

}  // namespace

TriTriResult tri_tri_intersect(const ExactTriangle& a, const ExactTriangle& b) {
  TriTriResult out;
  if (exact::collinear(a[0], a[1], a[2]) || exact::collinear(b[0], b[1], b[2])) {
    out.kind = TriTriKind::DegenerateInput;
    return out;
  }
  const Plane pa = Plane::through(a[0], a[1], a[2]);
  const Plane pb = Plane::through(b[0], b[1], b[2]);
  std::array<Rational, 3> va, vb;
  std::array<int, 3> sa{}, sb{};
  for (int i = 0; i < 3; ++i) {
    va[i] = dot(pb.normal, a[i]) - pb.offset;
    vb[i] = dot(pa.normal, b[i]) - pa.offset;
    sa[i] = sgn(va[i]);
    sb[i] = sgn(vb[i]);
  }
  auto one_side = [](const std::array<int, 3>& s) {
    return (s[0] > 0 && s[1] > 0 && s[2] > 0) || (s[0] < 0 && s[1] < 0 && s[2] < 0);
  };
  if (one_side(sa) || one_side(sb)) return out;
  if (sa[0] == 0 && sa[1] == 0 && sa[2] == 0) return coplanar_intersection(a, b);

  const std::vector<ExactPoint> section_a = plane_section(a, va);
  const std::vector<ExactPoint> section_b = plane_section(b, vb);

  // Both sections lie on the planes' common line; order along it by the
  // coordinate in which the line direction is largest.
  const ExactPoint dir = exact::cross(pa.normal, pb.normal);
  int axis = 0;
  for (int i = 1; i < 3; ++i) {
    if (cmp(abs(dir[i]), abs(dir[axis])) > 0) axis = i;
  }
  auto less = [axis](const ExactPoint& p, const ExactPoint& q) { return cmp(p[axis], q[axis]) < 0; };
  const auto [lo_a, hi_a] = std::minmax_element(section_a.begin(), section_a.end(), less);
  const auto [lo_b, hi_b] = std::minmax_element(section_b.begin(), section_b.end(), less);
  const ExactPoint& lo = less(*lo_a, *lo_b) ? *lo_b : *lo_a;
  const ExactPoint& hi = less(*hi_b, *hi_a) ? *hi_b : *hi_a;
  if (less(hi, lo)) return out;

  IntersectionSegment seg;
  seg.endpoints = {lo, hi};
  if (hi < lo) std::swap(seg.endpoints[0], seg.endpoints[1]);
  for (int e = 0; e < 2; ++e) {
    seg.rounded[e] = exact::round_to_double(seg.endpoints[e]);
    seg.features[e] = {feature_on(seg.endpoints[e], a), feature_on(seg.endpoints[e], b)};
  }
  seg.degenerate = seg.endpoints[0] == seg.endpoints[1];
  out.kind = TriTriKind::Segment;
  out.segment = std::move(seg);
  return out;
}

TriTriResult tri_tri_intersect(const Point3& a0, const Point3& a1, const Point3& a2, const Point3& b0,
                               const Point3& b1, const Point3& b2) {
  return tri_tri_intersect(ExactTriangle{ExactPoint(a0), ExactPoint(a1), ExactPoint(a2)},
                           ExactTriangle{ExactPoint(b0), ExactPoint(b1), ExactPoint(b2)});
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> candidate_pairs(const TriMesh& a, const TriMesh& b) {
  if (a.empty() || b.empty()) return {};
  return overlapping_pairs(a, build_bvh(a), b, build_bvh(b));
}

namespace {

// Exact point registry shared by both meshes: identical positions get
// identical ids, so both copies of an intersection point round identically.
class PointRegistry {
 public:
  std::uint32_t id(const ExactPoint& p) {
    auto [it, inserted] = ids_.try_emplace(p, static_cast<std::uint32_t>(positions_.size()));
    if (inserted) positions_.push_back(p);
    return it->second;
  }
  const ExactPoint& operator[](std::uint32_t id) const { return positions_[id]; }
  std::size_t size() const { return positions_.size(); }

 private:
  std::map<ExactPoint, std::uint32_t> ids_;
  std::vector<ExactPoint> positions_;
};

using Segment = std::pair<std::uint32_t, std::uint32_t>;

struct FaceWork {
  int mesh = 0;
  std::uint32_t face = 0;
  Plane plane;
  std::array<std::uint32_t, 3> corners{};
  std::vector<std::uint32_t> points;  // corners first
  std::unordered_set<std::uint32_t> point_set;
  std::set<Segment> constraints;
  std::vector<Segment> pieces;
  std::set<std::uint32_t> partners;  // intersecting faces of the other mesh
  std::size_t propagated = 0;
  bool queued = false;
};

class Refiner {
 public:
  Refiner(const TriMesh& a, const TriMesh& b) : meshes_{&a, &b} {
    for (int m = 0; m < 2; ++m) {
      const TriMesh& mesh = *meshes_[m];
      gids_[m].reserve(mesh.vertex_count());
      for (const Point3& p : mesh.vertices()) gids_[m].push_back(registry_.id(ExactPoint(p)));
      degenerate_[m].resize(mesh.face_count());
      for (std::size_t f = 0; f < mesh.face_count(); ++f) {
        const auto [p, q, r] = mesh.corners(f);
        degenerate_[m][f] = exact::collinear(p, q, r);
        for (std::uint32_t gid : face_gids(m, f)) vertex_faces_[m][gid].push_back(static_cast<std::uint32_t>(f));
      }
      work_index_[m].assign(mesh.face_count(), -1);
    }
    original_point_count_ = registry_.size();
  }

  RefinedPair run() {
    RefinedPair out;
    const auto pairs = candidate_pairs(*meshes_[0], *meshes_[1]);
    out.diagnostics.candidate_pairs = pairs.size();
    for (const auto& [fa, fb] : pairs) {
      if (degenerate_[0][fa] || degenerate_[1][fb]) {
        ++out.diagnostics.skipped_degenerate_pairs;
        continue;
      }
      const TriTriResult hit = tri_tri_intersect(exact_corners(0, fa), exact_corners(1, fb));
      if (hit.kind == TriTriKind::None) continue;
      if (hit.kind == TriTriKind::DegenerateInput) {
        ++out.diagnostics.skipped_degenerate_pairs;
        continue;
      }
      ++out.diagnostics.intersecting_pairs;
      FaceWork& wa = work(0, fa);
      FaceWork& wb = work(1, fb);
      wa.partners.insert(fb);
      wb.partners.insert(fa);
      std::vector<std::uint32_t> ids;
      if (hit.kind == TriTriKind::Segment) {
        ids.push_back(registry_.id(hit.segment->endpoints[0]));
        if (!hit.segment->degenerate) ids.push_back(registry_.id(hit.segment->endpoints[1]));
      } else {
        if (hit.has_area()) ++out.diagnostics.coplanar_overlaps;
        for (const ExactPoint& p : hit.overlap) ids.push_back(registry_.id(p));
      }
      for (FaceWork* w : {&work(0, fa), &work(1, fb)}) {
        for (std::uint32_t id : ids) add_point(*w, id);
        if (ids.size() == 2) {
          add_constraint(*w, ids[0], ids[1]);
        } else if (ids.size() > 2) {
          for (std::size_t k = 0; k < ids.size(); ++k) add_constraint(*w, ids[k], ids[(k + 1) % ids.size()]);
        }
      }
    }

    while (!queue_.empty()) {
      const std::size_t wi = queue_.front();
      queue_.pop_front();
      works_[wi].queued = false;
      arrange(wi);
      propagate(wi);
    }

    for (int m = 0; m < 2; ++m) build_output(m, out);
    out.diagnostics.new_vertices = registry_.size() - original_point_count_;
    out.diagnostics.refined_faces_a = out.refined_a.face_count();
    out.diagnostics.refined_faces_b = out.refined_b.face_count();
    return out;
  }

 private:
  std::array<std::uint32_t, 3> face_gids(int m, std::size_t f) const {
    const Triangle& t = meshes_[m]->faces()[f];
    return {gids_[m][t.v0], gids_[m][t.v1], gids_[m][t.v2]};
  }

  ExactTriangle exact_corners(int m, std::size_t f) const {
    const auto g = face_gids(m, f);
    return {registry_[g[0]], registry_[g[1]], registry_[g[2]]};
  }

  FaceWork& work(int m, std::uint32_t f) {
    if (work_index_[m][f] < 0) {
      work_index_[m][f] = static_cast<int>(works_.size());
      FaceWork w;
      w.mesh = m;
      w.face = f;
      w.corners = face_gids(m, f);
      const ExactTriangle c = exact_corners(m, f);
      w.plane = Plane::through(c[0], c[1], c[2]);
      for (std::uint32_t id : w.corners) {
        w.points.push_back(id);
        w.point_set.insert(id);
      }
      w.propagated = 3;
      works_.push_back(std::move(w));
    }
    return works_[static_cast<std::size_t>(work_index_[m][f])];
  }

  void enqueue(FaceWork& w) {
    if (w.queued) return;
    w.queued = true;
    queue_.push_back(static_cast<std::size_t>(work_index_[w.mesh][w.face]));
  }

  void add_point(FaceWork& w, std::uint32_t id) {
    if (w.point_set.insert(id).second) {
      w.points.push_back(id);
      enqueue(w);
    }
  }

  void add_constraint(FaceWork& w, std::uint32_t s, std::uint32_t e) {
    if (s == e) return;
    if (w.constraints.insert({std::min(s, e), std::max(s, e)}).second) enqueue(w);
  }

  bool in_closure(const FaceWork& w, const ExactPoint& p) const {
    if (!w.plane.contains(p)) return false;
    return exact::in_closed_triangle(p, registry_[w.corners[0]], registry_[w.corners[1]], registry_[w.corners[2]],
                                     w.plane);
  }

  // Splits constraints at every face point they pass through and adds the
  // crossing points of constraints, until the pieces form a plane graph.
  void arrange(std::size_t wi) {
    FaceWork& w = works_[wi];
    const int u = w.plane.u;
    const int v = w.plane.v;
    for (;;) {
      std::vector<Segment> pieces;
      for (const auto& [s, e] : w.constraints) {
        const ExactPoint& ps = registry_[s];
        const ExactPoint& pe = registry_[e];
        std::vector<std::uint32_t> on;
        for (std::uint32_t id : w.points) {
          if (id == s || id == e) continue;
          const ExactPoint& p = registry_[id];
          if (exact::orient2d(ps, pe, p, u, v) != 0) continue;
          if ((ps < p && p < pe) || (pe < p && p < ps)) on.push_back(id);
        }
        std::sort(on.begin(), on.end(), [&](std::uint32_t x, std::uint32_t y) { return registry_[x] < registry_[y]; });
        if (pe < ps) std::reverse(on.begin(), on.end());
        std::uint32_t prev = s;
        for (std::uint32_t id : on) {
          pieces.emplace_back(prev, id);
          prev = id;
        }
        pieces.emplace_back(prev, e);
      }
      for (auto& [s, e] : pieces) {
        if (e < s) std::swap(s, e);
      }
      std::sort(pieces.begin(), pieces.end());
      pieces.erase(std::unique(pieces.begin(), pieces.end()), pieces.end());

      bool added = false;
      for (std::size_t i = 0; i < pieces.size(); ++i) {
        for (std::size_t j = i + 1; j < pieces.size(); ++j) {
          const ExactPoint& s1 = registry_[pieces[i].first];
          const ExactPoint& e1 = registry_[pieces[i].second];
          const ExactPoint& s2 = registry_[pieces[j].first];
          const ExactPoint& e2 = registry_[pieces[j].second];
          const Rational d1 = orient2d_value(s1, e1, s2, u, v);
          const Rational d2 = orient2d_value(s1, e1, e2, u, v);
          if (sgn(d1) * sgn(d2) >= 0) continue;
          if (exact::orient2d(s2, e2, s1, u, v) * exact::orient2d(s2, e2, e1, u, v) >= 0) continue;
          const ExactPoint x = s2 + (e2 - s2) * Rational(d1 / (d1 - d2));
          add_point(w, registry_.id(x));
          added = true;
        }
      }
      if (!added) {
        w.pieces = std::move(pieces);
        return;
      }
    }
  }

  // Hands every new point of a face to the neighbouring faces (same mesh,
  // sharing a corner) and intersecting partners (other mesh) whose closed
  // triangle contains it.
  void propagate(std::size_t wi) {
    const int m = works_[wi].mesh;
    const std::uint32_t f = works_[wi].face;
    std::vector<std::pair<int, std::uint32_t>> related;
    for (std::uint32_t gid : works_[wi].corners) {
      for (std::uint32_t g : vertex_faces_[m][gid]) {
        if (g != f) related.emplace_back(m, g);
      }
    }
    for (std::uint32_t g : works_[wi].partners) related.emplace_back(1 - m, g);
    std::sort(related.begin(), related.end());
    related.erase(std::unique(related.begin(), related.end()), related.end());

    while (works_[wi].propagated < works_[wi].points.size()) {
      const std::uint32_t id = works_[wi].points[works_[wi].propagated++];
      for (const auto& [rm, g] : related) {
        if (degenerate_[rm][g]) continue;
        const int existing = work_index_[rm][g];
        if (existing >= 0 && works_[static_cast<std::size_t>(existing)].point_set.count(id)) continue;
        const ExactTriangle c = exact_corners(rm, g);
        const Plane plane = existing >= 0 ? works_[static_cast<std::size_t>(existing)].plane
                                          : Plane::through(c[0], c[1], c[2]);
        if (!plane.contains(registry_[id])) continue;
        if (!exact::in_closed_triangle(registry_[id], c[0], c[1], c[2], plane)) continue;
        // work() may grow works_; do not hold references across it.
        add_point(work(rm, g), id);
      }
    }
  }

  void build_output(int m, RefinedPair& out) {
    const TriMesh& mesh = *meshes_[m];
    std::vector<Point3> vertices = mesh.vertices();
    std::vector<ExactPoint> exact_positions;
    exact_positions.reserve(vertices.size());
    std::map<std::uint32_t, std::uint32_t> local;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      exact_positions.push_back(registry_[gids_[m][i]]);
      local.try_emplace(gids_[m][i], static_cast<std::uint32_t>(i));
    }
    auto local_index = [&](std::uint32_t gid) {
      auto [it, inserted] = local.try_emplace(gid, static_cast<std::uint32_t>(vertices.size()));
      if (inserted) {
        vertices.push_back(exact::round_to_double(registry_[gid]));
        exact_positions.push_back(registry_[gid]);
      }
      return it->second;
    };

    std::vector<Triangle> faces;
    std::vector<FaceProvenance> provenance;
    const MeshSource source = m == 0 ? MeshSource::A : MeshSource::B;
    for (std::size_t f = 0; f < mesh.face_count(); ++f) {
      const int wi = work_index_[m][f];
      const auto original = static_cast<std::uint32_t>(f);
      if (wi < 0 || works_[static_cast<std::size_t>(wi)].points.size() == 3) {
        faces.push_back(mesh.faces()[f]);
        provenance.push_back({original, source});
        continue;
      }
      const FaceWork& w = works_[static_cast<std::size_t>(wi)];
      cdt::PlanarInput input;
      input.u = w.plane.u;
      input.v = w.plane.v;
      std::map<std::uint32_t, int> slot;
      for (std::uint32_t id : w.points) {
        slot.emplace(id, static_cast<int>(input.points.size()));
        input.points.push_back(registry_[id]);
      }
      input.corners = {0, 1, 2};
      for (const auto& [s, e] : w.pieces) input.constraints.emplace_back(slot.at(s), slot.at(e));
      for (const auto& tri : cdt::triangulate(input)) {
        faces.push_back({local_index(w.points[tri[0]]), local_index(w.points[tri[1]]), local_index(w.points[tri[2]])});
        provenance.push_back({original, source});
      }
    }
    TriMesh refined(std::move(vertices), std::move(faces), std::move(provenance));
    if (m == 0) {
      out.refined_a = std::move(refined);
      out.exact_a = std::move(exact_positions);
    } else {
      out.refined_b = std::move(refined);
      out.exact_b = std::move(exact_positions);
    }
  }

  std::array<const TriMesh*, 2> meshes_;
  PointRegistry registry_;
  std::size_t original_point_count_ = 0;
  std::array<std::vector<std::uint32_t>, 2> gids_;
  std::array<std::vector<bool>, 2> degenerate_;
  std::array<std::map<std::uint32_t, std::vector<std::uint32_t>>, 2> vertex_faces_;
  std::array<std::vector<int>, 2> work_index_;
  std::deque<FaceWork> works_;
  std::deque<std::size_t> queue_;
};

}  // namespace

RefinedPair corefine(const TriMesh& a, const TriMesh& b) {
  return detect_coplanar_duplicates(Refiner(a, b).run());
}

RefinedPair detect_coplanar_duplicates(RefinedPair pair) {
  std::map<ExactPoint, std::uint32_t> ids;
  auto id_of = [&](const ExactPoint& p) {
    return ids.try_emplace(p, static_cast<std::uint32_t>(ids.size())).first->second;
  };
  auto keyed = [&](const TriMesh& mesh, const std::vector<ExactPoint>& positions, std::size_t f) {
    const Triangle& t = mesh.faces()[f];
    std::array<std::uint32_t, 3> cyc{id_of(positions[t.v0]), id_of(positions[t.v1]), id_of(positions[t.v2])};
    std::rotate(cyc.begin(), std::min_element(cyc.begin(), cyc.end()), cyc.end());
    return cyc;
  };

  std::map<std::array<std::uint32_t, 3>, std::vector<std::pair<std::uint32_t, std::array<std::uint32_t, 3>>>> b_faces;
  for (std::size_t f = 0; f < pair.refined_b.face_count(); ++f) {
    const auto cyc = keyed(pair.refined_b, pair.exact_b, f);
    if (cyc[0] == cyc[1] || cyc[1] == cyc[2] || cyc[0] == cyc[2]) continue;
    auto sorted = cyc;
    std::sort(sorted.begin(), sorted.end());
    b_faces[sorted].emplace_back(static_cast<std::uint32_t>(f), cyc);
  }
  pair.coplanar_pairs.clear();
  for (std::size_t f = 0; f < pair.refined_a.face_count(); ++f) {
    const auto cyc = keyed(pair.refined_a, pair.exact_a, f);
    auto sorted = cyc;
    std::sort(sorted.begin(), sorted.end());
    auto it = b_faces.find(sorted);
    if (it == b_faces.end()) continue;
    for (const auto& [fb, cyc_b] : it->second) {
      pair.coplanar_pairs.push_back({static_cast<std::uint32_t>(f), fb, cyc[1] == cyc_b[1]});
    }
  }
  return pair;
}

}  // namespace windbool
