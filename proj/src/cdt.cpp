#include "windbool/cdt.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace windbool::cdt {

using exact::ExactPoint;
using exact::Rational;

namespace {

// Sign of the perturbed lifted determinant. Each point's lift is raised by an
// infinitesimal whose magnitude decreases with its rank, so the first nonzero
// cofactor in rank order decides ties.
bool perturbed_in_circle(const std::array<const ExactPoint*, 4>& pts, const std::array<int, 4>& rank, int u,
                         int v) {
  const ExactPoint& a = *pts[0];
  const ExactPoint& b = *pts[1];
  const ExactPoint& c = *pts[2];
  const ExactPoint& d = *pts[3];
  const Rational adx = a[u] - d[u], ady = a[v] - d[v];
  const Rational bdx = b[u] - d[u], bdy = b[v] - d[v];
  const Rational cdx = c[u] - d[u], cdy = c[v] - d[v];
  const Rational ca = bdx * cdy - cdx * bdy;
  const Rational cb = cdx * ady - adx * cdy;
  const Rational cc = adx * bdy - bdx * ady;
  const Rational alift = adx * adx + ady * ady;
  const Rational blift = bdx * bdx + bdy * bdy;
  const Rational clift = cdx * cdx + cdy * cdy;
  const Rational det = alift * ca + blift * cb + clift * cc;
  if (sgn(det) != 0) return sgn(det) > 0;

  const std::array<Rational, 4> coefficient{ca, cb, cc, Rational(-(ca + cb + cc))};
  std::array<int, 4> order{0, 1, 2, 3};
  std::sort(order.begin(), order.end(), [&](int x, int y) { return rank[x] < rank[y]; });
  for (int i : order) {
    const int s = sgn(coefficient[i]);
    if (s != 0) return s > 0;
  }
  throw std::logic_error("in_circle: degenerate triangle");
}

using Edge = std::pair<int, int>;

class Triangulation {
 public:
  Triangulation(const PlanarInput& input, std::vector<int> rank)
      : in_(input), rank_(std::move(rank)) {}

  int orient(int a, int b, int c) const {
    return exact::orient2d(in_.points[a], in_.points[b], in_.points[c], in_.u, in_.v);
  }

  bool in_circle(int a, int b, int c, int d) const {
    return perturbed_in_circle({&in_.points[a], &in_.points[b], &in_.points[c], &in_.points[d]},
                               {rank_[a], rank_[b], rank_[c], rank_[d]}, in_.u, in_.v);
  }

  void add(int a, int b, int c) {
    const int t = static_cast<int>(tris_.size());
    tris_.push_back({a, b, c});
    alive_.push_back(true);
    edges_[{a, b}] = t;
    edges_[{b, c}] = t;
    edges_[{c, a}] = t;
  }

  void remove(int t) {
    alive_[t] = false;
    const auto& [a, b, c] = tris_[t];
    edges_.erase({a, b});
    edges_.erase({b, c});
    edges_.erase({c, a});
  }

  int triangle_with(int a, int b) const {
    auto it = edges_.find({a, b});
    return it == edges_.end() ? -1 : it->second;
  }

  int opposite(int t, int a, int b) const {
    for (int k : tris_[t]) {
      if (k != a && k != b) return k;
    }
    throw std::logic_error("cdt: malformed triangle");
  }

  void insert_point(int p) {
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
      if (!alive_[t]) continue;
      const auto [a, b, c] = tris_[t];
      const int o0 = orient(a, b, p), o1 = orient(b, c, p), o2 = orient(c, a, p);
      if (o0 < 0 || o1 < 0 || o2 < 0) continue;
      const int zeros = (o0 == 0) + (o1 == 0) + (o2 == 0);
      if (zeros == 0) {
        remove(t);
        add(a, b, p);
        add(b, c, p);
        add(c, a, p);
      } else if (zeros == 1) {
        const auto [e0, e1] = o0 == 0 ? Edge{a, b} : (o1 == 0 ? Edge{b, c} : Edge{c, a});
        split_edge(e0, e1, p);
      } else {
        throw std::logic_error("cdt: duplicate point");
      }
      return;
    }
    throw std::logic_error("cdt: point outside the enclosing triangle");
  }

  void split_edge(int a, int b, int p) {
    for (const auto& [x, y] : {Edge{a, b}, Edge{b, a}}) {
      const int t = triangle_with(x, y);
      if (t < 0) continue;
      const int k = opposite(t, x, y);
      remove(t);
      add(x, p, k);
      add(p, y, k);
    }
  }

  bool crosses(int s, int e, int i, int j) const {
    const int o1 = orient(s, e, i), o2 = orient(s, e, j);
    if (o1 * o2 >= 0) return false;
    const int o3 = orient(i, j, s), o4 = orient(i, j, e);
    return o3 * o4 < 0;
  }

  // Flips the edge shared by (i, j, k) and (j, i, l) into (k, l) when the
  // quad is strictly convex.
  bool try_flip(int i, int j) {
    const int t1 = triangle_with(i, j);
    const int t2 = triangle_with(j, i);
    if (t1 < 0 || t2 < 0) return false;
    const int k = opposite(t1, i, j);
    const int l = opposite(t2, j, i);
    if (orient(k, i, l) <= 0 || orient(l, j, k) <= 0) return false;
    remove(t1);
    remove(t2);
    add(k, i, l);
    add(l, j, k);
    return true;
  }

  void insert_constraint(int s, int e) {
    constrained_.insert({std::min(s, e), std::max(s, e)});
    if (triangle_with(s, e) >= 0 || triangle_with(e, s) >= 0) return;
    // Sloan's method: flip crossing edges until the segment appears.
    for (std::size_t guard = 0;; ++guard) {
      if (guard > 100000) throw std::logic_error("cdt: constraint recovery did not converge");
      std::vector<Edge> crossing;
      for (const auto& [edge, t] : edges_) {
        if (edge.first < edge.second && crosses(s, e, edge.first, edge.second)) crossing.push_back(edge);
      }
      if (crossing.empty()) break;
      bool flipped = false;
      for (const auto& [i, j] : crossing) {
        if (triangle_with(i, j) >= 0 && try_flip(i, j)) flipped = true;
      }
      if (!flipped) throw std::logic_error("cdt: constraint recovery stalled");
    }
    if (triangle_with(s, e) < 0 && triangle_with(e, s) < 0) {
      throw std::logic_error("cdt: constraint edge missing after recovery");
    }
  }

  void make_delaunay() {
    std::vector<Edge> work;
    for (const auto& [edge, t] : edges_) {
      if (edge.first < edge.second) work.push_back(edge);
    }
    while (!work.empty()) {
      const auto [i, j] = work.back();
      work.pop_back();
      if (constrained_.count({std::min(i, j), std::max(i, j)})) continue;
      const int t1 = triangle_with(i, j);
      const int t2 = triangle_with(j, i);
      if (t1 < 0 || t2 < 0) continue;
      const int k = opposite(t1, i, j);
      const int l = opposite(t2, j, i);
      if (!in_circle(i, j, k, l)) continue;
      if (!try_flip(i, j)) throw std::logic_error("cdt: illegal edge in a non-convex quad");
      work.push_back({i, k});
      work.push_back({k, j});
      work.push_back({j, l});
      work.push_back({l, i});
    }
  }

  std::vector<std::array<int, 3>> result() const {
    std::vector<std::array<int, 3>> out;
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      if (alive_[t]) out.push_back(tris_[t]);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  const PlanarInput& in_;
  std::vector<int> rank_;
  std::vector<std::array<int, 3>> tris_;
  std::vector<bool> alive_;
  std::map<Edge, int> edges_;
  std::set<Edge> constrained_;
};

}  // namespace

bool in_circle(const ExactPoint& a, const ExactPoint& b, const ExactPoint& c, const ExactPoint& d, int u, int v) {
  const std::array<const ExactPoint*, 4> pts{&a, &b, &c, &d};
  std::array<int, 4> rank{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (*pts[j] < *pts[i]) ++rank[i];
    }
  }
  return perturbed_in_circle(pts, rank, u, v);
}

std::vector<std::array<int, 3>> triangulate(const PlanarInput& input) {
  const int n = static_cast<int>(input.points.size());
  std::vector<int> by_position(n);
  std::iota(by_position.begin(), by_position.end(), 0);
  std::sort(by_position.begin(), by_position.end(),
            [&](int a, int b) { return input.points[a] < input.points[b]; });
  std::vector<int> rank(n);
  for (int r = 0; r < n; ++r) rank[by_position[r]] = r;

  Triangulation tri(input, rank);
  const auto [c0, c1, c2] = input.corners;
  if (tri.orient(c0, c1, c2) <= 0) throw std::invalid_argument("cdt: corners are not counter-clockwise");
  tri.add(c0, c1, c2);
  for (int p : by_position) {
    if (p == c0 || p == c1 || p == c2) continue;
    tri.insert_point(p);
  }
  for (const auto& [s, e] : input.constraints) {
    if (s != e) tri.insert_constraint(s, e);
  }
  tri.make_delaunay();
  return tri.result();
}

}  // namespace windbool::cdt
