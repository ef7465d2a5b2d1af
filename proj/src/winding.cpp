#include "windbool/winding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "windbool/exact.hpp"
#include "windbool/summation.hpp"

namespace windbool {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

bool is_zero(const Point3& v) { return v.x == 0.0 && v.y == 0.0 && v.z == 0.0; }

template <typename Accumulator>
WindingValue sum_faces(const TriMesh& mesh, const Point3& p) {
  Accumulator acc;
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const auto [a, b, c] = mesh.corners(f);
    const auto omega = solid_angle(p, a, b, c);
    if (!omega) return {0.0, true};
    acc.add(*omega);
  }
  return {acc.value() / kFourPi, false};
}

struct PlainSum {
  double sum = 0.0;
  void add(double x) { sum += x; }
  double value() const { return sum; }
};

// Exact test for p in the closed triangle, given p is exactly coplanar with it.
bool in_closed_coplanar_triangle(const Point3& p, const Point3& a, const Point3& b, const Point3& c) {
  for (int u = 0; u < 3; ++u) {
    const int v = (u + 1) % 3;
    const int s = exact::orient2d(a, b, c, u, v);
    if (s == 0) continue;
    return exact::orient2d(a, b, p, u, v) * s >= 0 && exact::orient2d(b, c, p, u, v) * s >= 0 &&
           exact::orient2d(c, a, p, u, v) * s >= 0;
  }
  // Collinear triangle: on-surface only on one of its segments.
  const exact::ExactPoint ep(p);
  return exact::on_closed_segment(ep, exact::ExactPoint(a), exact::ExactPoint(b)) ||
         exact::on_closed_segment(ep, exact::ExactPoint(b), exact::ExactPoint(c)) ||
         exact::on_closed_segment(ep, exact::ExactPoint(c), exact::ExactPoint(a));
}

}  // namespace

std::optional<double> solid_angle(const Point3& p, const Point3& a, const Point3& b, const Point3& c) {
  const Point3 pa = a - p;
  const Point3 pb = b - p;
  const Point3 pc = c - p;
  if (is_zero(pa) || is_zero(pb) || is_zero(pc)) return std::nullopt;
  const double la = norm(pa);
  const double lb = norm(pb);
  const double lc = norm(pc);
  const double det = dot(pa, cross(pb, pc));
  // Near the supporting plane the rounded determinant cannot be trusted to
  // decide coplanarity, so settle it exactly.
  if (std::abs(det) <= 16.0 * std::numeric_limits<double>::epsilon() * la * lb * lc &&
      exact::orient3d(a, b, c, p) == 0) {
    if (in_closed_coplanar_triangle(p, a, b, c)) return std::nullopt;
    return 0.0;
  }
  const double den = la * lb * lc + dot(pa, pb) * lc + dot(pb, pc) * la + dot(pc, pa) * lb;
  return 2.0 * std::atan2(det, den);
}

WindingValue winding_number(const TriMesh& mesh, const Point3& p) { return sum_faces<CompensatedSum>(mesh, p); }

WindingValue winding_number_naive(const TriMesh& mesh, const Point3& p) { return sum_faces<PlainSum>(mesh, p); }

Box3 WindingBvh::face_box(const TriMesh& mesh, std::size_t face) {
  Box3 box;
  for (const Point3& p : mesh.corners(face)) box.extend(p);
  return box;
}

namespace {

struct PointKey {
  std::uint64_t x, y, z;
  friend bool operator==(const PointKey&, const PointKey&) = default;
};

struct PointKeyHash {
  std::size_t operator()(const PointKey& k) const {
    std::size_t h = k.x * 0x9E3779B97F4A7C15ull;
    h ^= k.y + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    h ^= k.z + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    return h;
  }
};

// Directed edge multiset after cancellation: key (lo, hi), value > 0 means
// that many lo->hi edges, < 0 means hi->lo.
using EdgeBalance = std::map<std::pair<std::uint32_t, std::uint32_t>, int>;

void add_edge(EdgeBalance& balance, std::uint32_t u, std::uint32_t v) {
  if (u == v) return;
  const auto key = std::make_pair(std::min(u, v), std::max(u, v));
  auto [it, inserted] = balance.try_emplace(key, 0);
  it->second += (u < v) ? 1 : -1;
  if (it->second == 0) balance.erase(it);
}

class BvhBuilder {
 public:
  BvhBuilder(const TriMesh& mesh, std::vector<WindingBvh::Node>& nodes, std::vector<std::uint32_t>& order,
             std::vector<WindingBvh::CapTriangle>& caps)
      : mesh_(mesh), nodes_(nodes), order_(order), caps_(caps) {
    const auto n = mesh.face_count();
    boxes_.reserve(n);
    centroids_.reserve(n);
    for (std::size_t f = 0; f < n; ++f) {
      boxes_.push_back(WindingBvh::face_box(mesh, f));
      centroids_.push_back(boxes_.back().center());
    }
    std::unordered_map<PointKey, std::uint32_t, PointKeyHash> ids;
    welded_.resize(mesh.vertex_count());
    for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
      const Point3& p = mesh.vertices()[i];
      auto bits = [](double d) { return std::bit_cast<std::uint64_t>(d == 0.0 ? 0.0 : d); };
      auto [it, inserted] =
          ids.try_emplace(PointKey{bits(p.x), bits(p.y), bits(p.z)}, static_cast<std::uint32_t>(positions_.size()));
      if (inserted) positions_.push_back(p);
      welded_[i] = it->second;
    }
    order_.resize(n);
    for (std::size_t f = 0; f < n; ++f) order_[f] = static_cast<std::uint32_t>(f);
  }

  EdgeBalance build(std::uint32_t node_index) {
    WindingBvh::Node node = nodes_[node_index];
    for (std::uint32_t i = node.first; i < node.first + node.count; ++i) node.box.extend(boxes_[order_[i]]);

    EdgeBalance balance;
    if (node.count <= WindingBvh::kLeafSize) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const Triangle& t = mesh_.faces()[order_[i]];
        for (int k = 0; k < 3; ++k) add_edge(balance, welded_[t[k]], welded_[t[(k + 1) % 3]]);
      }
    } else {
      const int axis = node.box.longest_axis();
      const auto begin = order_.begin() + node.first;
      const auto mid = begin + node.count / 2;
      const auto end = begin + node.count;
      std::nth_element(begin, mid, end, [&](std::uint32_t a, std::uint32_t b) {
        const double ca = centroids_[a][axis];
        const double cb = centroids_[b][axis];
        return ca < cb || (ca == cb && a < b);
      });
      const auto left = static_cast<std::uint32_t>(nodes_.size());
      nodes_.push_back({});
      nodes_.back().first = node.first;
      nodes_.back().count = node.count / 2;
      const auto right = static_cast<std::uint32_t>(nodes_.size());
      nodes_.push_back({});
      nodes_.back().first = node.first + node.count / 2;
      nodes_.back().count = node.count - node.count / 2;
      node.left = static_cast<std::int32_t>(left);
      node.right = static_cast<std::int32_t>(right);

      balance = build(left);
      EdgeBalance other = build(right);
      if (other.size() > balance.size()) std::swap(balance, other);
      for (const auto& [key, count] : other) {
        auto [it, inserted] = balance.try_emplace(key, 0);
        it->second += count;
        if (it->second == 0) balance.erase(it);
      }
    }
    store_cap(node, balance);
    nodes_[node_index] = node;
    return balance;
  }

 private:
  void store_cap(WindingBvh::Node& node, const EdgeBalance& balance) {
    std::size_t cap_size = 0;
    for (const auto& entry : balance) cap_size += static_cast<std::size_t>(std::abs(entry.second));
    node.cap_first = static_cast<std::uint32_t>(caps_.size());
    node.cap_count = 0;
    if (cap_size >= node.count) {
      node.cap_first = WindingBvh::Node::kNoCap;
      return;
    }
    if (balance.empty()) return;
    const auto& [first_key, first_count] = *balance.begin();
    const std::uint32_t apex = first_count > 0 ? first_key.first : first_key.second;
    for (const auto& [key, count] : balance) {
      const std::uint32_t u = count > 0 ? key.first : key.second;
      const std::uint32_t v = count > 0 ? key.second : key.first;
      if (u == apex || v == apex) continue;
      for (int k = 0; k < std::abs(count); ++k) {
        caps_.push_back({positions_[u], positions_[v], positions_[apex]});
        ++node.cap_count;
      }
    }
  }

 private:
  const TriMesh& mesh_;
  std::vector<WindingBvh::Node>& nodes_;
  std::vector<std::uint32_t>& order_;
  std::vector<WindingBvh::CapTriangle>& caps_;
  std::vector<Box3> boxes_;
  std::vector<Point3> centroids_;
  std::vector<std::uint32_t> welded_;
  std::vector<Point3> positions_;
};

bool strictly_outside(const Box3& box, const Point3& p) { return !box.contains(p); }

WindingValue evaluate(const TriMesh& mesh, const WindingBvh& bvh, const Point3& p) {
  CompensatedSum acc;
  const auto& nodes = bvh.nodes();
  std::uint32_t stack[128];
  std::size_t top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const WindingBvh::Node& node = nodes[stack[--top]];
    if (node.has_cap() && strictly_outside(node.box, p)) {
      for (std::uint32_t i = node.cap_first; i < node.cap_first + node.cap_count; ++i) {
        const auto& cap = bvh.cap_triangles()[i];
        // p is outside the box holding the cap, so it cannot touch it.
        acc.add(solid_angle(p, cap.a, cap.b, cap.apex).value_or(0.0));
      }
      continue;
    }
    if (node.is_leaf()) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const auto [a, b, c] = mesh.corners(bvh.face_order()[i]);
        const auto omega = solid_angle(p, a, b, c);
        if (!omega) return {0.0, true};
        acc.add(*omega);
      }
      continue;
    }
    // Right first so the left subtree is evaluated first.
    stack[top++] = static_cast<std::uint32_t>(node.right);
    stack[top++] = static_cast<std::uint32_t>(node.left);
  }
  return {acc.value() / kFourPi, false};
}

}  // namespace

WindingBvh build_bvh(const TriMesh& mesh) {
  if (mesh.empty()) throw std::invalid_argument("build_bvh: mesh has no faces");
  WindingBvh bvh;
  bvh.nodes_.push_back({});
  bvh.nodes_.front().count = static_cast<std::uint32_t>(mesh.face_count());
  BvhBuilder builder(mesh, bvh.nodes_, bvh.face_order_, bvh.caps_);
  builder.build(0);
  return bvh;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("WIND_BOOL_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

WindingValue winding_number(const TriMesh& mesh, const WindingBvh& bvh, const Point3& p) {
  return evaluate(mesh, bvh, p);
}

std::vector<WindingValue> winding_number_batch(const TriMesh& mesh, const WindingBvh& bvh,
                                               std::span<const Point3> points, unsigned threads) {
  if (bvh.face_count() != mesh.face_count()) {
    throw std::invalid_argument("winding_number_batch: hierarchy was built for a different mesh");
  }
  std::vector<WindingValue> out(points.size());
  if (threads == 0) threads = default_thread_count();
  const std::size_t workers = std::min<std::size_t>(threads, std::max<std::size_t>(1, points.size() / 64));
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = evaluate(mesh, bvh, points[i]);
  };
  if (workers <= 1) {
    run(0, points.size());
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (points.size() + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(points.size(), begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(run, begin, end);
  }
  for (auto& t : pool) t.join();
  return out;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> overlapping_pairs(const TriMesh& a, const WindingBvh& bvh_a,
                                                                       const TriMesh& b, const WindingBvh& bvh_b) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [ia, ib] = stack.back();
    stack.pop_back();
    const auto& na = bvh_a.nodes()[ia];
    const auto& nb = bvh_b.nodes()[ib];
    if (!na.box.overlaps(nb.box)) continue;
    if (na.is_leaf() && nb.is_leaf()) {
      for (std::uint32_t i = na.first; i < na.first + na.count; ++i) {
        const std::uint32_t fa = bvh_a.face_order()[i];
        const Box3 box_a = WindingBvh::face_box(a, fa);
        for (std::uint32_t j = nb.first; j < nb.first + nb.count; ++j) {
          const std::uint32_t fb = bvh_b.face_order()[j];
          if (box_a.overlaps(WindingBvh::face_box(b, fb))) out.emplace_back(fa, fb);
        }
      }
    } else if (nb.is_leaf() || (!na.is_leaf() && na.count >= nb.count)) {
      stack.emplace_back(static_cast<std::uint32_t>(na.left), ib);
      stack.emplace_back(static_cast<std::uint32_t>(na.right), ib);
    } else {
      stack.emplace_back(ia, static_cast<std::uint32_t>(nb.left));
      stack.emplace_back(ia, static_cast<std::uint32_t>(nb.right));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace windbool
