#include "windbool/boolean.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <unordered_map>

namespace windbool {

RobustnessError::RobustnessError(MeshSource source, std::uint32_t face)
    : std::runtime_error(std::string("barycenter of refined face ") + std::to_string(face) + " of mesh " +
                         (source == MeshSource::A ? "A" : "B") + " lies exactly on the other mesh"),
      source_(source),
      face_(face) {}

WindingEvaluator hierarchical_evaluator(unsigned threads) {
  return [threads](const TriMesh& mesh, std::span<const Point3> points) {
    if (mesh.empty()) return std::vector<WindingValue>(points.size());
    const WindingBvh bvh = build_bvh(mesh);
    return winding_number_batch(mesh, bvh, points, threads);
  };
}

bool inside(double w, InsideRule rule) {
  switch (rule) {
    case InsideRule::WindingGtHalf:
      return w > 0.5;
    case InsideRule::AbsWindingGtHalf:
      return std::abs(w) > 0.5;
    case InsideRule::WindingPositive:
      return w > kZeroWindingBand;
    case InsideRule::AbsWindingPositive:
      return std::abs(w) > kZeroWindingBand;
  }
  return false;
}

FaceAction action_for(MeshSource source, BoolOp op, bool inside_other) {
  const bool is_a = source == MeshSource::A;
  switch (op) {
    case BoolOp::Union:
      return inside_other ? FaceAction::Discard : FaceAction::Keep;
    case BoolOp::Intersection:
      return inside_other ? FaceAction::Keep : FaceAction::Discard;
    case BoolOp::DifferenceAB:
      if (is_a) return inside_other ? FaceAction::Discard : FaceAction::Keep;
      return inside_other ? FaceAction::KeepFlip : FaceAction::Discard;
    case BoolOp::DifferenceBA:
      if (!is_a) return inside_other ? FaceAction::Discard : FaceAction::Keep;
      return inside_other ? FaceAction::KeepFlip : FaceAction::Discard;
    case BoolOp::SymmetricDifference:
      return inside_other ? FaceAction::KeepFlip : FaceAction::Keep;
  }
  return FaceAction::Discard;
}

namespace {

std::vector<bool> duplicate_mask(const RefinedPair& pair, MeshSource source) {
  const TriMesh& mesh = source == MeshSource::A ? pair.refined_a : pair.refined_b;
  std::vector<bool> mask(mesh.face_count(), false);
  for (const CoplanarPair& cp : pair.coplanar_pairs) mask[source == MeshSource::A ? cp.face_a : cp.face_b] = true;
  return mask;
}

}  // namespace

std::vector<ClassifiedFace> classify(const RefinedPair& pair, const BoolOpSpec& spec,
                                     const WindingEvaluator& winding_eval) {
  std::vector<ClassifiedFace> out;
  for (const MeshSource source : {MeshSource::A, MeshSource::B}) {
    const TriMesh& mesh = source == MeshSource::A ? pair.refined_a : pair.refined_b;
    const TriMesh& other = source == MeshSource::A ? pair.refined_b : pair.refined_a;
    const std::vector<bool> skip = duplicate_mask(pair, source);

    std::vector<std::uint32_t> faces;
    std::vector<Point3> centers;
    for (std::size_t f = 0; f < mesh.face_count(); ++f) {
      if (skip[f]) continue;
      const auto [p, q, r] = mesh.corners(f);
      if (is_degenerate(p, q, r)) {
        // Rounding collapsed it; assemble would drop it anyway.
        out.push_back({source, static_cast<std::uint32_t>(f), {}, FaceAction::Discard});
        continue;
      }
      faces.push_back(static_cast<std::uint32_t>(f));
      centers.push_back(barycenter(mesh, f));
    }
    const std::vector<WindingValue> w = winding_eval(other, centers);
    for (std::size_t i = 0; i < faces.size(); ++i) {
      if (w[i].on_surface) throw RobustnessError(source, faces[i]);
      out.push_back({source, faces[i], w[i], action_for(source, spec.op, inside(w[i].value, spec.inside_rule))});
    }
  }
  return out;
}

std::vector<DuplicateAction> resolve_coplanar(const RefinedPair& pair, const BoolOpSpec& spec) {
  std::vector<DuplicateAction> out;
  for (const CoplanarPair& cp : pair.coplanar_pairs) {
    const Triangle& ta = pair.refined_a.faces().at(cp.face_a);
    const Triangle& tb = pair.refined_b.faces().at(cp.face_b);
    std::array<exact::ExactPoint, 3> pa{pair.exact_a[ta.v0], pair.exact_a[ta.v1], pair.exact_a[ta.v2]};
    std::array<exact::ExactPoint, 3> pb{pair.exact_b[tb.v0], pair.exact_b[tb.v1], pair.exact_b[tb.v2]};
    std::sort(pa.begin(), pa.end());
    std::sort(pb.begin(), pb.end());
    if (pa != pb) throw std::logic_error("resolve_coplanar: pair is not an exact duplicate");

    DuplicateAction action{cp, FaceAction::Discard, FaceAction::Discard};
    const bool same = cp.same_orientation;
    switch (spec.op) {
      case BoolOp::Union:
      case BoolOp::Intersection:
        if (same) action.action_a = FaceAction::Keep;
        break;
      case BoolOp::DifferenceAB:
        if (!same) action.action_a = FaceAction::Keep;
        break;
      case BoolOp::DifferenceBA:
        if (!same) action.action_b = FaceAction::Keep;
        break;
      case BoolOp::SymmetricDifference:
        break;
    }
    out.push_back(action);
  }
  return out;
}

namespace {

struct CoordKey {
  std::uint64_t x, y, z;
  friend bool operator==(const CoordKey&, const CoordKey&) = default;
};

struct CoordKeyHash {
  std::size_t operator()(const CoordKey& k) const {
    std::size_t h = k.x * 0x9E3779B97F4A7C15ull;
    h ^= k.y + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    h ^= k.z + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    return h;
  }
};

CoordKey coord_key(const Point3& p) {
  auto bits = [](double d) { return std::bit_cast<std::uint64_t>(d == 0.0 ? 0.0 : d); };
  return {bits(p.x), bits(p.y), bits(p.z)};
}

}  // namespace

TriMesh assemble(std::span<const ClassifiedFace> classified, std::span<const DuplicateAction> duplicates,
                 const RefinedPair& pair) {
  std::array<std::vector<FaceAction>, 2> actions{
      std::vector<FaceAction>(pair.refined_a.face_count(), FaceAction::Discard),
      std::vector<FaceAction>(pair.refined_b.face_count(), FaceAction::Discard)};
  for (const ClassifiedFace& c : classified) actions[c.source == MeshSource::A ? 0 : 1].at(c.face) = c.action;
  std::array<std::vector<bool>, 2> decided{std::vector<bool>(actions[0].size()), std::vector<bool>(actions[1].size())};
  for (const DuplicateAction& d : duplicates) {
    // A face duplicated more than once keeps the decision of its first pair.
    if (!decided[0][d.pair.face_a]) {
      actions[0][d.pair.face_a] = d.action_a;
      decided[0][d.pair.face_a] = true;
    }
    if (!decided[1][d.pair.face_b]) {
      actions[1][d.pair.face_b] = d.action_b;
      decided[1][d.pair.face_b] = true;
    }
  }

  std::unordered_map<CoordKey, std::uint32_t, CoordKeyHash> index;
  std::vector<Point3> vertices;
  std::vector<Triangle> faces;
  std::vector<FaceProvenance> provenance;
  auto vertex = [&](const Point3& p) {
    auto [it, inserted] = index.try_emplace(coord_key(p), static_cast<std::uint32_t>(vertices.size()));
    if (inserted) vertices.push_back(p);
    return it->second;
  };
  for (int m = 0; m < 2; ++m) {
    const TriMesh& mesh = m == 0 ? pair.refined_a : pair.refined_b;
    for (std::size_t f = 0; f < mesh.face_count(); ++f) {
      const FaceAction action = actions[m][f];
      if (action == FaceAction::Discard) continue;
      auto [p, q, r] = mesh.corners(f);
      if (is_degenerate(p, q, r)) continue;
      if (action == FaceAction::KeepFlip) std::swap(q, r);
      const Triangle t{vertex(p), vertex(q), vertex(r)};
      faces.push_back(t);
      if (!mesh.provenance().empty()) {
        provenance.push_back(mesh.provenance()[f]);
      } else {
        provenance.push_back({static_cast<std::uint32_t>(f), m == 0 ? MeshSource::A : MeshSource::B});
      }
    }
  }
  return TriMesh(std::move(vertices), std::move(faces), std::move(provenance));
}

BooleanResult mesh_boolean(const TriMesh& a, const TriMesh& b, const BoolOpSpec& spec, unsigned threads) {
  BooleanResult result;
  result.refined = corefine(a, b);
  result.classified = classify(result.refined, spec, hierarchical_evaluator(threads));
  result.duplicates = resolve_coplanar(result.refined, spec);
  result.mesh = assemble(result.classified, result.duplicates, result.refined);
  return result;
}

std::string to_string(BoolOp op) {
  switch (op) {
    case BoolOp::Union: return "union";
    case BoolOp::Intersection: return "intersect";
    case BoolOp::DifferenceAB: return "minus";
    case BoolOp::DifferenceBA: return "rminus";
    case BoolOp::SymmetricDifference: return "xor";
  }
  return "?";
}

std::string to_string(InsideRule rule) {
  switch (rule) {
    case InsideRule::WindingGtHalf: return "gt-half";
    case InsideRule::AbsWindingGtHalf: return "abs-gt-half";
    case InsideRule::WindingPositive: return "positive";
    case InsideRule::AbsWindingPositive: return "abs-positive";
  }
  return "?";
}

std::string to_string(FaceAction action) {
  switch (action) {
    case FaceAction::Keep: return "keep";
    case FaceAction::KeepFlip: return "keep-flip";
    case FaceAction::Discard: return "discard";
  }
  return "?";
}

}  // namespace windbool
