#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "windbool/corefine.hpp"
#include "windbool/mesh.hpp"
#include "windbool/winding.hpp"

namespace windbool {

enum class BoolOp { Union, Intersection, DifferenceAB, DifferenceBA, SymmetricDifference };

/// How a real winding value becomes an inside/outside decision.
enum class InsideRule {
  WindingGtHalf,      ///< w > 1/2 (default)
  AbsWindingGtHalf,   ///< |w| > 1/2, inside-out regions count as inside
  WindingPositive,    ///< w > 0 for immersed closed meshes
  AbsWindingPositive  ///< |w| > 0
};

struct BoolOpSpec {
  BoolOp op = BoolOp::Union;
  InsideRule inside_rule = InsideRule::WindingGtHalf;
};

enum class FaceAction { Keep, KeepFlip, Discard };

struct ClassifiedFace {
  MeshSource source = MeshSource::A;
  std::uint32_t face = 0;  // index into the refined mesh of `source`
  WindingValue winding_of_other;
  FaceAction action = FaceAction::Discard;
};

/// Actions for one coplanar duplicate pair.
struct DuplicateAction {
  CoplanarPair pair;
  FaceAction action_a = FaceAction::Discard;
  FaceAction action_b = FaceAction::Discard;
};

/// Raised when a face barycenter lands exactly on the other mesh.
class RobustnessError : public std::runtime_error {
 public:
  RobustnessError(MeshSource source, std::uint32_t face);
  MeshSource source() const { return source_; }
  std::uint32_t face() const { return face_; }

 private:
  MeshSource source_;
  std::uint32_t face_;
};

/// Winding numbers of `mesh` at `points`, in order.
using WindingEvaluator = std::function<std::vector<WindingValue>(const TriMesh& mesh, std::span<const Point3> points)>;

/// Hierarchical batch evaluator; threads = 0 picks the default.
WindingEvaluator hierarchical_evaluator(unsigned threads = 0);

/// Dead band below which |w| counts as zero for the Positive rules.
inline constexpr double kZeroWindingBand = 1e-9;

bool inside(double w, InsideRule rule);

/// Action for a face of `source` whose barycenter is inside / outside the other operand.
FaceAction action_for(MeshSource source, BoolOp op, bool inside_other);

/// Evaluates the other mesh's winding number at the barycenter of every
/// non-duplicate refined face and assigns actions. One batch per source mesh.
std::vector<ClassifiedFace> classify(const RefinedPair& pair, const BoolOpSpec& spec,
                                     const WindingEvaluator& winding_eval);

/// Keep-one / discard-both decisions for coplanar duplicates.
std::vector<DuplicateAction> resolve_coplanar(const RefinedPair& pair, const BoolOpSpec& spec);

/// Materialises the kept faces; vertices welded by exact coordinates, unused
/// vertices and exactly degenerate faces dropped.
TriMesh assemble(std::span<const ClassifiedFace> classified, std::span<const DuplicateAction> duplicates,
                 const RefinedPair& pair);

struct BooleanResult {
  TriMesh mesh;
  RefinedPair refined;
  std::vector<ClassifiedFace> classified;
  std::vector<DuplicateAction> duplicates;
};

/// corefine -> classify -> resolve_coplanar -> assemble.
BooleanResult mesh_boolean(const TriMesh& a, const TriMesh& b, const BoolOpSpec& spec, unsigned threads = 0);

std::string to_string(BoolOp op);
std::string to_string(InsideRule rule);
std::string to_string(FaceAction action);

}  // namespace windbool
