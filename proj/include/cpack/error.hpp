#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cpack {

enum class ErrorCode {
  invalid_input,
  non_manifold,
  orientation_error,
  disconnected,
  pinched_vertex,
  unknown_vertex,
  boundary_edge,
  flip_would_create_duplicate_edge,
  flip_would_break_degree,
  boundary_vertex,
  result_not_manifold,
  boundary_face,
  adjacent_hole_overlap,
  too_few_petals,
  jumps_adjacent,
  both_infinite,
  negative_radius,
  degenerate_triple,
  violates_star_star,
  lemma_hypothesis_violated,
  singular_matrix,
  loop_not_separating,
  non_convergence,
  star_violation,
  inconsistent_pins,
  degenerate_face,
  open_chain,
  not_horocycle,
  coincident_centers,
  non_integral_winding,
  branch_value_on_curve,
  point_outside_interstice,
  point_outside_circle,
  no_sign_change,
  holonomy_nontrivial,
  winding_mismatch,
  too_small,
};

constexpr std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_input: return "InvalidInput";
    case ErrorCode::non_manifold: return "NonManifold";
    case ErrorCode::orientation_error: return "OrientationError";
    case ErrorCode::disconnected: return "Disconnected";
    case ErrorCode::pinched_vertex: return "PinchedVertex";
    case ErrorCode::unknown_vertex: return "UnknownVertex";
    case ErrorCode::boundary_edge: return "BoundaryEdge";
    case ErrorCode::flip_would_create_duplicate_edge: return "FlipWouldCreateDuplicateEdge";
    case ErrorCode::flip_would_break_degree: return "FlipWouldBreakDegree";
    case ErrorCode::boundary_vertex: return "BoundaryVertex";
    case ErrorCode::result_not_manifold: return "ResultNotManifold";
    case ErrorCode::boundary_face: return "BoundaryFace";
    case ErrorCode::adjacent_hole_overlap: return "AdjacentHoleOverlap";
    case ErrorCode::too_few_petals: return "TooFewPetals";
    case ErrorCode::jumps_adjacent: return "JumpsAdjacent";
    case ErrorCode::both_infinite: return "BothInfinite";
    case ErrorCode::negative_radius: return "NegativeRadius";
    case ErrorCode::degenerate_triple: return "DegenerateTriple";
    case ErrorCode::violates_star_star: return "ViolatesStarStar";
    case ErrorCode::lemma_hypothesis_violated: return "LemmaHypothesisViolated";
    case ErrorCode::singular_matrix: return "SingularMatrix";
    case ErrorCode::loop_not_separating: return "LoopNotSeparating";
    case ErrorCode::non_convergence: return "NonConvergence";
    case ErrorCode::star_violation: return "StarViolation";
    case ErrorCode::inconsistent_pins: return "InconsistentPins";
    case ErrorCode::degenerate_face: return "DegenerateFace";
    case ErrorCode::open_chain: return "OpenChain";
    case ErrorCode::not_horocycle: return "NotHorocycle";
    case ErrorCode::coincident_centers: return "CoincidentCenters";
    case ErrorCode::non_integral_winding: return "NonIntegralWinding";
    case ErrorCode::branch_value_on_curve: return "BranchValueOnCurve";
    case ErrorCode::point_outside_interstice: return "PointOutsideInterstice";
    case ErrorCode::point_outside_circle: return "PointOutsideCircle";
    case ErrorCode::no_sign_change: return "NoSignChange";
    case ErrorCode::holonomy_nontrivial: return "HolonomyNontrivial";
    case ErrorCode::winding_mismatch: return "WindingMismatch";
    case ErrorCode::too_small: return "TooSmall";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace cpack
