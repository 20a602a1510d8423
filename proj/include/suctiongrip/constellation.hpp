#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "suctiongrip/constraints.hpp"
#include "suctiongrip/mesh.hpp"
#include "suctiongrip/params.hpp"
#include "suctiongrip/patch.hpp"

namespace suctiongrip {

/// Gripper frame: origin at the centroid of the points, z along the mean
/// normal, x towards point 0 projected into the plane. Rows of `axes` are x, y, z.
struct GripperFrame {
  Vec3 origin = Vec3::Zero();
  Mat3 axes = Mat3::Identity();

  Vec3 to_local(const Vec3& p) const { return axes * (p - origin); }
  Vec3 direction_to_local(const Vec3& d) const { return axes * d; }
  Vec3 z() const { return axes.row(2).transpose(); }
};

struct Constellation {
  std::vector<GrippingPoint> points;
  GripperFrame frame;
  double stability_score = 0.0;  // hull clearance in mm
};

/// Frame for points kept in the given order (point 0 defines the x axis).
GripperFrame frame_for(const std::vector<GrippingPoint>& points);

/// Reorders the points counter-clockwise about the mean normal, starting at the
/// point farthest from the centroid (lowest input index on ties), and builds the frame.
Constellation canonicalize(std::vector<GrippingPoint> points, double stability_score = 0.0);

/// Polar coordinates of a point in a frame: angle in degrees [0, 360), in-plane radius in mm.
std::pair<double, double> polar_in_frame(const GripperFrame& frame, const Vec3& p);

/// Everything one workpiece contributes to the search.
struct WorkpieceAnalysis {
  std::string name;
  MassProperties mass;
  std::size_t seed_count = 0;
  std::size_t prefiltered_count = 0;
  std::size_t evaluated_count = 0;  // after removing coincident seeds
  std::vector<SeedPoint> seeds;     // evaluated seeds, in raster order
  std::vector<GrippingPoint> candidates;  // quality order, ties by seed order
  std::map<RejectionReason, std::size_t> rejections;
  bool roughness_exceeded = false;
  bool empty_raster = false;
};

/// raster -> prefilter -> evaluate. Candidate evaluation runs on `threads`
/// workers (0 = hardware concurrency); output order does not depend on it.
WorkpieceAnalysis analyze_workpiece(const TriangleMesh& mesh, const AnalysisParams& params,
                                    unsigned threads = 0);

struct EnumerationStats {
  std::size_t nodes = 0;
  std::size_t emitted = 0;
  bool truncated = false;  // node budget ran out before exhausting the tree
};

/// Callback receives each accepted constellation in enumeration order; return
/// false to stop. Candidate indices refer to `candidates`.
using ConstellationSink =
    std::function<bool(const Constellation&, const std::vector<std::size_t>& indices)>;

/// Depth-first search over increasing candidate indices; survivors of each
/// placement are filtered through exclusion_region. Returns statistics.
EnumerationStats for_each_constellation(const std::vector<GrippingPoint>& candidates, const Vec3& com,
                                        const AnalysisParams& params, const ConstellationSink& sink,
                                        std::size_t node_budget = 200'000'000);

/// Up to `limit` constellations. Throws NoConstellation when none exists.
std::vector<Constellation> enumerate_constellations(const TriangleMesh& mesh,
                                                    const std::vector<GrippingPoint>& candidates,
                                                    const AnalysisParams& params, std::size_t limit);

struct PointResidual {
  double transverse = 0.0;  // mm, in the gripper plane
  double height = 0.0;      // mm, along the gripper z axis
  double tilt = 0.0;        // degrees between normals
  double curvature = 0.0;   // degrees, difference in patch normal spread
};

struct MatchResult {
  bool matched = false;
  std::vector<PointResidual> per_point_residuals;
  PointResidual worst_case;
  std::vector<std::size_t> assignment;  // target candidate index per constellation point
  RigidTransform target_to_source;      // normal-weighted least-squares alignment
};

/// Optional veto on a complete assignment (indices into the target list).
using AssignmentFilter = std::function<bool(const std::vector<std::size_t>&)>;

/// Number of nearest target candidates considered per constellation point.
constexpr std::size_t kMatchNeighbourCap = 32;

MatchResult match_constellation(const Constellation& c, const std::vector<GrippingPoint>& target_candidates,
                                const ToleranceSpec& tol, const AssignmentFilter& filter = {});

struct WorkpieceDiagnostics {
  std::string name;
  std::size_t seed_count = 0;
  std::size_t candidate_count = 0;
  std::map<RejectionReason, std::size_t> rejections;
  bool roughness_exceeded = false;
  bool watertight = true;
};

struct CommonResult {
  bool found = false;
  Constellation common;  // on workpiece 0 (also the best prefix constellation on failure)
  std::vector<Constellation> per_workpiece;  // matched point sets, in common's order
  std::vector<MatchResult> matches;          // workpieces 1..n-1
  std::size_t tried = 0;                     // workpiece-0 constellations examined
  std::size_t best_prefix = 0;               // workpieces gripped by the best attempt
  bool has_best = false;
  std::vector<WorkpieceDiagnostics> diagnostics;
  std::string failure;                       // empty on success
};

/// Test-and-backtrack over the constellations of workpiece 0 against the rest.
CommonResult solve_common(const std::vector<TriangleMesh>& workpieces, const AnalysisParams& params,
                          const ToleranceSpec& tol, std::size_t budget = 10'000);

/// Same loop on precomputed analyses (no raster/evaluation work repeated).
CommonResult solve_common(const std::vector<WorkpieceAnalysis>& analyses,
                          const std::vector<bool>& watertight, const AnalysisParams& params,
                          const ToleranceSpec& tol, std::size_t budget = 10'000);

}  // namespace suctiongrip
