#pragma once

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "suctiongrip/geometry.hpp"
#include "suctiongrip/mesh.hpp"
#include "suctiongrip/params.hpp"

namespace suctiongrip {

/// Fewer samples than this means the footprint found (almost) no surface.
constexpr std::size_t kMinPatchSamples = 6;

struct PatchSample {
  Vec3 point;
  Vec3 normal;
};

/// Surface under one cup footprint: everything connected to the seed whose
/// projection along the cup axis falls inside the footprint disc.
struct SurfacePatch {
  Vec3 center;
  Vec3 center_normal;
  std::vector<PatchSample> samples;  // samples.front() is the centre
  double cup_radius = 0.0;
  /// Part of the footprint disc is not backed by surface facing the cup.
  bool boundary_clipped = false;
};

struct FlatnessReport {
  double max_abs_deviation = 0.0;  // mm from the tangent plane at the centre
  double max_normal_spread = 0.0;  // degrees against the centre normal
  bool cone_violated = false;
  /// Paraboloid fit of deviation against radius; diagnostic only.
  double mean_curvature = 0.0;
};

enum class RejectionReason { BoundaryOverhang, ConeViolation, NormalSpread, PrefilterTilt };

constexpr std::string_view to_string(RejectionReason r) {
  switch (r) {
    case RejectionReason::BoundaryOverhang:
      return "boundary_overhang";
    case RejectionReason::ConeViolation:
      return "cone_violation";
    case RejectionReason::NormalSpread:
      return "normal_spread";
    case RejectionReason::PrefilterTilt:
      return "prefilter_tilt";
  }
  return "unknown";
}

std::optional<RejectionReason> parse_rejection_reason(std::string_view name);

struct GrippingPoint {
  Vec3 position;
  Vec3 normal;
  double quality = 0.0;          // 1 = perfectly flat, 0 = at the flatness limit
  double normal_spread = 0.0;    // degrees, from the patch
  double max_abs_deviation = 0.0;
  std::size_t seed_index = 0;    // index into the seed list the point came from
};

struct Rejection {
  RejectionReason reason;
  std::optional<FlatnessReport> report;
};

using CandidateOutcome = std::variant<GrippingPoint, Rejection>;

/// Throws PatchTooSparse when fewer than kMinPatchSamples samples are found.
SurfacePatch extract_patch(const TriangleMesh& mesh, const SeedPoint& seed, double cup_diameter);

/// Cone envelope per sample: |axial| <= flatness_tol + cone_slope * radial.
FlatnessReport flatness_check(const SurfacePatch& patch, double flatness_tol, double cone_slope);

/// Rules run in fixed order: footprint coverage, cone envelope, normal spread.
CandidateOutcome evaluate_candidate(const TriangleMesh& mesh, const SeedPoint& seed,
                                    const AnalysisParams& params);

}  // namespace suctiongrip
