#pragma once

#include <span>
#include <vector>

#include "suctiongrip/mesh.hpp"
#include "suctiongrip/patch.hpp"

namespace suctiongrip {

struct ConstellationConstraints {
  double min_spacing = 0.0;
  double min_line_offset = 0.0;
  double stability_margin = 0.0;
  Vec3 gravity = -Vec3::UnitZ();

  static ConstellationConstraints from(const AnalysisParams& p) {
    return {p.min_spacing, p.min_line_offset, p.stability_margin, p.gravity};
  }
};

/// Every pairwise distance is at least `min_spacing` (inclusive).
bool spacing_ok(std::span<const GrippingPoint> points, double min_spacing);

/// Seeds strictly farther than `min_spacing` from the placed point.
std::vector<SeedPoint> exclusion_region(std::span<const SeedPoint> seeds, const GrippingPoint& placed,
                                        double min_spacing);

/// Same rule on candidate indices, used by the enumerator.
std::vector<std::size_t> exclusion_region(std::span<const GrippingPoint> candidates,
                                          std::span<const std::size_t> pool, const Vec3& placed,
                                          double min_spacing);

/// Largest distance of any point from the line through the farthest-apart pair
/// (first such pair in index order on ties).
double line_offset(std::span<const GrippingPoint> points);

bool collinearity_ok(std::span<const GrippingPoint> points, double min_line_offset);

/// Smallest singular value of the centred point cloud; diagnostic only.
double collinearity_singular_value(std::span<const GrippingPoint> points);

/// Clearance of the gravity-projected centre of mass inside the convex hull of
/// the projected points; negative when outside. Throws DegenerateProjection.
double stability_clearance(std::span<const GrippingPoint> points, const Vec3& com, const Vec3& gravity);

bool stability_ok(std::span<const GrippingPoint> points, const Vec3& com,
                  const ConstellationConstraints& constraints);

/// All three rules at once; `clearance` receives the hull clearance when the
/// stability rule was evaluated.
bool constellation_ok(std::span<const GrippingPoint> points, const Vec3& com,
                      const ConstellationConstraints& constraints, double* clearance = nullptr);

}  // namespace suctiongrip
