#pragma once

#include <limits>

#include "suctiongrip/geometry.hpp"
#include "suctiongrip/mesh.hpp"

namespace suctiongrip {

/// Input-mask values for one analysis run. Lengths in mm, angles in degrees.
struct AnalysisParams {
  double cup_diameter = 20.0;
  int cup_count = 3;
  double min_spacing = 30.0;
  double flatness_tol = 0.5;
  double cone_slope = 0.0;
  double max_curvature_angle = 10.0;
  double max_tilt = 30.0;
  Vec3 approach_axis = Vec3::UnitZ();
  double min_line_offset = 10.0;
  double stability_margin = 5.0;
  double raster_spacing = 0.0;  // 0 selects cup_diameter / 4
  double roughness_limit = std::numeric_limits<double>::infinity();
  Vec3 gravity = -Vec3::UnitZ();
  RasterFrame raster_frame = RasterFrame::Identity();
  bool allow_boundary = false;

  double cup_radius() const { return 0.5 * cup_diameter; }
  double effective_raster_spacing() const {
    return raster_spacing > 0.0 ? raster_spacing : cup_diameter / 4.0;
  }

  /// Throws InvalidParams describing the first violated invariant.
  void validate() const;
};

/// Cross-workpiece tolerances: positional deviations measured in the gripper
/// frame, plus tilt and normal-spread differences in degrees.
struct ToleranceSpec {
  double pos_transverse_tol = 1.0;
  double pos_height_tol = 1.0;
  double normal_tilt_tol = 2.0;
  double curvature_tol = 5.0;

  void validate() const;

  static ToleranceSpec zero() { return {0.0, 0.0, 0.0, 0.0}; }
};

}  // namespace suctiongrip
