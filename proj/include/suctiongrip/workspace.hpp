#pragma once

#include <vector>

#include "suctiongrip/constellation.hpp"

namespace suctiongrip {

/// Adjustment range of one gripper arm about the common gripper axis.
/// Angles in degrees with angle_min in [-180, 180) and angle_max >= angle_min
/// (the envelope may extend past 180); radii in mm.
struct ArmRange {
  double angle_min = 0.0;
  double angle_max = 0.0;
  double radius_min = 0.0;
  double radius_max = 0.0;
  bool angle_fixed = true;
  bool radius_fixed = true;

  double angle_extent() const { return angle_max - angle_min; }
  double radius_extent() const { return radius_max - radius_min; }
  /// Boundary-inclusive membership of a polar coordinate.
  bool reaches(double angle_deg, double radius_mm) const;
};

struct WorkspaceSpec {
  int arm_count = 0;
  std::vector<ArmRange> per_arm;
  int dof_required = 0;  // adjustable scalar ranges (angle and radius counted separately)
  bool fixed = true;
};

struct SnapTolerance {
  double mm = 1.0;
  double deg = 1.0;
};

/// Polar coordinates of every arm of every constellation, expressed in the
/// canonical frame of the first constellation after aligning each one to it.
std::vector<std::vector<std::pair<double, double>>> arm_coordinates(
    const std::vector<Constellation>& constellations);

/// Throws MixedArity when cup counts differ, InvalidParams on an empty list.
WorkspaceSpec plan_workspace(const std::vector<Constellation>& constellations, SnapTolerance snap);

}  // namespace suctiongrip
